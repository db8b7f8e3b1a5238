#include "pts/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pts/corpus.hpp"
#include "pts/development.hpp"
#include "pts/errors.hpp"
#include "pts/print.hpp"
#include "pts/reduction.hpp"

namespace pts {

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure("cannot read `" + path + "`");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::optional<PtsSpec> system_override(const std::string& name) {
    if (name.empty()) return std::nullopt;
    auto spec = PtsSpec::from_name(name);
    if (!spec) throw Failure("unknown system `" + name + "`");
    return spec;
}

// A target is a file path or, when no such file exists, a bundle id.
std::string load_target(const std::string& target) {
    if (std::filesystem::exists(target)) return read_file(target);
    const auto& ids = bundle_ids();
    if (std::find(ids.begin(), ids.end(), target) != ids.end()) return bundle_source(target);
    throw Failure("no file or bundle named `" + target + "`");
}

Development load_development(const std::string& target, const std::string& system, bool raw,
                             std::ostream& out) {
    std::string text = load_target(target);
    Development dev = check_development(parse_file(text), system_override(system), raw);
    if (!dev.ok) {
        out << render_report(dev);
        throw Failure("`" + target + "` does not check");
    }
    return dev;
}

const KeyTerm& key_term(const Development& dev, const std::string& target, const std::string& name) {
    if (const KeyTerm* k = dev.key_term(name)) return *k;
    throw Failure("unknown term `" + name + "` in `" + target + "`");
}

struct TraceFlags {
    std::size_t steps = 10;
    std::string strategy = "head-def";
    std::string format = "text";
    bool raw = false;
};

Strategy parse_strategy(const std::string& s) {
    auto r = strategy_from_name(s);
    if (!r) throw Failure("unknown strategy `" + s + "`");
    return *r;
}

ErasureMode parse_mode(const std::string& s) {
    auto r = erasure_mode_from_name(s);
    if (!r) throw Failure("unknown erasure mode `" + s + "`");
    return *r;
}

void render_trace(const Trace& tr, const TraceFlags& flags, std::ostream& out, std::ostream& err) {
    for (const auto& s : tr.steps) {
        if (flags.format == "structured") {
            nlohmann::json j{{"index", s.index},
                             {"event", event_kind_name(s.event.kind)},
                             {"detail", describe(s.event)},
                             {"display", s.display},
                             {"raw", print_raw(s.raw)}};
            out << j.dump() << "\n";
        } else {
            out << (flags.raw ? print_raw(s.raw) : s.display) << "\n";
        }
    }
    err << "-- stopped: " << stop_reason_name(tr.stop);
    if (tr.loop_entry) err << " (repeats step " << *tr.loop_entry << ")";
    err << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pure type system kernel with a head reduction trace engine", "pts"};
    app.require_subcommand(1);

    std::string system;
    bool raw = false;
    TraceFlags flags;
    std::string target;
    std::string term = "bottomProof";
    std::string erase_mode;
    std::size_t bound = 1000;
    std::string out_dir = "corpus";

    const std::vector<std::string> strategies{"head-def", "head-linear"};
    const std::vector<std::string> formats{"text", "structured"};
    const std::vector<std::string> modes{"annotations", "poly"};
    const std::vector<std::string> systems{"lambda-hol", "lambda-u-minus"};

    auto* check = app.add_subcommand("check", "Type check a development file");
    check->add_option("file", target, "Development file or bundle id")->required();
    check->add_option("--system", system, "Override the signature")->check(CLI::IsMember(systems));
    check->add_flag("--raw", raw, "Also print unfolded terms in errors");

    auto add_run_options = [&](CLI::App* sub) {
        sub->add_option("target", target, "Development file or bundle id")->required();
        sub->add_option("term", term, "Name of a `trace` directive")->capture_default_str();
        sub->add_option("--system", system, "Override the signature")->check(CLI::IsMember(systems));
        sub->add_option("--strategy", flags.strategy)->check(CLI::IsMember(strategies))->capture_default_str();
    };

    auto* tr = app.add_subcommand("trace", "Print the head reduction trace of a term");
    add_run_options(tr);
    tr->add_option("--steps", flags.steps, "Maximum number of steps")->capture_default_str();
    tr->add_option("--format", flags.format)->check(CLI::IsMember(formats))->capture_default_str();
    tr->add_flag("--raw", flags.raw, "Print states without folding");

    auto* er = app.add_subcommand("erase", "Print the trace of the erased term");
    add_run_options(er);
    er->add_option("--erase", erase_mode, "Erasure mode")->check(CLI::IsMember(modes))->required();
    er->add_option("--steps", flags.steps, "Maximum number of steps")->capture_default_str();
    er->add_option("--format", flags.format)->check(CLI::IsMember(formats))->capture_default_str();
    er->add_flag("--raw", flags.raw, "Print states without folding");

    auto* lp = app.add_subcommand("loop", "Look for a repeated reduction state");
    add_run_options(lp);
    lp->add_option("--bound", bound, "Maximum number of steps")->capture_default_str();
    lp->add_option("--erase", erase_mode, "Erase the term first")->check(CLI::IsMember(modes));

    auto* ls = app.add_subcommand("list", "List corpus bundles");

    auto* gen = app.add_subcommand("gen-corpus", "Write corpus/<id>.pts for every bundle");
    gen->add_option("dir", out_dir, "Output directory")->capture_default_str();

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, r;
        int code = app.exit(e, o, r);
        out << o.str();
        err << r.str();
        return code;
    }

    try {
        if (check->parsed()) {
            std::string text = load_target(target);
            Development dev = check_development(parse_file(text), system_override(system), raw);
            out << render_report(dev);
            return dev.ok ? 0 : 1;
        }
        if (tr->parsed()) {
            Development dev = load_development(target, system, false, out);
            const KeyTerm& k = key_term(dev, target, term);
            render_trace(trace(dev.env, k.term, parse_strategy(flags.strategy), flags.steps), flags,
                         out, err);
            return 0;
        }
        if (er->parsed()) {
            Development dev = load_development(target, system, false, out);
            const KeyTerm& k = key_term(dev, target, term);
            ErasureMode mode = parse_mode(erase_mode);
            GlobalEnv env = erase_env(dev.env, mode);
            Term t = erase(k.term, mode, &dev.env);
            render_trace(trace(env, t, parse_strategy(flags.strategy), flags.steps), flags, out, err);
            return 0;
        }
        if (lp->parsed()) {
            Development dev = load_development(target, system, false, out);
            const KeyTerm& k = key_term(dev, target, term);
            std::optional<ErasureMode> mode;
            if (!erase_mode.empty()) mode = parse_mode(erase_mode);
            LoopReport r = detect_loop(dev.env, k.term, parse_strategy(flags.strategy), mode, bound);
            out << "found=" << (r.found ? "true" : "false");
            if (r.found) out << " entry=" << r.entry << " period=" << r.period;
            out << " steps=" << r.bound << " erase=" << (mode ? erasure_mode_name(*mode) : "none")
                << " observation=" << observation_name(r.observation) << "\n";
            return 0;
        }
        if (ls->parsed()) {
            for (const auto& id : bundle_ids()) {
                ParadoxBundle b = build_bundle(id);
                out << id << "  " << preset_name(b.spec) << "  rules=" << b.rewrite_rules
                    << "  terms=" << b.key_terms.size() << "\n";
            }
            return 0;
        }
        if (gen->parsed()) {
            std::filesystem::create_directories(out_dir);
            for (const auto& id : bundle_ids()) {
                build_bundle(id);  // refuse to write a bundle that does not check
                std::filesystem::path p = std::filesystem::path(out_dir) / (id + ".pts");
                std::ofstream f(p, std::ios::binary);
                f << bundle_source(id);
                if (!f) throw Failure("cannot write `" + p.string() + "`");
                out << "wrote " << p.string() << "\n";
            }
            return 0;
        }
    } catch (const ParseError& e) {
        err << target << ":" << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace pts
