#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pts/development.hpp"
#include "pts/pts_spec.hpp"
#include "pts/reduction.hpp"

namespace pts {

class UnknownBundle : public std::runtime_error {
public:
    explicit UnknownBundle(const std::string& id) : std::runtime_error("unknown bundle `" + id + "`") {}
};

/// A checked paradox development with its distinguished terms and the
/// reduction rows it must reproduce.
struct ParadoxBundle {
    std::string id;
    PresetId spec;
    GlobalEnv env;
    std::map<std::string, Term> key_terms;
    std::map<std::string, Term> expected_types;
    std::map<Strategy, std::vector<std::string>> golden_traces;  // traces of bottomProof
    std::size_t rewrite_rules = 0;
    Development development;
};

/// Bundle ids in corpus order.
const std::vector<std::string>& bundle_ids();

/// Development text of a bundle, as written to `corpus/<id>.pts`.
std::string bundle_source(std::string_view id);

/// Checks the bundle source and collects its key terms. Throws UnknownBundle
/// for an unknown id and std::logic_error if the development fails to check.
ParadoxBundle build_bundle(std::string_view id);

ParadoxBundle build_simple();
ParadoxBundle build_refined_axiomatic();
ParadoxBundle build_reynolds_a();

enum class HurkensVariant { Match1, Match2 };
ParadoxBundle build_hurkens_b(HurkensVariant v);

/// Number of steps the golden head-def trace of `bottomProof` covers.
std::size_t golden_steps(const ParadoxBundle& b);

}  // namespace pts
