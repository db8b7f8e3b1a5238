#include "pts/corpus.hpp"

#include <algorithm>

namespace pts {

namespace {

constexpr std::string_view kPrelude = R"(def ⊥ : * := forall (p : *), p.
def ¬ (p : *) : * := p -> ⊥.
def Pow (X : #) : # := X -> *.
def T (X : #) : # := Pow (Pow X).
)";

// The functorial action of T, needed as a term only where # can be
// abstracted over.
constexpr std::string_view kTmap = R"(def Tmap (X Y : #) (f : X -> Y) : T X -> T Y := fun (F : T X) (q : Pow Y) => F (q∘f).
conv under (X Y Z : #) (f : X -> Y) (g : Y -> Z), Tmap X Z (g∘f) = (Tmap Y Z g)∘(Tmap X Y f).
)";

constexpr std::string_view kSimple = R"(const A : #.
const intro : T A -> A.
const match : A -> T A.
rewrite match_intro : match (intro $u) => $u.
def C (p : Pow A) (x : A) : * := p x -> ¬ (match x p).
def p₀ : Pow A := fun (x : A) => forall (p : Pow A), C p x.
def X₀ : T A := fun (p : Pow A) => forall (x : A), C p x.
def x₀ : A := intro X₀.
def l₁ : X₀ p₀ := fun (x : A) (h : p₀ x) => h p₀ h.
def l₂ : p₀ x₀ := fun (p : Pow A) (h : p x₀) (h₁ : match x₀ p) => h₁ x₀ h h₁.
check l₁ : match x₀ p₀.
check l₂ p₀ l₂ l₁ : ⊥.
trace bottomProof : ⊥ := l₂ p₀ l₂ l₁.
)";

constexpr std::string_view kRefinedHead = R"(const A : #.
const intro : T A -> A.
const match : A -> T A.
def δ : A -> A := intro∘match.
rewrite match_intro : match (intro $u) => fun (q : Pow A) => $u (q∘δ).
)";

// The refined paradox over a carrier named A, with δ already defined.
constexpr std::string_view kRefinedBody = R"(conv under (x : A) (p : Pow A), match (δ x) p = match x (p∘δ).
def p₀ : Pow A := fun (x : A) => forall (p : Pow A), p (δ x) -> ¬ (match x p).
def X₀ : T A := fun (p : Pow A) => forall (x : A), p x -> ¬ (match x p).
def x₀ : A := intro X₀.
def s₁ : forall (x : A), p₀ x -> p₀ (δ x) := fun (x : A) (h : p₀ x) (p : Pow A) => h (p∘δ).
def s₂ : forall (p : Pow A), X₀ p -> X₀ (p∘δ) := fun (p : Pow A) (h : X₀ p) (x : A) => h (δ x).
def l₀ : forall (p : Pow A), p x₀ -> ¬ (X₀ p) := fun (p : Pow A) (h : p x₀) (h₀ : X₀ p) => h₀ x₀ h (s₂ p h₀).
def l₁ : X₀ p₀ := fun (x : A) (h : p₀ x) => h p₀ (s₁ x h).
def l₂ : p₀ x₀ := fun (p : Pow A) => l₀ (p∘δ).
check l₀ p₀ l₂ l₁ : ⊥.
trace bottomProof : ⊥ := l₀ p₀ l₂ l₁.
)";

constexpr std::string_view kReynoldsCarrier = "def A : # := Pi (X : #) -> (T X -> X) -> X.\n";

constexpr std::string_view kReynolds = R"(def ι (X : #) (f : T X -> X) : A -> X := fun (a : A) => a X f.
def intro : T A -> A := fun (u : T A) (X : #) (f : T X -> X) => f (Tmap A X (ι X f) u).
def match : A -> T A := ι (T A) (Tmap (T A) A intro).
conv match∘intro = Tmap A A (intro∘match).
conv under (X : #) (f : T X -> X), (ι X f)∘intro = f∘(Tmap A X (ι X f)).
def δ : A -> A := intro∘match.
)";

constexpr std::string_view kHurkensCarrier = "def B : # := Pi (X : #) -> (T X -> X) -> T X.\n";

constexpr std::string_view kHurkensHead = R"(def ι (X : #) (f : T X -> X) : B -> X := fun (b : B) => f (b X f).
def intro : T B -> B := fun (v : T B) (X : #) (f : T X -> X) => Tmap B X (ι X f) v.
)";

constexpr std::string_view kMatch1 = "def match : B -> T B := ι (T B) (Tmap (T B) B intro).\n";
constexpr std::string_view kMatch2 = "def match : B -> T B := fun (b : B) => b B intro.\n";

constexpr std::string_view kHurkensTail = R"(conv match∘intro = Tmap B B (intro∘match).
def δ : B -> B := intro∘match.
)";

std::string over_carrier(std::string_view body, std::string_view carrier) {
    std::string out;
    for (char c : body) {
        if (c == 'A') out += carrier;
        else out += c;
    }
    return out;
}

std::string header(std::string_view id, std::string_view system) {
    return "-- corpus bundle " + std::string(id) + ", generated by `pts gen-corpus`\nsystem " +
           std::string(system) + ".\n";
}

const std::vector<std::string> kSimpleRows{
    "l₂ p₀ l₂ l₁",
    "l₁ x₀ l₂ l₁",
    "l₂ p₀ l₂ l₁",
};

const std::vector<std::string> kRefinedRows{
    "l₀ p₀ l₂ l₁",
    "l₁ x₀ l₂ (s₂ p₀ l₁)",
    "l₂ p₀ (s₁ x₀ l₂) (s₂ p₀ l₁)",
    "l₀ (p₀∘δ) (s₁ x₀ l₂) (s₂ p₀ l₁)",
    "s₂ p₀ l₁ x₀ (s₁ x₀ l₂) (s₂ (p₀∘δ) (s₂ p₀ l₁))",
    "l₁ (δ x₀) (s₁ x₀ l₂) (s₂ (p₀∘δ) (s₂ p₀ l₁))",
};

ParadoxBundle assemble(std::string_view id, PresetId preset, std::vector<std::string> rows) {
    std::string text = bundle_source(id);
    Development dev = check_development_text(text);
    if (!dev.ok) throw std::logic_error("corpus bundle " + std::string(id) + " fails to check:\n" +
                                        render_report(dev));
    ParadoxBundle b{std::string(id), preset, dev.env, {}, {}, {}, dev.env.rewrite_count(), dev};
    for (const auto& k : dev.key_terms) {
        b.key_terms.emplace(k.name, k.term);
        b.expected_types.emplace(k.name, k.type);
    }
    for (const char* name : {"l₀", "l₁", "l₂", "s₁", "s₂"}) {
        if (auto ty = dev.env.type_of(name)) {
            b.key_terms.emplace(name, mk_const(name));
            b.expected_types.emplace(name, *ty);
        }
    }
    b.golden_traces.emplace(Strategy::HeadDef, std::move(rows));
    return b;
}

}  // namespace

const std::vector<std::string>& bundle_ids() {
    static const std::vector<std::string> ids{"simple", "refined-axiomatic", "reynolds-A",
                                              "hurkens-B-match1", "hurkens-B-match2"};
    return ids;
}

std::string bundle_source(std::string_view id) {
    std::string s;
    if (id == "simple") {
        s = header(id, "lambda-hol");
        s += kPrelude;
        s += kSimple;
    } else if (id == "refined-axiomatic") {
        s = header(id, "lambda-hol");
        s += kPrelude;
        s += kRefinedHead;
        s += kRefinedBody;
    } else if (id == "reynolds-A") {
        s = header(id, "lambda-u-minus");
        s += kPrelude;
        s += kReynoldsCarrier;
        s += kTmap;
        s += kReynolds;
        s += kRefinedBody;
    } else if (id == "hurkens-B-match1" || id == "hurkens-B-match2") {
        s = header(id, "lambda-u-minus");
        s += kPrelude;
        s += kHurkensCarrier;
        s += kTmap;
        s += kHurkensHead;
        s += id == "hurkens-B-match1" ? kMatch1 : kMatch2;
        s += kHurkensTail;
        s += over_carrier(kRefinedBody, "B");
    } else {
        throw UnknownBundle(std::string(id));
    }
    return s;
}

ParadoxBundle build_simple() { return assemble("simple", PresetId::LambdaHOL, kSimpleRows); }

ParadoxBundle build_refined_axiomatic() {
    return assemble("refined-axiomatic", PresetId::LambdaHOL, kRefinedRows);
}

ParadoxBundle build_reynolds_a() { return assemble("reynolds-A", PresetId::LambdaUMinus, kRefinedRows); }

ParadoxBundle build_hurkens_b(HurkensVariant v) {
    return assemble(v == HurkensVariant::Match1 ? "hurkens-B-match1" : "hurkens-B-match2",
                    PresetId::LambdaUMinus, kRefinedRows);
}

ParadoxBundle build_bundle(std::string_view id) {
    if (id == "simple") return build_simple();
    if (id == "refined-axiomatic") return build_refined_axiomatic();
    if (id == "reynolds-A") return build_reynolds_a();
    if (id == "hurkens-B-match1") return build_hurkens_b(HurkensVariant::Match1);
    if (id == "hurkens-B-match2") return build_hurkens_b(HurkensVariant::Match2);
    throw UnknownBundle(std::string(id));
}

std::size_t golden_steps(const ParadoxBundle& b) {
    const auto& rows = b.golden_traces.at(Strategy::HeadDef);
    return rows.empty() ? 0 : rows.size() - 1;
}

}  // namespace pts
