#pragma once
// Set inference: normalization of set expressions and a rule engine that
// decides "point p lies in notion k of set U" with a replayable provenance.

#include "dualdiag/expr.hpp"

#include <functional>
#include <optional>

namespace dualdiag {

class InconsistentFacts : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A question about a point and a set. An empty notion asks for plain
// membership; Point::any() asks whether some point qualifies.
struct Query {
    std::optional<Notion> notion;
    Point point;
    SetExpr set;

    std::string key() const;
    std::string describe() const;
};

struct ProvenanceStep {
    std::string rule;
    std::string citation;
    std::string conclusion;
    FactStatus status = FactStatus::Unknown;
    std::vector<std::string> premises;  // conclusions established by earlier steps
    std::string detail;
    // Set for steps produced by the rule engine; replay() re-derives those.
    std::optional<Query> query;
};
using Provenance = std::vector<ProvenanceStep>;

struct Inference {
    FactStatus status = FactStatus::Unknown;
    Provenance provenance;
};

struct DeclaredFact {
    std::optional<Notion> notion;
    Point point;
    SetExpr set;
    FactStatus status = FactStatus::Holds;
    std::string citation;
    bool external = false;
};

struct InferenceOptions {
    std::vector<DeclaredFact> facts;
    // Rule application order is permuted with this seed; results must not change.
    std::optional<unsigned> shuffle_seed;
    std::size_t max_queries = 3000;
};

enum class RuleKind { Definition, Lemma, Catalog, Symmetry, Numeric, Declared };
std::string rule_kind_name(RuleKind k);

struct Derivation {
    std::vector<std::pair<Query, FactStatus>> premises;
    FactStatus conclusion = FactStatus::Unknown;
    std::string detail;
};

struct Rule {
    std::string id;
    RuleKind kind;
    std::string statement;
    std::string citation;
    std::function<std::vector<Derivation>(const Query&, const InferenceOptions&)> expand;
};
const std::vector<Rule>& rule_base();

struct Normalized {
    SetExpr set;
    std::vector<std::string> trace;  // ids of the rewrites applied
};
Normalized normalize_traced(const SetExpr& s);
SetExpr normalize(const SetExpr& s);

Inference infer(Notion k, const Point& p, const SetExpr& s, const InferenceOptions& opt = {});
Inference membership(const Point& p, const SetExpr& s, const InferenceOptions& opt = {});
Inference infer_query(const Query& q, const InferenceOptions& opt = {});

// Built-in facts about the catalog atoms at a point described by its tags.
FactStatus catalog_fact(const SetExpr& atom, std::optional<Notion> k, const Point& p);

// Checks every step: the rule re-derives it and each premise was settled earlier.
bool replay(const Provenance& prov, const InferenceOptions& opt = {});

// Sufficient test for inf (f + g) >= v via separate lower bounds.
Inference nonneg_certificate(const FunctionExpr& f, const FunctionExpr& g, const Rational& v);
// Same idea for inf over dom f intersected with S.
Inference lagrange_nonneg_certificate(const FunctionExpr& f, const SetExpr& S, const Rational& v);

}  // namespace dualdiag
