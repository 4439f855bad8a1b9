#pragma once
// Regularity conditions RC1 .. RC8 (and RC6') for the three problem families,
// the implication graph between them, and the diagnosis of an instance.

#include "dualdiag/duality.hpp"

namespace dualdiag {

class NotApplicable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInstance : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CondIndex { RC1, RC2, RC3, RC4, RC5, RC6p, RC6, RC7, RC8 };
inline constexpr CondIndex kAllConditions[] = {CondIndex::RC1,  CondIndex::RC2, CondIndex::RC3,
                                               CondIndex::RC4,  CondIndex::RC5, CondIndex::RC6p,
                                               CondIndex::RC6,  CondIndex::RC7, CondIndex::RC8};
std::string condition_label(CondIndex i);  // "RC1", ..., "RC6'", ...
CondIndex parse_condition(const std::string& s);

struct ConditionId {
    Family family;
    CondIndex index;
    std::string name() const;  // e.g. "RC6'[fenchel]"
    bool operator<(const ConditionId& o) const {
        return std::pair(family, index) < std::pair(o.family, o.index);
    }
    bool operator==(const ConditionId& o) const { return family == o.family && index == o.index; }
};

bool applicable(Family f, CondIndex i);
std::vector<CondIndex> applicable_conditions(Family f);

struct Clause {
    std::string description;
    FactStatus status = FactStatus::Unknown;
    Provenance provenance;
};

struct ConditionVerdict {
    ConditionId id;
    FactStatus status = FactStatus::Unknown;
    std::vector<Clause> clauses;
    // First clause that fails, or else the first one left unknown.
    std::optional<std::size_t> blocking() const;
};

// Combines clause statuses: Holds iff all hold, Fails iff one fails.
FactStatus combine(const std::vector<Clause>& clauses);

// Edge from => to, active when every named hypothesis holds.
struct Edge {
    CondIndex from, to;
    std::vector<std::string> requires_;
    std::string citation;
};

struct ImplicationGraph {
    Family family;
    std::vector<Edge> edges;
};
ImplicationGraph implication_graph(Family f);

// Hypotheses referenced by edges and clauses: "frechet", "lsc", "finite-dim",
// "finite-value".
using Hypotheses = std::map<std::string, FactStatus>;
Hypotheses hypotheses(const Instance& inst);

struct ValueReport {
    ExtendedReal primal, dual;
    bool primal_known = false, dual_known = false;
    bool primal_attained = false, dual_attained = false;
    std::optional<Vector> primal_point, dual_point;
    std::string primal_solution, dual_solution;
    std::string source;  // "computed" or "declared"
    // nullopt when not applicable (both values -inf, or a value is unknown).
    std::optional<ExtendedReal> gap() const;
};
ValueReport compute_values(const Instance& inst);

enum class DualityVerdict { GuaranteedBy, VerifiedNumerically, GapDetected, Undecided };
std::string verdict_name(DualityVerdict v);

struct Diagnosis {
    std::string id;
    Family family = Family::Fenchel;
    std::map<ConditionId, ConditionVerdict> verdicts;
    Hypotheses hyps;
    ValueReport values;
    DualityVerdict verdict = DualityVerdict::Undecided;
    std::optional<CondIndex> guaranteed_by;
    std::optional<SeparationResult> separation;
    bool consistent = true;
    std::vector<std::string> violations;
    std::vector<std::string> notes;

    const ConditionVerdict& at(CondIndex i) const;
    FactStatus status(CondIndex i) const { return at(i).status; }
};

// Direct evaluation of one condition, without the implication graph.
ConditionVerdict evaluate_condition(const ConditionId& id, const Instance& inst);
ConditionVerdict evaluate_condition(const ConditionId& id, const Instance& inst, const ValueReport& values);
ConditionVerdict check_rc8(const Instance& inst);

Diagnosis diagnose(const Instance& inst);

// Returns the violated edges (empty when consistent).
std::vector<std::string> consistency_check(const Diagnosis& d);

}  // namespace dualdiag
