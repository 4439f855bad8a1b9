#pragma once
// Problem files: a line-oriented "key: value | citation" format whose
// expressions use the canonical key grammar of the expression layer.
// docs/grammar.md has the EBNF.

#include "dualdiag/conditions.hpp"

namespace dualdiag {

struct ExpectedStatus {
    CondIndex index;
    FactStatus status;
    std::string citation;
};

// One membership question of a "sets" file.
struct SetQuery {
    std::optional<Notion> notion;
    Point point;
    SetExpr set;
    std::string set_text;
    std::optional<FactStatus> expected;
    std::string citation;
};

struct AttributeDeclaration {
    std::string target;  // f, g or phi
    FnAttr attr;
    FactStatus status;
    std::string reason;
};

struct ProblemFile {
    std::string id;
    std::string title;
    std::string kind;    // fenchel | lagrange | perturbation | sets
    std::string regime;  // numeric | symbolic
    SpaceTag space;      // X
    std::optional<SpaceTag> second_space;  // Y (Fenchel with operator), Z (Lagrange), Y (perturbation)
    std::vector<std::pair<std::string, std::set<std::string>>> atoms;

    std::optional<Instance> instance;
    std::vector<AttributeDeclaration> attributes;
    std::vector<std::string> fact_texts;  // as written, parallel to instance facts / set facts
    std::vector<DeclaredFact> set_facts;  // facts of a "sets" file
    std::vector<SetQuery> queries;

    std::vector<ExpectedStatus> expected;
    std::optional<DeclaredValue> expect_primal, expect_dual;
    std::optional<std::string> expect_gap;  // an extended real or "n/a"
    std::optional<std::string> expect_verdict;
    std::optional<std::string> expect_primal_solution, expect_dual_solution;
    std::vector<std::string> notes;
};

ProblemFile parse_problem(const std::string& text);
ProblemFile read_problem(const std::string& path);
std::string serialize_problem(const ProblemFile& p);

// Expression parsing in a given space; `atoms` supplies the sign tags of
// named points and `refs` the @-references.
struct ParseScope {
    std::map<std::string, std::set<std::string>> atoms;
    std::map<std::string, SetExpr> refs;
};
SpaceTag parse_space(const std::string& text);
Point parse_point(const std::string& text, const SpaceTag& space, const ParseScope& scope);
SetExpr parse_set(const std::string& text, const SpaceTag& space, const ParseScope& scope);
FunctionExpr parse_function(const std::string& text, const SpaceTag& space, const ParseScope& scope);
MapExpr parse_map(const std::string& text, const SpaceTag& from, const SpaceTag& to, const ParseScope& scope);

}  // namespace dualdiag
