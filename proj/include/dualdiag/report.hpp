#pragma once
// Rendered diagnoses. A ReportDocument holds only strings, so its structured
// form round-trips exactly; text and JSON are both produced from it.

#include "dualdiag/corpus.hpp"

#include "json.hpp"

namespace dualdiag {

struct ReportStep {
    std::string rule, citation, conclusion, status, detail, query;
    std::vector<std::string> premises;
    bool operator==(const ReportStep&) const = default;
};

struct ReportClause {
    std::string description, status;
    std::vector<ReportStep> provenance;
    bool operator==(const ReportClause&) const = default;
};

struct ReportCondition {
    std::string id, status;
    std::optional<std::size_t> blocking;
    std::vector<ReportClause> clauses;
    bool operator==(const ReportCondition&) const = default;
};

struct ReportQuery {
    std::string notion, point, set, status, expected;
    std::vector<ReportStep> provenance;
    bool operator==(const ReportQuery&) const = default;
};

struct ReportSeparation {
    std::string separator, separator_r, dual_point, dual_value;
    bool operator==(const ReportSeparation&) const = default;
};

struct ReportDocument {
    std::string id, kind;
    // Values; empty strings for sets files.
    std::string value_source, primal, dual, gap, primal_solution, dual_solution;
    bool primal_attained = false, dual_attained = false;
    std::string verdict, guaranteed_by;
    std::vector<std::pair<std::string, std::string>> hypotheses;
    std::vector<ReportCondition> conditions;
    std::vector<ReportQuery> queries;
    std::optional<ReportSeparation> separation;
    bool consistent = true;
    std::vector<std::string> violations, notes;
    bool operator==(const ReportDocument&) const = default;
};

ReportDocument make_report(const Diagnosis& d);
ReportDocument make_report(const ProblemFile& p, const RunResult& r);

nlohmann::ordered_json to_json(const ReportDocument& r);
ReportDocument report_from_json(const nlohmann::ordered_json& j);
std::string render_json(const ReportDocument& r);  // two-space indent, trailing newline
std::string render_text(const ReportDocument& r);
std::string render_values_text(const ReportDocument& r);

}  // namespace dualdiag
