#include "dualdiag/report.hpp"

#include <sstream>

namespace dualdiag {

namespace {

ReportStep report_step(const ProvenanceStep& s) {
    ReportStep r;
    r.rule = s.rule;
    r.citation = s.citation;
    r.conclusion = s.conclusion;
    r.status = status_name(s.status);
    r.detail = s.detail;
    r.premises = s.premises;
    if (s.query) r.query = s.query->describe();
    return r;
}

std::vector<ReportStep> report_steps(const Provenance& p) {
    std::vector<ReportStep> out;
    for (const auto& s : p) out.push_back(report_step(s));
    return out;
}

std::string describe_status(const std::string& s) {
    if (s == "holds") return "established";
    if (s == "fails") return "refuted";
    return "not established";
}

}  // namespace

ReportDocument make_report(const Diagnosis& d) {
    ReportDocument r;
    r.id = d.id;
    r.kind = family_name(d.family);
    const ValueReport& v = d.values;
    r.value_source = v.source;
    r.primal = v.primal_known ? v.primal.str() : "unknown";
    r.dual = v.dual_known ? v.dual.str() : "unknown";
    auto gap = v.gap();
    r.gap = gap ? gap->str() : "n/a";
    r.primal_attained = v.primal_attained;
    r.dual_attained = v.dual_attained;
    r.primal_solution = v.primal_solution;
    r.dual_solution = v.dual_solution;
    r.verdict = verdict_name(d.verdict);
    if (d.guaranteed_by) r.guaranteed_by = condition_label(*d.guaranteed_by);
    for (const auto& [k, s] : d.hyps) r.hypotheses.emplace_back(k, status_name(s));
    for (CondIndex i : applicable_conditions(d.family)) {
        auto it = d.verdicts.find({d.family, i});
        if (it == d.verdicts.end()) continue;
        const ConditionVerdict& cv = it->second;
        ReportCondition c;
        c.id = condition_label(i);
        c.status = status_name(cv.status);
        c.blocking = cv.status == FactStatus::Holds ? std::nullopt : cv.blocking();
        for (const auto& cl : cv.clauses)
            c.clauses.push_back({cl.description, status_name(cl.status), report_steps(cl.provenance)});
        r.conditions.push_back(std::move(c));
    }
    if (d.separation)
        r.separation = ReportSeparation{to_string(d.separation->separator), to_string(d.separation->separator_r),
                                        to_string(d.separation->dual_point), to_string(d.separation->dual_value)};
    r.consistent = d.consistent;
    r.violations = d.violations;
    r.notes = d.notes;
    return r;
}

ReportDocument make_report(const ProblemFile& p, const RunResult& run) {
    if (run.diagnosis) return make_report(*run.diagnosis);
    ReportDocument r;
    r.id = p.id;
    r.kind = "sets";
    for (const auto& q : run.queries) {
        ReportQuery rq;
        rq.notion = q.query.notion ? notion_name(*q.query.notion) : "member";
        rq.point = q.query.point.key();
        rq.set = q.query.set_text;
        rq.status = status_name(q.result.status);
        rq.expected = q.query.expected ? status_name(*q.query.expected) : "";
        rq.provenance = report_steps(q.result.provenance);
        r.queries.push_back(std::move(rq));
    }
    return r;
}

// ------------------------------------------------------------ JSON

namespace {

using json = nlohmann::ordered_json;

json step_json(const ReportStep& s) {
    json j;
    j["rule"] = s.rule;
    j["citation"] = s.citation;
    j["conclusion"] = s.conclusion;
    j["status"] = s.status;
    j["premises"] = s.premises;
    j["detail"] = s.detail;
    j["query"] = s.query;
    return j;
}

ReportStep step_from(const json& j) {
    ReportStep s;
    s.rule = j.at("rule").get<std::string>();
    s.citation = j.at("citation").get<std::string>();
    s.conclusion = j.at("conclusion").get<std::string>();
    s.status = j.at("status").get<std::string>();
    s.premises = j.at("premises").get<std::vector<std::string>>();
    s.detail = j.at("detail").get<std::string>();
    s.query = j.at("query").get<std::string>();
    return s;
}

json steps_json(const std::vector<ReportStep>& v) {
    json a = json::array();
    for (const auto& s : v) a.push_back(step_json(s));
    return a;
}

std::vector<ReportStep> steps_from(const json& j) {
    std::vector<ReportStep> out;
    for (const auto& s : j) out.push_back(step_from(s));
    return out;
}

}  // namespace

nlohmann::ordered_json to_json(const ReportDocument& r) {
    json j;
    j["format"] = "dualdiag-report/1";
    j["id"] = r.id;
    j["kind"] = r.kind;
    if (r.kind != "sets") {
        json v;
        v["source"] = r.value_source;
        v["primal"] = r.primal;
        v["primal_attained"] = r.primal_attained;
        v["dual"] = r.dual;
        v["dual_attained"] = r.dual_attained;
        v["gap"] = r.gap;
        v["primal_solution"] = r.primal_solution;
        v["dual_solution"] = r.dual_solution;
        j["values"] = v;
        j["verdict"] = {{"kind", r.verdict}, {"condition", r.guaranteed_by}};
        json h = json::object();
        for (const auto& [k, s] : r.hypotheses) h[k] = s;
        j["hypotheses"] = h;
        json conds = json::array();
        for (const auto& c : r.conditions) {
            json cj;
            cj["id"] = c.id;
            cj["status"] = c.status;
            cj["blocking"] = c.blocking ? json(*c.blocking) : json(nullptr);
            json cls = json::array();
            for (const auto& cl : c.clauses)
                cls.push_back({{"description", cl.description}, {"status", cl.status},
                               {"provenance", steps_json(cl.provenance)}});
            cj["clauses"] = cls;
            conds.push_back(cj);
        }
        j["conditions"] = conds;
        if (r.separation)
            j["separation"] = {{"separator", r.separation->separator},
                               {"separator_r", r.separation->separator_r},
                               {"dual_point", r.separation->dual_point},
                               {"dual_value", r.separation->dual_value}};
        else
            j["separation"] = nullptr;
    } else {
        json qs = json::array();
        for (const auto& q : r.queries)
            qs.push_back({{"notion", q.notion}, {"point", q.point}, {"set", q.set}, {"status", q.status},
                          {"expected", q.expected}, {"provenance", steps_json(q.provenance)}});
        j["queries"] = qs;
    }
    j["consistency"] = {{"pass", r.consistent}, {"violations", r.violations}};
    j["notes"] = r.notes;
    return j;
}

ReportDocument report_from_json(const nlohmann::ordered_json& j) {
    if (j.at("format").get<std::string>() != "dualdiag-report/1") throw ParseError("unknown report format");
    ReportDocument r;
    r.id = j.at("id").get<std::string>();
    r.kind = j.at("kind").get<std::string>();
    if (r.kind != "sets") {
        const json& v = j.at("values");
        r.value_source = v.at("source").get<std::string>();
        r.primal = v.at("primal").get<std::string>();
        r.primal_attained = v.at("primal_attained").get<bool>();
        r.dual = v.at("dual").get<std::string>();
        r.dual_attained = v.at("dual_attained").get<bool>();
        r.gap = v.at("gap").get<std::string>();
        r.primal_solution = v.at("primal_solution").get<std::string>();
        r.dual_solution = v.at("dual_solution").get<std::string>();
        r.verdict = j.at("verdict").at("kind").get<std::string>();
        r.guaranteed_by = j.at("verdict").at("condition").get<std::string>();
        for (const auto& [k, s] : j.at("hypotheses").items()) r.hypotheses.emplace_back(k, s.get<std::string>());
        for (const auto& cj : j.at("conditions")) {
            ReportCondition c;
            c.id = cj.at("id").get<std::string>();
            c.status = cj.at("status").get<std::string>();
            if (!cj.at("blocking").is_null()) c.blocking = cj.at("blocking").get<std::size_t>();
            for (const auto& cl : cj.at("clauses"))
                c.clauses.push_back({cl.at("description").get<std::string>(), cl.at("status").get<std::string>(),
                                     steps_from(cl.at("provenance"))});
            r.conditions.push_back(std::move(c));
        }
        if (!j.at("separation").is_null()) {
            const json& s = j.at("separation");
            r.separation = ReportSeparation{s.at("separator").get<std::string>(), s.at("separator_r").get<std::string>(),
                                            s.at("dual_point").get<std::string>(), s.at("dual_value").get<std::string>()};
        }
    } else {
        for (const auto& q : j.at("queries"))
            r.queries.push_back({q.at("notion").get<std::string>(), q.at("point").get<std::string>(),
                                 q.at("set").get<std::string>(), q.at("status").get<std::string>(),
                                 q.at("expected").get<std::string>(), steps_from(q.at("provenance"))});
    }
    r.consistent = j.at("consistency").at("pass").get<bool>();
    r.violations = j.at("consistency").at("violations").get<std::vector<std::string>>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
}

std::string render_json(const ReportDocument& r) { return to_json(r).dump(2) + "\n"; }

// ------------------------------------------------------------ text

std::string render_values_text(const ReportDocument& r) {
    std::ostringstream os;
    os << "values (" << r.value_source << ")\n";
    os << "  v(P) = " << r.primal << (r.primal_attained ? "  attained" : "") << "\n";
    os << "  v(D) = " << r.dual << (r.dual_attained ? "  attained" : "") << "\n";
    os << "  gap  = " << r.gap << "\n";
    if (!r.primal_solution.empty()) os << "  primal solution: " << r.primal_solution << "\n";
    if (!r.dual_solution.empty()) os << "  dual solution:   " << r.dual_solution << "\n";
    return os.str();
}

std::string render_text(const ReportDocument& r) {
    std::ostringstream os;
    os << "instance " << r.id << " (" << r.kind << ")\n";
    if (r.kind == "sets") {
        for (const auto& q : r.queries) {
            os << "  " << q.notion << " " << q.point << " in " << q.set << ": " << q.status;
            if (!q.expected.empty() && q.expected != q.status) os << "  (expected " << q.expected << ")";
            os << "\n";
            for (const auto& s : q.provenance)
                os << "      " << s.rule << ": " << s.conclusion << " [" << s.status << "]\n";
        }
    } else {
        os << render_values_text(r);
        os << "strong duality: " << r.verdict;
        if (!r.guaranteed_by.empty()) os << " " << r.guaranteed_by;
        os << "\n";
        os << "conditions\n";
        for (const auto& c : r.conditions) {
            std::string label = c.id;
            label.resize(6, ' ');
            std::string status = describe_status(c.status);
            if (c.blocking) {
                status.resize(16, ' ');
                status += "blocking: " + c.clauses[*c.blocking].description;
            }
            os << "  " << label << status;
            os << "\n";
        }
        if (r.separation)
            os << "separation: dual point " << r.separation->dual_point << ", value " << r.separation->dual_value
               << "\n";
        os << "hypotheses:";
        for (const auto& [k, s] : r.hypotheses) os << " " << k << "=" << s;
        os << "\n";
    }
    os << "consistency: " << (r.consistent ? "pass" : "FAIL") << "\n";
    for (const auto& v : r.violations) os << "  violation: " << v << "\n";
    for (const auto& n : r.notes) os << "note: " << n << "\n";
    if (!r.conditions.empty()) {
        os << "\nprovenance\n";
        for (const auto& c : r.conditions) {
            os << "  " << c.id << " [" << c.status << "]\n";
            for (const auto& cl : c.clauses) {
                os << "    - " << cl.description << ": " << cl.status << "\n";
                for (const auto& s : cl.provenance) {
                    os << "        " << s.rule;
                    if (!s.citation.empty()) os << " (" << s.citation << ")";
                    os << ": " << s.conclusion << " [" << s.status << "]";
                    if (!s.detail.empty()) os << " {" << s.detail << "}";
                    os << "\n";
                }
            }
        }
    }
    return os.str();
}

}  // namespace dualdiag
