#include "dualdiag/corpus.hpp"

#include <algorithm>
#include <chrono>

namespace dualdiag {

const std::vector<std::pair<std::string, std::string>>& embedded_corpus();

const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries = [] {
        std::vector<CorpusEntry> out;
        for (const auto& [file, text] : embedded_corpus()) {
            CorpusEntry e;
            e.source = text;
            try {
                e.problem = parse_problem(text);
            } catch (const ParseError& err) {
                throw ParseError("corpus file " + file + ": " + err.what());
            }
            e.id = e.problem.id;
            if (file != e.id + ".dd") throw ParseError("corpus file " + file + " declares id " + e.id);
            out.push_back(std::move(e));
        }
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
        return out;
    }();
    return entries;
}

std::vector<std::string> corpus_list() {
    std::vector<std::string> ids;
    for (const auto& e : corpus()) ids.push_back(e.id);
    return ids;
}

const CorpusEntry& corpus_entry(const std::string& id) {
    const CorpusEntry* match = nullptr;
    for (const auto& e : corpus()) {
        if (e.id == id) return e;
        if (e.id.rfind(id, 0) == 0 && (e.id.size() == id.size() || e.id[id.size()] == '-')) {
            if (match) throw NotFound("'" + id + "' names more than one corpus entry");
            match = &e;
        }
    }
    if (!match) throw NotFound("no corpus entry '" + id + "'");
    return *match;
}

namespace {

std::string gap_text(const ValueReport& v) {
    auto g = v.gap();
    return g ? g->str() : "n/a";
}

void compare_value(RunResult& r, const char* which, const std::optional<DeclaredValue>& expected,
                   bool known, const ExtendedReal& value, bool attained) {
    if (!expected) return;
    if (!known) {
        r.diffs.push_back(std::string(which) + ": expected " + expected->value.str() + ", got unknown");
        return;
    }
    if (!(expected->value == value))
        r.diffs.push_back(std::string(which) + ": expected " + expected->value.str() + ", got " + value.str());
    if (expected->attained && !attained) r.diffs.push_back(std::string(which) + ": expected attainment");
}

}  // namespace

RunResult run_problem(const ProblemFile& p) {
    const auto start = std::chrono::steady_clock::now();
    RunResult r;
    r.id = p.id;
    if (p.kind == "sets") {
        InferenceOptions opt;
        opt.facts = p.set_facts;
        for (const auto& q : p.queries) {
            Inference inf = q.notion ? infer(*q.notion, q.point, q.set, opt) : membership(q.point, q.set, opt);
            if (q.expected && inf.status != *q.expected)
                r.diffs.push_back("query " + (q.notion ? notion_name(*q.notion) : std::string("member")) + " " +
                                  q.point.key() + " in " + q.set_text + ": expected " + status_name(*q.expected) +
                                  ", got " + status_name(inf.status));
            r.queries.push_back({q, inf});
        }
    } else {
        Diagnosis d = diagnose(*p.instance);
        for (const auto& e : p.expected) {
            FactStatus got = d.status(e.index);
            if (got != e.status)
                r.diffs.push_back(condition_label(e.index) + ": expected " + status_name(e.status) + ", got " +
                                  status_name(got));
        }
        compare_value(r, "primal value", p.expect_primal, d.values.primal_known, d.values.primal,
                      d.values.primal_attained);
        compare_value(r, "dual value", p.expect_dual, d.values.dual_known, d.values.dual, d.values.dual_attained);
        if (p.expect_gap && *p.expect_gap != gap_text(d.values))
            r.diffs.push_back("gap: expected " + *p.expect_gap + ", got " + gap_text(d.values));
        if (p.expect_verdict && *p.expect_verdict != verdict_name(d.verdict))
            r.diffs.push_back("verdict: expected " + *p.expect_verdict + ", got " + verdict_name(d.verdict));
        if (p.expect_primal_solution && *p.expect_primal_solution != d.values.primal_solution)
            r.diffs.push_back("primal solution: expected " + *p.expect_primal_solution + ", got " +
                              d.values.primal_solution);
        if (p.expect_dual_solution && *p.expect_dual_solution != d.values.dual_solution)
            r.diffs.push_back("dual solution: expected " + *p.expect_dual_solution + ", got " +
                              d.values.dual_solution);
        for (const auto& v : d.violations) r.diffs.push_back("consistency: " + v);
        r.diagnosis = std::move(d);
    }
    r.pass = r.diffs.empty();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

RunResult corpus_run(const std::string& id) { return run_problem(corpus_entry(id).problem); }

}  // namespace dualdiag
