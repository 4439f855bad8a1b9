#include "doctest.h"
#include "dualdiag/report.hpp"

#include <algorithm>
#include <set>

using namespace dualdiag;

namespace {

bool listed(const std::string& id) {
    auto ids = corpus_list();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

bool mentions(const std::vector<std::string>& lines, const std::string& needle) {
    return std::any_of(lines.begin(), lines.end(),
                       [&](const std::string& l) { return l.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("inventory") {
    CHECK(corpus_list().size() >= 13);
    for (const char* id : {"ex-3.1-lp-positive-cone", "ex-3.2-uncountable-lp", "ex-5.1-gowda-teboulle",
                           "ex-5.2-qri-fenchel", "ex-5.3-rc6-weaker", "ex-5.4-kernel-sqri", "ex-5.5-closedness-only",
                           "ex-5.6-rc6-not-rc8", "ex-5.7-non-support-point", "ex-6.1-daniele-giuffre",
                           "ex-6.2-qri-slater", "ex-6.3-rc6-weaker-lagrange", "ex-6.4-kernel-lagrange"}) {
        CAPTURE(id);
        CHECK(listed(id));
    }
    auto ids = corpus_list();
    CHECK(std::is_sorted(ids.begin(), ids.end()));
}

TEST_CASE("every entry passes") {
    for (const auto& id : corpus_list()) {
        RunResult r = corpus_run(id);
        CAPTURE(id);
        CAPTURE(r.diffs.size());
        for (const auto& d : r.diffs) MESSAGE(d);
        CHECK(r.pass);
        CHECK(r.seconds < 1.0);
    }
}

TEST_CASE("every decided expectation carries a citation") {
    for (const auto& e : corpus()) {
        CAPTURE(e.id);
        for (const auto& x : e.problem.expected)
            if (x.status != FactStatus::Unknown) CHECK_FALSE(x.citation.empty());
        for (const auto& q : e.problem.queries) CHECK_FALSE(q.citation.empty());
        if (e.problem.instance)
            for (const auto& f : e.problem.instance->facts) CHECK_FALSE(f.citation.empty());
    }
}

TEST_CASE("lookup by prefix and unknown ids") {
    CHECK(corpus_entry("ex-5.2").id == "ex-5.2-qri-fenchel");
    CHECK(corpus_run("ex-5.2").pass);
    CHECK_THROWS_AS(corpus_entry("ex-9.9"), NotFound);
    CHECK_THROWS_AS(corpus_entry("ex"), NotFound);  // ambiguous
}

TEST_CASE("selected entries reproduce the stated findings") {
    RunResult gap = corpus_run("ex-5.1");
    REQUIRE(gap.diagnosis);
    CHECK(gap.diagnosis->values.primal == ExtendedReal::finite(0));
    CHECK(gap.diagnosis->values.dual == ExtendedReal::minus_inf());
    CHECK(gap.diagnosis->verdict == DualityVerdict::GapDetected);

    RunResult rc6 = corpus_run("ex-5.6");
    REQUIRE(rc6.diagnosis);
    CHECK(rc6.diagnosis->status(CondIndex::RC6) == FactStatus::Holds);
    CHECK(rc6.diagnosis->status(CondIndex::RC8) == FactStatus::Fails);

    RunResult kernel = corpus_run("ex-6.4");
    REQUIRE(kernel.diagnosis);
    CHECK(kernel.diagnosis->values.dual_solution == "B*(0,1)+Rx0*");
    CHECK(kernel.diagnosis->status(CondIndex::RC5) == FactStatus::Holds);

    RunResult lagrange_gap = corpus_run("ex-6.1");
    REQUIRE(lagrange_gap.diagnosis);
    CHECK(lagrange_gap.diagnosis->verdict == DualityVerdict::GapDetected);
}

TEST_CASE("a flipped expectation produces a diff naming the condition") {
    ProblemFile p = corpus_entry("ex-5.4").problem;
    for (auto& e : p.expected)
        if (e.index == CondIndex::RC5) e.status = FactStatus::Fails;
    RunResult r = run_problem(p);
    CHECK_FALSE(r.pass);
    CHECK(mentions(r.diffs, "RC5"));

    ProblemFile q = corpus_entry("ex-3.2").problem;
    q.queries.front().expected = FactStatus::Holds;
    RunResult rq = run_problem(q);
    CHECK_FALSE(rq.pass);
    CHECK(mentions(rq.diffs, "lp-plus-r"));

    ProblemFile v = corpus_entry("ex-5.2").problem;
    v.expect_dual->value = ExtendedReal::finite(1);
    CHECK(mentions(run_problem(v).diffs, "dual value"));
}

TEST_CASE("reports round-trip and render deterministically") {
    for (const auto& e : corpus()) {
        CAPTURE(e.id);
        ReportDocument doc = make_report(e.problem, run_problem(e.problem));
        const std::string json = render_json(doc);
        ReportDocument back = report_from_json(nlohmann::ordered_json::parse(json));
        CHECK(back == doc);
        CHECK(render_json(back) == json);
        // A second run renders byte-identically.
        CHECK(render_json(make_report(e.problem, run_problem(e.problem))) == json);

        // Text and structured renderings carry the same verdict set.
        const std::string text = render_text(doc);
        for (const auto& c : doc.conditions) {
            const std::string word = c.status == "holds" ? "established" : c.status == "fails" ? "refuted"
                                                                                                 : "not established";
            std::string label = c.id;
            label.resize(6, ' ');
            CHECK(text.find("  " + label + word) != std::string::npos);
        }
        if (doc.kind != "sets") CHECK(text.find("strong duality: " + doc.verdict) != std::string::npos);
    }
}

TEST_CASE("rationals render as p/q in reports") {
    ProblemFile p = parse_problem(R"(id: half
kind: fenchel
regime: numeric
space: R^1
f: affine((1/2), 0)
g: indicator(poly(1; 1 <= 1; -1 <= 1))
)");
    ReportDocument doc = make_report(p, run_problem(p));
    CHECK(doc.primal == "-1/2");
    CHECK(render_json(doc).find("\"primal\": \"-1/2\"") != std::string::npos);
}
