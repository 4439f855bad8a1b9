// dualdiag: command-line front end.
//
//   dualdiag analyze <file> [--format text|json]
//   dualdiag solve <file> [--format text|json]
//   dualdiag corpus list
//   dualdiag corpus run [id|all]
//   dualdiag generate [--seed n] [--kind fenchel|lagrange]
//
// Exit codes: 0 success, 1 corpus failures, 2 parse/validation error or
// unknown id, 3 implication-graph inconsistency, 4 values undecidable.

#include "dualdiag/report.hpp"

#include "CLI11.hpp"

#include <iomanip>
#include <iostream>
#include <random>

using namespace dualdiag;

namespace {

enum Exit { Ok = 0, CorpusFailure = 1, BadInput = 2, Inconsistent = 3, Undecidable = 4 };

// Parses the file and runs it; problems of kind "sets" answer their queries.
struct Loaded {
    ProblemFile problem;
    RunResult run;
};

Loaded load_and_run(const std::string& path) {
    Loaded l;
    l.problem = read_problem(path);
    l.run = run_problem(l.problem);
    return l;
}

int cmd_analyze(const std::string& path, const std::string& format) {
    Loaded l = load_and_run(path);
    ReportDocument doc = make_report(l.problem, l.run);
    std::cout << (format == "json" ? render_json(doc) : render_text(doc));
    return doc.consistent ? Ok : Inconsistent;
}

int cmd_solve(const std::string& path, const std::string& format) {
    ProblemFile p = read_problem(path);
    if (!p.instance) throw InvalidInstance("'solve' needs an optimization problem, not a sets file");
    ValueReport v = compute_values(*p.instance);
    Diagnosis d;
    d.id = p.id;
    d.family = p.instance->family;
    d.values = v;
    ReportDocument doc = make_report(d);
    if (format == "json") {
        nlohmann::ordered_json j;
        j["format"] = "dualdiag-values/1";
        j["id"] = doc.id;
        j["kind"] = doc.kind;
        j["values"] = to_json(doc).at("values");
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "instance " << doc.id << " (" << doc.kind << ")\n" << render_values_text(doc);
    }
    return v.primal_known && v.dual_known ? Ok : Undecidable;
}

int cmd_corpus_list() {
    for (const auto& id : corpus_list()) std::cout << id << "\n";
    return Ok;
}

int cmd_corpus_run(const std::string& which) {
    std::vector<std::string> ids;
    if (which == "all")
        ids = corpus_list();
    else
        ids.push_back(corpus_entry(which).id);
    int failures = 0;
    for (const auto& id : ids) {
        RunResult r = corpus_run(id);
        std::cout << (r.pass ? "pass " : "FAIL ") << id << "  (" << std::fixed << std::setprecision(3) << r.seconds
                  << " s)\n";
        for (const auto& d : r.diffs) std::cout << "    " << d << "\n";
        if (!r.pass) ++failures;
    }
    if (ids.size() > 1) std::cout << (ids.size() - failures) << "/" << ids.size() << " entries pass\n";
    return failures == 0 ? Ok : CorpusFailure;
}

// Random numeric problem files, for feeding `solve` and `analyze`.
struct Generator {
    std::mt19937 rng;
    explicit Generator(unsigned seed) : rng(seed) {}
    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
    Vector vec(Eigen::Index n, long lo, long hi) {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = integer(lo, hi);
        return v;
    }
};

int cmd_generate(unsigned seed, const std::string& kind) {
    Generator gen(seed);
    const Eigen::Index n = gen.integer(1, 3);
    ProblemFile p;
    p.id = "random-" + kind + "-" + std::to_string(seed);
    p.kind = kind;
    p.regime = "numeric";
    p.space = SpaceTag::finite(n);
    if (kind == "fenchel") {
        // Both parts contain the origin in their domain, so the primal is feasible.
        auto centered = [&] {
            Vector lo = gen.vec(n, -2, 0), hi = gen.vec(n, 0, 2);
            std::vector<std::pair<Vector, Rational>> pieces{{gen.vec(n, -2, 2), Rational(gen.integer(-2, 2), 2)}};
            return sum_fn(sup_of_affine(pieces), indicator(poly_set(Polyhedron::box(lo, hi))));
        };
        p.instance = fenchel_instance(p.id, centered(), centered());
    } else if (kind == "lagrange") {
        const Eigen::Index m = gen.integer(1, 2);
        Matrix a(m, n);
        for (Eigen::Index i = 0; i < m; ++i) a.row(i) = gen.vec(n, -2, 2).transpose();
        // g(x) = a x - b with b >= 0, so x = 0 is feasible for g(x) in -C.
        p.second_space = SpaceTag::finite(m);
        Polyhedron box = Polyhedron::box(gen.vec(n, -2, 0), gen.vec(n, 0, 2));
        p.instance = lagrange_instance(p.id, affine_fn(Point::numeric(gen.vec(n, -2, 2)), 0, SpaceTag::finite(n)),
                                       poly_set(box), affine_map(a, -gen.vec(m, 0, 2)),
                                       poly_set(Polyhedron::orthant(m)));
    } else {
        throw ParseError("generate: unknown kind '" + kind + "'");
    }
    std::cout << serialize_problem(p);
    return Ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact diagnosis of regularity conditions for convex duality"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "dualdiag 1.0");
    std::string format = "text", path, which = "all", kind = "fenchel";
    unsigned seed = 1;

    auto* analyze = app.add_subcommand("analyze", "Diagnose a problem file");
    analyze->add_option("file", path, "problem file")->required();
    analyze->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    auto* solve = app.add_subcommand("solve", "Compute primal and dual values");
    solve->add_option("file", path, "problem file")->required();
    solve->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    auto* corpus_cmd = app.add_subcommand("corpus", "List or run the built-in corpus");
    corpus_cmd->require_subcommand(1);
    corpus_cmd->add_subcommand("list", "Print entry ids");
    auto* run = corpus_cmd->add_subcommand("run", "Run entries against their expectations");
    run->add_option("id", which, "entry id, unique prefix, or 'all'");

    auto* generate = app.add_subcommand("generate", "Print a random numeric problem file");
    generate->add_option("--seed", seed, "random seed");
    generate->add_option("--kind", kind)->check(CLI::IsMember({"fenchel", "lagrange"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Ok : BadInput;
    }

    try {
        if (*analyze) return cmd_analyze(path, format);
        if (*solve) return cmd_solve(path, format);
        if (*corpus_cmd) {
            if (corpus_cmd->got_subcommand("list")) return cmd_corpus_list();
            return cmd_corpus_run(which);
        }
        if (*generate) return cmd_generate(seed, kind);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return BadInput;
    } catch (const InvalidInstance& e) {
        std::cerr << "invalid instance: " << e.what() << "\n";
        return BadInput;
    } catch (const RegimeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return BadInput;
    } catch (const NotFound& e) {
        std::cerr << "error: " << e.what() << "\n";
        return BadInput;
    } catch (const LpIterationLimit& e) {
        std::cerr << "undecided: " << e.what() << "\n";
        return Undecidable;
    }
    return Ok;
}
