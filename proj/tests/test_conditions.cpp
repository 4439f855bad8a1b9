#include "doctest.h"
#include "dualdiag/conditions.hpp"
#include "test_support.hpp"

using namespace dualdiag;

namespace {

Polyhedron interval(const Rational& lo, const Rational& hi) {
    return Polyhedron::box(make_vector({lo}), make_vector({hi}));
}

FunctionExpr box_indicator(const Rational& lo, const Rational& hi) { return indicator(poly_set(interval(lo, hi))); }

FunctionExpr random_part(testsupport::Gen& gen, Eigen::Index n) {
    Vector lo = gen.vec(n, -2, 0), hi = lo;
    for (Eigen::Index i = 0; i < n; ++i) hi[i] += gen.integer(0, 2);
    std::vector<std::pair<Vector, Rational>> pieces{{gen.vec(n, -2, 2), gen.rational(-1, 1)}};
    switch (gen.integer(0, 2)) {
        case 0: return sum_fn(sup_of_affine(pieces), indicator(poly_set(Polyhedron::box(lo, hi))));
        case 1: return indicator(poly_set(Polyhedron::box(lo, hi)));
        default: return sup_of_affine(pieces);
    }
}

}  // namespace

TEST_CASE("interval pair: interior conditions hold") {
    Instance inst = fenchel_instance("pair", box_indicator(-1, 1), box_indicator(-1, 1));
    CHECK(evaluate_condition({Family::Fenchel, CondIndex::RC3}, inst).status == FactStatus::Holds);
    Diagnosis d = diagnose(inst);
    CHECK(d.consistent);
    for (CondIndex i : applicable_conditions(Family::Fenchel)) {
        CAPTURE(condition_label(i));
        CHECK(d.status(i) == FactStatus::Holds);
    }
    CHECK(d.verdict == DualityVerdict::GuaranteedBy);
    CHECK(d.guaranteed_by == CondIndex::RC1);
    CHECK(d.values.primal == ExtendedReal::finite(0));
    REQUIRE(d.separation);
    CHECK(d.separation->dual_value == 0);
}

TEST_CASE("touching intervals: only the closedness condition holds") {
    Instance inst = fenchel_instance("touch", box_indicator(0, 1), box_indicator(1, 2));
    Diagnosis d = diagnose(inst);
    CHECK(d.consistent);
    for (CondIndex i : {CondIndex::RC1, CondIndex::RC2, CondIndex::RC3, CondIndex::RC4, CondIndex::RC5,
                        CondIndex::RC6p, CondIndex::RC6, CondIndex::RC7}) {
        CAPTURE(condition_label(i));
        CHECK(d.status(i) == FactStatus::Fails);
    }
    CHECK(d.status(CondIndex::RC8) == FactStatus::Holds);
    CHECK(d.guaranteed_by == CondIndex::RC8);
    // The failing clause of RC2 is the interior membership, not a hypothesis.
    const auto& rc2 = d.at(CondIndex::RC2);
    REQUIRE(rc2.blocking());
    CHECK(rc2.clauses[*rc2.blocking()].description == "0 in int(D)");
}

TEST_CASE("a corrupted diagnosis is caught by the consistency check") {
    Diagnosis d = diagnose(fenchel_instance("pair", box_indicator(-1, 1), box_indicator(-1, 1)));
    REQUIRE(consistency_check(d).empty());
    auto& rc6 = d.verdicts.at({Family::Fenchel, CondIndex::RC6});
    rc6.clauses.front().status = FactStatus::Fails;
    rc6.status = FactStatus::Fails;
    auto violations = consistency_check(d);
    REQUIRE_FALSE(violations.empty());
    bool edge_named = false;
    for (const auto& v : violations) edge_named = edge_named || v.find("RC3 => RC6") != std::string::npos;
    CHECK(edge_named);
}

TEST_CASE("Lagrange instance with a Slater point") {
    // inf x over [-2, 2] subject to x - 1 <= 0 written as g(x) = x - 1 in -C with C = [0, inf).
    Instance inst = lagrange_instance("slater", affine_fn(Point::numeric(make_vector({1})), 0, SpaceTag::finite(1)),
                                      poly_set(interval(-2, 2)), affine_map(identity(1), make_vector({-1})),
                                      poly_set(Polyhedron::orthant(1)));
    Diagnosis d = diagnose(inst);
    CHECK(d.consistent);
    CHECK(d.status(CondIndex::RC1) == FactStatus::Holds);
    CHECK(d.status(CondIndex::RC6p) == FactStatus::Holds);
    CHECK(d.values.primal == ExtendedReal::finite(-2));
    CHECK(d.values.dual == ExtendedReal::finite(-2));
}

TEST_CASE("Lagrange instance without strict feasibility") {
    // x in [0, 1] with x <= 0: feasible set {0}, the constraint is never strict.
    Instance inst = lagrange_instance("tight", affine_fn(Point::numeric(make_vector({-1})), 0, SpaceTag::finite(1)),
                                      poly_set(interval(0, 1)), affine_map(identity(1), zeros(1)),
                                      poly_set(Polyhedron::orthant(1)));
    Diagnosis d = diagnose(inst);
    CHECK(d.consistent);
    CHECK(d.status(CondIndex::RC1) == FactStatus::Fails);
    CHECK(d.status(CondIndex::RC8) == FactStatus::Holds);
    CHECK(d.values.primal == d.values.dual);
}

TEST_CASE("applicability and preconditions") {
    // Phi(x, y) = |x| + indicator{y in [-1, 1]}.
    Polyhedron strip(2);
    strip.add_ineq(make_vector({0, 1}), 1);
    strip.add_ineq(make_vector({0, -1}), 1);
    FunctionExpr phi = sum_fn(sup_of_affine({{make_vector({1, 0}), 0}, {make_vector({-1, 0}), 0}}),
                              indicator(poly_set(strip)));
    Instance pert = perturbation_instance("phi", phi, 1);
    CHECK_THROWS_AS(check_rc8(pert), NotApplicable);
    CHECK_THROWS_AS(evaluate_condition({Family::Perturbation, CondIndex::RC6p}, pert), NotApplicable);
    CHECK_THROWS_AS(evaluate_condition({Family::Fenchel, CondIndex::RC1}, pert), NotApplicable);
    Diagnosis d = diagnose(pert);
    CHECK(d.consistent);
    CHECK(d.status(CondIndex::RC1) == FactStatus::Holds);

    Instance apart = fenchel_instance("apart", box_indicator(0, 1), box_indicator(2, 3));
    CHECK_THROWS_AS(diagnose(apart), InvalidInstance);
}

TEST_CASE("property: random polyhedral Fenchel diagnoses are consistent") {
    testsupport::Gen gen(testsupport::seed_from_env() + 77);
    int separated = 0;
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index n = gen.integer(1, 2);
        Instance inst = fenchel_instance("rand", random_part(gen, n), random_part(gen, n));
        if (solve_primal(inst).value == ExtendedReal::plus_inf()) continue;
        Diagnosis d = diagnose(inst);
        CAPTURE(inst.f->key);
        CAPTURE(inst.g->key);
        CHECK(d.consistent);
        CHECK(d.verdict != DualityVerdict::GapDetected);
        CHECK(d.status(CondIndex::RC8) == FactStatus::Holds);
        // RC6 and RC7 always agree; RC3 and RC2 too.
        CHECK(d.status(CondIndex::RC6) == d.status(CondIndex::RC7));
        CHECK(d.status(CondIndex::RC2) == d.status(CondIndex::RC3));
        if (d.separation) ++separated;
    }
    CHECK(separated > 0);
}
