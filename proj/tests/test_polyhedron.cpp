#include "doctest.h"
#include "dualdiag/polyhedron.hpp"
#include "test_support.hpp"

using namespace dualdiag;

namespace {

Polyhedron interval(Rational lo, Rational hi) {
    return Polyhedron::box(make_vector({lo}), make_vector({hi}));
}

Vector v2(Rational a, Rational b) { return make_vector({a, b}); }

// Random H-representation in R^n that contains the origin; some rows pass
// through 0, some come in opposite pairs so implicit equalities occur.
Polyhedron random_polyhedron_with_origin(testsupport::Gen& gen, Eigen::Index n) {
    Polyhedron P(n);
    const int m = gen.integer(0, 6);
    for (int r = 0; r < m; ++r) {
        Vector a = gen.nonzero_vec(n, -3, 3);
        Rational b = gen.coin(45) ? Rational(0) : gen.rational(1, 3);
        P.add_ineq(a, b);
        if (b == 0 && gen.coin(20)) P.add_ineq(-a, 0);
    }
    if (gen.coin(15)) P.add_eq(gen.nonzero_vec(n, -2, 2), 0);
    return P;
}

Rational support(const Polyhedron& P, const Vector& c) {
    return std::get<Optimal>(optimize(P, c, Sense::Maximize)).value;
}

}  // namespace

TEST_CASE("affine hull examples") {
    Polyhedron forced(2);
    forced.add_ineq(v2(-1, 0), 0);
    forced.add_ineq(v2(1, 0), 0);
    AffineSubspace h = affine_hull(forced);
    CHECK(h.dimension() == 1);
    CHECK(rank(h.E) == 1);
    CHECK(h.E(0, 1) == 0);

    CHECK(affine_hull(Polyhedron::box(v2(0, 0), v2(1, 1))).dimension() == 2);

    Polyhedron corner(2);
    corner.add_ineq(v2(1, 1), 0);
    corner.add_ineq(v2(-1, 0), 0);
    corner.add_ineq(v2(0, -1), 0);
    CHECK(affine_hull(corner).dimension() == 0);
    std::vector<bool> imp = implicit_equalities(corner);
    CHECK(imp == std::vector<bool>{true, true, true});

    CHECK_THROWS_AS(affine_hull(Polyhedron::empty(2)), EmptyPolyhedron);
}

TEST_CASE("relative interior points are strict on non-implicit rows") {
    auto p = relative_interior_point(interval(-2, 0));
    REQUIRE(p);
    CHECK((*p)[0] > -2);
    CHECK((*p)[0] < 0);

    Polyhedron slab(2);
    slab.add_ineq(v2(-1, 0), 0);
    slab.add_ineq(v2(1, 0), 0);
    slab.add_ineq(v2(0, -1), 0);
    slab.add_ineq(v2(0, 1), 1);
    auto q = relative_interior_point(slab);
    REQUIRE(q);
    CHECK((*q)[0] == 0);
    CHECK((*q)[1] > 0);
    CHECK((*q)[1] < 1);

    CHECK_FALSE(relative_interior_point(Polyhedron::empty(3)).has_value());
}

TEST_CASE("zero_in examples") {
    CHECK_FALSE(zero_in(Notion::Qri, Polyhedron::orthant(2)));
    Polyhedron segment(2);
    segment.add_ineq(v2(1, 0), 1);
    segment.add_ineq(v2(-1, 0), 1);
    segment.add_eq(v2(0, 1), 0);
    CHECK(zero_in(Notion::Qri, segment));
    CHECK_FALSE(zero_in(Notion::Qi, segment));
    CHECK(zero_in(Notion::Qi, Polyhedron::box(v2(-1, -1), v2(1, 1))));
    CHECK_FALSE(zero_in(Notion::Qi, Polyhedron::box(v2(0, 0), v2(1, 1))));
    for (Notion k : kAllNotions) CHECK_FALSE(zero_in(k, Polyhedron::empty(2)));
    CHECK_FALSE(zero_in(Notion::Qi, interval(0, 1)));
}

TEST_CASE("normal cone, subspace test and dual cone") {
    Polyhedron P = Polyhedron::orthant(2);
    FinitelyGeneratedCone at0 = normal_cone(P, v2(0, 0));
    CHECK(at0.generators.size() == 2);
    CHECK(is_trivial(normal_cone(P, v2(1, 1))));
    FinitelyGeneratedCone at10 = normal_cone(P, v2(1, 0));
    REQUIRE(at10.generators.size() == 1);
    CHECK(at10.generators[0] == v2(0, -1));
    // Sample check of <x*, y - x> <= 0 over a grid of y in P.
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b) CHECK(at10.generators[0].dot(v2(a, b) - v2(1, 0)) <= 0);
    CHECK_THROWS_AS(normal_cone(P, v2(-1, 0)), NotAMember);

    CHECK(is_linear_subspace({2, {v2(1, 0), v2(-1, 0)}, {}}));
    CHECK_FALSE(is_linear_subspace({2, {v2(1, 0), v2(0, 1)}, {}}));
    CHECK(is_linear_subspace({2, {v2(1, 1), v2(-1, -1), v2(1, -1), v2(-1, 1)}, {}}));

    CHECK(same_set(dual_cone({2, {v2(1, 0), v2(0, 1)}, {}}), Polyhedron::orthant(2)));
    CHECK(same_set(dual_cone({2, {}, {}}), Polyhedron::whole(2)));
    Polyhedron half(2);
    half.add_ineq(v2(-1, -1), 0);
    CHECK(same_set(dual_cone({2, {v2(1, 1)}, {}}), half));
}

TEST_CASE("projection examples") {
    Polyhedron diag(2);
    diag.add_eq(v2(1, -1), 0);
    diag.add_ineq(v2(0, 1), 1);
    diag.add_ineq(v2(0, -1), 0);
    CHECK(same_set(project(diag, {0}), interval(0, 1)));

    Polyhedron cube = Polyhedron::box(make_vector({0, 0, 0}), make_vector({1, 1, 1}));
    CHECK(same_set(project(cube, {0, 1}), Polyhedron::box(v2(0, 0), v2(1, 1))));

    Polyhedron tri(2);
    tri.add_ineq(v2(1, 1), 1);
    tri.add_ineq(v2(0, -1), 0);
    Polyhedron shadow = project(tri, {0});
    Polyhedron expected(1);
    expected.add_ineq(make_vector({1}), 1);
    CHECK(same_set(shadow, expected));
    // LP-computed bounds of x1 over the source agree with the shadow.
    CHECK(support(tri, v2(1, 0)) == support(shadow, make_vector({1})));
    CHECK(is_unbounded(optimize(shadow, make_vector({-1}), Sense::Maximize)));

    CHECK(is_empty(project(Polyhedron::empty(3), {1})));
}

TEST_CASE("Minkowski sum examples") {
    CHECK(same_set(minkowski_sum(interval(0, 1), interval(0, 1)), interval(0, 2)));
    Polyhedron pos(1), neg(1);
    pos.add_ineq(make_vector({-1}), 0);
    neg.add_ineq(make_vector({1}), 0);
    CHECK(same_set(minkowski_sum(pos, neg), Polyhedron::whole(1)));

    // Triangle + segment against the vertex-sum brute force on many directions.
    Polyhedron tri(2);
    tri.add_ineq(v2(-1, 0), 0);
    tri.add_ineq(v2(0, -1), 0);
    tri.add_ineq(v2(1, 1), 1);
    Polyhedron seg(2);
    seg.add_eq(v2(1, -1), 0);
    seg.add_ineq(v2(1, 0), 2);
    seg.add_ineq(v2(-1, 0), 0);
    Polyhedron sum = minkowski_sum(tri, seg);
    std::vector<Vector> tv{v2(0, 0), v2(1, 0), v2(0, 1)}, sv{v2(0, 0), v2(2, 2)};
    testsupport::Gen gen(7);
    for (int t = 0; t < 40; ++t) {
        Vector c = gen.nonzero_vec(2, -5, 5);
        Rational best = c.dot(tv[0] + sv[0]);
        for (const auto& a : tv)
            for (const auto& b : sv) best = std::max<Rational>(best, c.dot(a + b));
        CHECK(support(sum, c) == best);
    }
    for (const auto& a : tv)
        for (const auto& b : sv) CHECK(sum.contains(a + b));
}

TEST_CASE("closed cone hull and hull with origin") {
    Polyhedron strip(2);
    strip.add_eq(v2(0, 1), 1);
    Polyhedron cone = closed_cone_hull(strip);
    Polyhedron upper(2);
    upper.add_ineq(v2(0, -1), 0);
    CHECK(same_set(cone, upper));
    Polyhedron hull = closed_hull_with_origin(interval(1, 2));
    CHECK(same_set(hull, interval(0, 2)));
}

TEST_CASE("property: dual-route agreement, notion chain, strict relative interior") {
    testsupport::Gen gen(testsupport::seed_from_env() + 11);
    for (int trial = 0; trial < 120; ++trial) {
        const Eigen::Index n = gen.integer(1, 4);
        Polyhedron P = random_polyhedron_with_origin(gen, n);
        FinitelyGeneratedCone K = normal_cone(P, zeros(n));
        CHECK(zero_in(Notion::Qri, P) == is_linear_subspace(K));
        CHECK(zero_in(Notion::Qi, P) == is_trivial(K));

        bool in[6];
        for (int k = 0; k < 6; ++k) in[k] = zero_in(kAllNotions[k], P);
        // Int => Core => Sqri => Icr => Qri ; Core => Qi => Qri
        auto implies = [](bool a, bool b) { return !a || b; };
        CHECK(implies(in[0], in[1]));
        CHECK(implies(in[1], in[3]));
        CHECK(implies(in[3], in[4]));
        CHECK(implies(in[4], in[5]));
        CHECK(implies(in[1], in[2]));
        CHECK(implies(in[2], in[5]));

        auto ri = relative_interior_point(P);
        REQUIRE(ri);
        std::vector<bool> imp = implicit_equalities(P);
        for (Eigen::Index i = 0; i < P.A.rows(); ++i) {
            if (imp[static_cast<std::size_t>(i)]) CHECK(P.A.row(i).dot(ri->transpose()) == P.b[i]);
            else CHECK(P.A.row(i).dot(ri->transpose()) < P.b[i]);
        }
    }
}

TEST_CASE("property: projection and Minkowski sum commute with membership") {
    testsupport::Gen gen(testsupport::seed_from_env() + 12);
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index n = gen.integer(2, 3);
        Polyhedron P = Polyhedron::box(gen.vec(n, -2, 0), gen.vec(n, 1, 3));
        P.add_ineq(gen.nonzero_vec(n, -2, 2), gen.rational(0, 2));
        Polyhedron Q = Polyhedron::box(gen.vec(n, -1, 0), gen.vec(n, 0, 2));
        Polyhedron shadow = project(P, {0});
        Polyhedron sum = minkowski_sum(P, Q);
        for (int s = 0; s < 15; ++s) {
            Vector x = gen.vec(n, -3, 3, 2);
            Vector y = gen.vec(n, -2, 2, 2);
            if (P.contains(x)) CHECK(shadow.contains(make_vector({x[0]})));
            if (P.contains(x) && Q.contains(y)) CHECK(sum.contains(x + y));
            // Converse: a point of the shadow has a preimage in P.
            Vector t = make_vector({gen.rational(-3, 3, 2)});
            Polyhedron fibre = P;
            fibre.add_eq(unit_vector(n, 0), t[0]);
            CHECK(shadow.contains(t) == !is_empty(fibre));
            Vector z = gen.vec(n, -4, 4, 2);
            Polyhedron split = product(P, Q);
            for (Eigen::Index i = 0; i < n; ++i) {
                Vector row = zeros(2 * n);
                row[i] = 1;
                row[n + i] = 1;
                split.add_eq(row, z[i]);
            }
            CHECK(sum.contains(z) == !is_empty(split));
        }
    }
}
