#include "doctest.h"
#include "dualdiag/duality.hpp"
#include "test_support.hpp"

using namespace dualdiag;

namespace {

const SpaceTag R1 = SpaceTag::finite(1);

Polyhedron interval(const Rational& lo, const Rational& hi) {
    return Polyhedron::box(make_vector({lo}), make_vector({hi}));
}

// |x - a| on the line.
FunctionExpr distance_to(const Rational& a) { return sup_of_affine({{make_vector({1}), -a}, {make_vector({-1}), a}}); }

FunctionExpr random_piecewise(testsupport::Gen& gen, Eigen::Index n) {
    std::vector<std::pair<Vector, Rational>> pieces;
    const int k = gen.integer(1, 3);
    for (int i = 0; i < k; ++i) pieces.emplace_back(gen.vec(n, -2, 2), gen.rational(-2, 2));
    return sup_of_affine(std::move(pieces));
}

FunctionExpr random_fenchel_part(testsupport::Gen& gen, Eigen::Index n) {
    Vector lo = gen.vec(n, -3, 0), hi = lo;
    for (Eigen::Index i = 0; i < n; ++i) hi[i] += gen.integer(0, 3);
    switch (gen.integer(0, 3)) {
        case 0: return sum_fn(random_piecewise(gen, n), indicator(poly_set(Polyhedron::box(lo, hi))));
        case 1: return random_piecewise(gen, n);
        case 2: return arg_translate(norm_fn(NormKind::L1, SpaceTag::finite(n)), Point::numeric(gen.vec(n, -2, 2)));
        default: return indicator(poly_set(Polyhedron::box(lo, hi)));
    }
}

ExtendedReal lagrangian_infimum(const Vector& c, const Matrix& M, const Vector& b, const Polyhedron& box,
                                const Vector& w) {
    // inf over the box of c.x + w.(Mx - b), computed directly.
    Vector obj = c + M.transpose() * w;
    LpOutcome o = optimize(box, obj, Sense::Minimize);
    REQUIRE(is_optimal(o));
    return ExtendedReal::finite(std::get<Optimal>(o).value - w.dot(b));
}

}  // namespace

TEST_CASE("closed-form Fenchel pair") {
    // inf |x - 3| + indicator[0, 1] = 2, dual solution p = 1.
    Instance inst = fenchel_instance("dist", distance_to(3), indicator(poly_set(interval(0, 1))));
    PrimalResult p = solve_primal(inst);
    CHECK(p.value == ExtendedReal::finite(2));
    REQUIRE(p.point);
    CHECK((*p.point)[0] == 1);
    DualResult d = solve_dual(inst);
    CHECK(d.value == ExtendedReal::finite(2));
    REQUIRE(d.point);
    CHECK((*d.point)[0] == 1);
    DualResult via_phi = solve_dual_via_perturbation(inst);
    CHECK(via_phi.value == d.value);
    CHECK((*via_phi.point)[0] == 1);
    SeparationResult s = recover_dual_via_separation(inst, 2);
    CHECK(s.dual_point[0] == 1);
    CHECK(s.separator_r < 0);
    // Domain and value set in numeric form.
    SetExpr pr = projected_domain(inst);
    REQUIRE(pr->kind == SetKind::Poly);
    CHECK(same_set(pr->poly, Polyhedron::whole(1)));
    SetExpr E = value_set(inst, 2);
    CHECK(E->poly.contains(make_vector({0, 0})));
    CHECK_FALSE(E->poly.contains(make_vector({0, -1})));
}

TEST_CASE("infeasible and unbounded Fenchel problems") {
    Instance empty = fenchel_instance("apart", indicator(poly_set(interval(0, 1))),
                                      indicator(poly_set(interval(2, 3))));
    CHECK(solve_primal(empty).value == ExtendedReal::plus_inf());
    CHECK(solve_dual(empty).value == ExtendedReal::plus_inf());
    Instance down = fenchel_instance("down", affine_fn(Point::numeric(make_vector({1})), 0, R1),
                                     indicator(poly_set(Polyhedron::whole(1))));
    CHECK(solve_primal(down).value == ExtendedReal::minus_inf());
    CHECK(solve_dual(down).value == ExtendedReal::minus_inf());
    CHECK(solve_dual_via_perturbation(down).value == ExtendedReal::minus_inf());
}

TEST_CASE("operator Fenchel problem") {
    // inf |x1| + |x2| subject to x1 + x2 = 1 written as g(Ax) with A = [1 1].
    Matrix A(1, 2);
    A << 1, 1;
    Instance inst = fenchel_instance("op", norm_fn(NormKind::L1, SpaceTag::finite(2)),
                                     indicator(poly_set(Polyhedron::point(make_vector({1})))),
                                     affine_map(A, zeros(1)));
    CHECK(solve_primal(inst).value == ExtendedReal::finite(1));
    DualResult d = solve_dual(inst);
    CHECK(d.value == ExtendedReal::finite(1));
    CHECK(solve_dual_via_perturbation(inst).value == ExtendedReal::finite(1));
    CHECK(recover_dual_via_separation(inst, 1).dual_value == 1);
}

TEST_CASE("property: Fenchel duality on random polyhedral pairs") {
    testsupport::Gen gen(testsupport::seed_from_env() + 41);
    int finite = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index n = gen.integer(1, 2);
        Instance inst = fenchel_instance("rand", random_fenchel_part(gen, n), random_fenchel_part(gen, n));
        PrimalResult p = solve_primal(inst);
        DualResult d = solve_dual(inst);
        CAPTURE(inst.f->key);
        CAPTURE(inst.g->key);
        CHECK(d.value <= p.value);
        CHECK(solve_dual_via_perturbation(inst).value == d.value);
        // Polyhedral pairs have no gap once the primal is finite.
        if (!p.value.is_finite()) continue;
        ++finite;
        CHECK(d.value == p.value);
        CHECK(d.attained);
        SeparationResult s = recover_dual_via_separation(inst, p.value.value);
        CHECK(s.dual_value == p.value.value);
        // The recovered point is a dual solution under the conjugate route as well.
        ExtendedReal at = -evaluate(conjugate_of(inst.f), Point::numeric(-s.dual_point)) +
                          -evaluate(conjugate_of(inst.g), Point::numeric(s.dual_point));
        CHECK(at == p.value);
    }
    CHECK(finite > 5);
}

TEST_CASE("property: Lagrange duality under Slater") {
    testsupport::Gen gen(testsupport::seed_from_env() + 42);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = gen.integer(1, 2), k = gen.integer(1, 2);
        Vector c = gen.vec(n, -3, 3);
        Matrix M(k, n);
        for (Eigen::Index i = 0; i < k; ++i) M.row(i) = gen.vec(n, -2, 2).transpose();
        Vector x0 = gen.vec(n, -1, 1);
        Vector b = M * x0;
        for (Eigen::Index i = 0; i < k; ++i) b[i] += gen.integer(1, 2);  // x0 is strictly feasible
        Polyhedron box = Polyhedron::box(Vector(x0.array() - 2), Vector(x0.array() + 2));
        Instance inst = lagrange_instance("lag", affine_fn(Point::numeric(c), 0, SpaceTag::finite(n)),
                                          poly_set(box), affine_map(M, -b), poly_set(Polyhedron::orthant(k)));
        PrimalResult p = solve_primal(inst);
        REQUIRE(p.value.is_finite());
        // Primal oracle: the same LP written directly.
        Polyhedron feasible = box;
        for (Eigen::Index i = 0; i < k; ++i) feasible.add_ineq(M.row(i).transpose(), b[i]);
        CHECK(std::get<Optimal>(optimize(feasible, c, Sense::Minimize)).value == p.value.value);
        DualResult d = solve_dual(inst);
        CHECK(d.value == p.value);
        REQUIRE(d.point);
        const Vector& w = *d.point;
        for (Eigen::Index i = 0; i < k; ++i) CHECK(w[i] >= 0);
        CHECK(lagrangian_infimum(c, M, b, box, w) == p.value);
        // Complementary slackness at the primal solution.
        CHECK(w.dot(M * *p.point - b) == 0);
        SeparationResult s = recover_dual_via_separation(inst, p.value.value);
        CHECK(lagrangian_infimum(c, M, b, box, s.dual_point) == p.value);
        // Scalarization of g by the multiplier.
        FunctionExpr sc = scalarize(w, inst.gmap, inst.C);
        Vector probe = gen.vec(n, -2, 2);
        CHECK(evaluate(sc, Point::numeric(probe)) == ExtendedReal::finite(w.dot(M * probe - b)));
    }
}

TEST_CASE("scalarize rejects multipliers outside the dual cone") {
    Matrix M = identity(1);
    CHECK_THROWS_AS(scalarize(make_vector({-1}), affine_map(M, zeros(1)), poly_set(Polyhedron::orthant(1))),
                    MalformedExpression);
}

TEST_CASE("separation at a level above the optimum") {
    // Both functions vanish on the line: E at level 1 holds (0, 0) in its interior.
    Instance flat = fenchel_instance("flat", affine_fn(Point::zero(), 0, R1), affine_fn(Point::zero(), 0, R1));
    CHECK_THROWS_AS(recover_dual_via_separation(flat, 1), QriMembership);
    // dom of the perturbation projects onto a half-line: only vertical separators remain.
    Polyhedron ray(1);
    ray.add_ineq(make_vector({-1}), 0);
    Instance edge =
        fenchel_instance("edge", indicator(poly_set(Polyhedron::point(zeros(1)))), indicator(poly_set(ray)));
    CHECK(solve_primal(edge).value == ExtendedReal::finite(0));
    CHECK_THROWS_AS(recover_dual_via_separation(edge, 1), DegenerateSeparation);
    CHECK(recover_dual_via_separation(edge, 0).dual_value == 0);
}

TEST_CASE("symbolic domain and value sets") {
    const SpaceTag L2 = SpaceTag::sequence(2);
    SetExpr K = catalog_set(CatalogId::LpPlus, L2);
    Point c = Point::atom("c", {"nonneg"});
    Instance inst = fenchel_instance("sym", sum_fn(affine_fn(c, 0, L2), indicator(K)), indicator(K));
    CHECK_FALSE(inst.numeric());
    CHECK(projected_domain(inst)->kind == SetKind::Whole);
    CHECK_THROWS_AS(solve_primal(inst), RegimeError);
    SetExpr C = catalog_set(CatalogId::SubspaceC, L2);
    Instance lag = lagrange_instance("lag", norm_fn(NormKind::L2, L2), C, identity_map(L2), C);
    CHECK(projected_domain(lag)->key == "subspace-c");
}
