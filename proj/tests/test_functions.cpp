#include "doctest.h"
#include "dualdiag/functions.hpp"
#include "dualdiag/sets.hpp"
#include "test_support.hpp"

#include <functional>

using namespace dualdiag;

namespace doctest {
template <>
struct StringMaker<ExtendedReal> {
    static String convert(const ExtendedReal& v) { return v.str().c_str(); }
};
}  // namespace doctest

namespace {

const SpaceTag R2 = SpaceTag::finite(2);
const SpaceTag L2 = SpaceTag::sequence(2);

Vector v2(Rational a, Rational b) { return make_vector({a, b}); }
Point pt(Rational a, Rational b) { return Point::numeric(v2(a, b)); }

ExtendedReal fin(Rational r) { return ExtendedReal::finite(std::move(r)); }
const ExtendedReal kInf = ExtendedReal::plus_inf();

Rational abs_r(const Rational& r) { return r < 0 ? Rational(-r) : r; }
Rational max_r(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::vector<Vector> grid(int lo, int hi, int den) {
    std::vector<Vector> out;
    for (int i = lo * den; i <= hi * den; ++i)
        for (int j = lo * den; j <= hi * den; ++j) out.push_back(v2(Rational(i) / den, Rational(j) / den));
    return out;
}

struct Case {
    const char* name;
    FunctionExpr f;
    std::function<ExtendedReal(const Vector&)> oracle;
};

// Random max of affine pieces over R^2, bounded below so it stays proper.
FunctionExpr random_max_affine(testsupport::Gen& gen, int pieces) {
    std::vector<std::pair<Vector, Rational>> ps;
    for (int i = 0; i < pieces; ++i) ps.emplace_back(gen.vec(2, -2, 2), gen.rational(-2, 2));
    return sup_of_affine(std::move(ps));
}

}  // namespace

TEST_CASE("realized set operations agree with direct polyhedral operations") {
    Polyhedron box = Polyhedron::box(v2(0, 0), v2(1, 2));
    Polyhedron tri(2);
    tri.add_ineq(v2(-1, 0), 0);
    tri.add_ineq(v2(0, -1), 0);
    tri.add_ineq(v2(1, 1), 1);
    SetExpr B = poly_set(box), T = poly_set(tri);
    CHECK(same_set(realize(mink_sum(B, T)).materialize(), minkowski_sum(box, tri)));
    CHECK(same_set(realize(neg_set(T)).materialize(), negate(tri)));
    CHECK(same_set(realize(translate_set(B, pt(1, -1))).materialize(), translate(box, v2(1, -1))));
    CHECK(same_set(realize(scale_set(3, T)).materialize(), scale(tri, 3)));
    CHECK(same_set(realize(intersect_set(B, T)).materialize(), intersect(box, tri)));
    CHECK(same_set(realize(cone_hull(translate_set(B, pt(1, 1)))).materialize(),
                   closed_cone_hull(translate(box, v2(1, 1)))));
    // The polar of the nonnegative quadrant is the nonpositive quadrant.
    CHECK(same_set(realize(polar_cone(poly_set(Polyhedron::orthant(2)))).materialize(),
                   negate(Polyhedron::orthant(2))));
    Matrix M(1, 2);
    M << 1, 1;
    CHECK(same_set(realize(image_set(affine_map(M, make_vector({0})), B)).materialize(),
                   Polyhedron::box(make_vector({0}), make_vector({3}))));
    CHECK(same_set(realize(preimage_set(affine_map(M, make_vector({0})), poly_set(Polyhedron::box(
                                            make_vector({0}), make_vector({1}))))).materialize(),
                   affine_preimage(M, make_vector({0}), Polyhedron::box(make_vector({0}), make_vector({1})))));
}

TEST_CASE("evaluation of ten polyhedral functions against closed forms") {
    const Vector lo = v2(-1, 0), hi = v2(1, 1);
    SetExpr box = poly_set(Polyhedron::box(lo, hi));
    Matrix M(2, 2);
    M << 1, 2, 0, -1;
    std::vector<std::pair<Vector, Rational>> pieces{{v2(1, 0), 0}, {v2(-1, 1), 1}, {v2(0, -2), -1}};
    auto maxaff = [pieces](const Vector& x) {
        Rational best = pieces[0].first.dot(x) + pieces[0].second;
        for (const auto& [c, a] : pieces) best = max_r(best, c.dot(x) + a);
        return best;
    };
    auto l1 = [](const Vector& x) { return abs_r(x[0]) + abs_r(x[1]); };
    auto linf = [](const Vector& x) { return max_r(abs_r(x[0]), abs_r(x[1])); };
    std::vector<Case> cases{
        {"affine", affine_fn(pt(1, 2), 3, R2), [](const Vector& x) { return fin(x[0] + 2 * x[1] + 3); }},
        {"norm1", norm_fn(NormKind::L1, R2), [&](const Vector& x) { return fin(l1(x)); }},
        {"norminf", norm_fn(NormKind::Linf, R2), [&](const Vector& x) { return fin(linf(x)); }},
        {"maxaffine", sup_of_affine(pieces), [&](const Vector& x) { return fin(maxaff(x)); }},
        {"indicator", indicator(box),
         [&](const Vector& x) {
             bool in = x[0] >= lo[0] && x[0] <= hi[0] && x[1] >= lo[1] && x[1] <= hi[1];
             return in ? fin(0) : kInf;
         }},
        {"sum", sum_fn(norm_fn(NormKind::L1, R2), affine_fn(pt(-1, 0), 0, R2)),
         [&](const Vector& x) { return fin(l1(x) - x[0]); }},
        {"infconv", inf_conv(norm_fn(NormKind::L1, R2), indicator(box)),
         [&](const Vector& x) {
             Rational d = 0;
             for (int i = 0; i < 2; ++i) d += max_r(0, max_r(lo[i] - x[i], x[i] - hi[i]));
             return fin(d);
         }},
        {"shift", arg_translate(norm_fn(NormKind::Linf, R2), pt(1, -1)),
         [&](const Vector& x) { return fin(linf(x - v2(1, -1))); }},
        {"compose", precompose(affine_map(M, v2(0, 1)), norm_fn(NormKind::L1, R2)),
         [&](const Vector& x) { return fin(l1(M * x + v2(0, 1))); }},
        {"plus", plus_const(sup_of_affine(pieces), 5), [&](const Vector& x) { return fin(maxaff(x) + 5); }},
        {"support", support_fn(box),
         [&](const Vector& y) {
             Rational s = 0;
             for (int i = 0; i < 2; ++i) s += max_r(y[i] * lo[i], y[i] * hi[i]);
             return fin(s);
         }},
    };
    const auto pts = grid(-2, 2, 2);
    REQUIRE(pts.size() >= 50);
    for (const auto& c : cases) {
        const std::string name = c.name;
        for (const auto& x : pts) {
            INFO(name, " at ", to_string(x));
            CHECK(evaluate(c.f, Point::numeric(x)) == c.oracle(x));
        }
    }
}

TEST_CASE("lifted conjugates match closed forms") {
    // (norm1)* is the indicator of the unit box, (norminf)* of the unit cross-polytope.
    FunctionExpr n1 = conjugate_of(norm_fn(NormKind::L1, R2));
    FunctionExpr ninf = conjugate_of(norm_fn(NormKind::Linf, R2));
    FunctionExpr rule1 = conjugate(norm_fn(NormKind::L1, R2));
    for (const auto& y : grid(-2, 2, 2)) {
        const bool in_box = abs_r(y[0]) <= 1 && abs_r(y[1]) <= 1;
        const bool in_cross = abs_r(y[0]) + abs_r(y[1]) <= 1;
        CHECK(evaluate(n1, Point::numeric(y)) == (in_box ? fin(0) : kInf));
        CHECK(evaluate(rule1, Point::numeric(y)) == (in_box ? fin(0) : kInf));
        CHECK(evaluate(ninf, Point::numeric(y)) == (in_cross ? fin(0) : kInf));
    }
    // Affine: <c, x> + a has conjugate indicator{c} - a.
    FunctionExpr aff = conjugate_of(affine_fn(pt(1, -1), 2, R2));
    CHECK(evaluate(aff, pt(1, -1)) == fin(-2));
    CHECK(evaluate(aff, pt(0, 0)) == kInf);
    CHECK(evaluate(conjugate(affine_fn(pt(1, -1), 2, R2)), pt(1, -1)) == fin(-2));
    CHECK_THROWS_AS(evaluate(conjugate_of(indicator(poly_set(Polyhedron::empty(2)))), pt(0, 0)), ImproperFunction);
}

TEST_CASE("property: Fenchel-Young, biconjugation and order reversal") {
    testsupport::Gen gen(testsupport::seed_from_env() + 21);
    const auto xs = grid(-1, 1, 2);
    for (int trial = 0; trial < 12; ++trial) {
        FunctionExpr g = random_max_affine(gen, gen.integer(1, 4));
        // f is an indicator-restricted variant so both finite and infinite values occur.
        FunctionExpr f = sum_fn(g, indicator(poly_set(Polyhedron::box(gen.vec(2, -2, 0), gen.vec(2, 0, 2)))));
        CHECK(biconjugate_check(f, xs, xs));
        CHECK(biconjugate_check(g, xs, xs));
        // f >= g pointwise, so f* <= g* pointwise.
        FunctionExpr fs = conjugate_of(f), gs = conjugate_of(g);
        for (const auto& y : xs) CHECK(evaluate(fs, Point::numeric(y)) <= evaluate(gs, Point::numeric(y)));
        // Rule-based and lifted conjugates agree.
        FunctionExpr rule = conjugate(f);
        for (const auto& y : xs) CHECK(evaluate(rule, Point::numeric(y)) == evaluate(fs, Point::numeric(y)));
    }
}

TEST_CASE("numeric properness") {
    CHECK(numeric_proper(norm_fn(NormKind::L1, R2)) == FactStatus::Holds);
    CHECK(numeric_proper(indicator(poly_set(Polyhedron::empty(2)))) == FactStatus::Fails);
    // infconv of <x, e1> with the zero function is -inf everywhere.
    FunctionExpr unbounded = inf_conv(affine_fn(pt(1, 0), 0, R2), affine_fn(pt(0, 0), 0, R2));
    CHECK(numeric_proper(unbounded) == FactStatus::Fails);
    CHECK(evaluate(unbounded, pt(0, 0)).kind == ExtendedReal::Kind::MinusInf);
}

TEST_CASE("symbolic conjugation rules") {
    SetExpr K = catalog_set(CatalogId::LpPlus, L2);
    Point c = Point::atom("c", {"strictly-positive"});
    FunctionExpr f = sum_fn(indicator(K), affine_fn(c, 0, L2));
    FunctionExpr fs = conjugate(f);
    REQUIRE(fs->kind == FnKind::Indicator);
    CHECK(fs->set->key == "translate(neg(lp-plus), c)");

    FunctionExpr norm = norm_fn(NormKind::L2, SpaceTag::banach("X"));
    CHECK(conjugate(norm)->key == "indicator(dual-ball)");

    // The sum with a norm is exact and folds into the indicator of a Minkowski sum.
    SetExpr ker = catalog_set(CatalogId::KernelOfFunctional, SpaceTag::banach("X"));
    FunctionExpr g = sum_fn(norm, indicator(ker));
    FunctionExpr gs = conjugate(g);
    REQUIRE(gs->kind == FnKind::Indicator);
    CHECK(gs->set->key == "sum(dual-ball, polar(kernel))");

    // Biconjugation returns a proper convex lsc function.
    CHECK(conjugate(conjugate_of(indicator(K)))->key == indicator(K)->key);
    // Infimal convolutions conjugate to sums.
    FunctionExpr ic = inf_conv(indicator(K), norm_fn(NormKind::L2, L2));
    CHECK(conjugate(ic)->kind == FnKind::Sum);
    CHECK_THROWS_AS(conjugate(indicator(poly_set(Polyhedron::empty(2)))), ImproperFunction);
}

TEST_CASE("domains") {
    SetExpr a = poly_set(Polyhedron::box(make_vector({0}), make_vector({1})));
    SetExpr b = poly_set(Polyhedron::box(make_vector({1}), make_vector({2})));
    SetExpr d = domain(sum_fn(indicator(a), indicator(b)));
    REQUIRE(d->kind == SetKind::Poly);
    CHECK(same_set(d->poly, Polyhedron::point(make_vector({1}))));

    Point x0 = Point::atom("x0", {"strictly-positive"});
    SetExpr K = catalog_set(CatalogId::LpPlus, L2);
    FunctionExpr f = sum_fn(norm_fn(NormKind::L2, L2), indicator(mink_diff(singleton(x0, L2), K)));
    CHECK(domain(f)->key == "translate(neg(lp-plus), x0)");
    CHECK(domain(norm_fn(NormKind::L2, L2))->kind == SetKind::Whole);
    CHECK(domain(inf_conv(indicator(K), indicator(neg_set(K))))->kind == SetKind::Whole);

    // Domain of a numeric conjugate: (norm1 restricted to a box)* is finite everywhere.
    FunctionExpr boxed = sum_fn(norm_fn(NormKind::L1, R2), indicator(poly_set(Polyhedron::box(v2(-1, -1), v2(1, 1)))));
    SetExpr dc = domain(conjugate_of(boxed));
    REQUIRE(dc->kind == SetKind::Poly);
    CHECK(same_set(dc->poly, Polyhedron::whole(2)));
}

TEST_CASE("epigraph difference sets") {
    SetExpr C = catalog_set(CatalogId::SubspaceC, L2);
    SetExpr S = catalog_set(CatalogId::SubspaceS, L2);
    EpiDiff e = epi_diff_set(indicator(C), indicator(S), 0);
    CHECK(e.set->key == "product(sum(subspace-c, subspace-s), poly(1; -1 <= 0))");

    // Numeric: f = |x|, g = indicator [1, 2]; inf (f + g) = 1.
    SetExpr seg = poly_set(Polyhedron::box(make_vector({1}), make_vector({2})));
    EpiDiff n = epi_diff_set(norm_fn(NormKind::L1, SpaceTag::finite(1)), indicator(seg), 1);
    REQUIRE(n.set->kind == SetKind::Poly);
    CHECK(n.set->poly.contains(make_vector({0, 0})));
    CHECK_FALSE(n.set->poly.contains(make_vector({0, -1})));
    CHECK(n.set->poly.contains(make_vector({-1, -1})));
}

TEST_CASE("lower bounds") {
    Point c = Point::atom("c", {"nonneg"});
    SetExpr K = catalog_set(CatalogId::LpPlus, L2);
    CHECK(lower_bound(sum_fn(affine_fn(c, 0, L2), indicator(K))) == Rational(0));
    CHECK_FALSE(lower_bound(affine_fn(c, 0, L2)).has_value());
    CHECK(lower_bound(sup_of_affine({{v2(1, 0), 0}, {v2(-1, 0), 0}, {v2(0, 1), -3}})) == Rational(0));
    CHECK_FALSE(lower_bound(affine_fn(pt(1, 0), 0, R2)).has_value());
}
