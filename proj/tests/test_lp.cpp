#include "doctest.h"
#include "dualdiag/lp.hpp"
#include "test_support.hpp"

#include <algorithm>

using namespace dualdiag;

namespace {

// Brute-force optimum of max c.x over a bounded 2-D polygon {a_i.x <= b_i}:
// intersect every pair of rows and keep the best feasible intersection.
std::optional<Rational> vertex_max_2d(const std::vector<LpRow>& rows, const Vector& c) {
    std::optional<Rational> best;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            const Vector& a = rows[i].coeffs;
            const Vector& b = rows[j].coeffs;
            Rational det = a[0] * b[1] - a[1] * b[0];
            if (det == 0) continue;
            Vector x(2);
            x[0] = (rows[i].rhs * b[1] - a[1] * rows[j].rhs) / det;
            x[1] = (a[0] * rows[j].rhs - rows[i].rhs * b[0]) / det;
            bool ok = std::all_of(rows.begin(), rows.end(),
                                  [&](const LpRow& r) { return r.coeffs.dot(x) <= r.rhs; });
            if (!ok) continue;
            Rational v = c.dot(x);
            if (!best || v > *best) best = v;
        }
    return best;
}

}  // namespace

TEST_CASE("maximize x subject to x <= 1") {
    LinearProgram lp(1);
    lp.sense = Sense::Maximize;
    lp.objective[0] = 1;
    lp.add_row(make_vector({1}), Relation::LessEq, 1);
    LpOutcome out = solve_lp(lp);
    REQUIRE(is_optimal(out));
    CHECK(std::get<Optimal>(out).point[0] == 1);
    CHECK(std::get<Optimal>(out).value == 1);
    CHECK(verify_certificate(lp, out));
    CHECK_FALSE(verify_certificate(lp, Optimal{make_vector({2}), 2, make_vector({1})}));
}

TEST_CASE("infeasible pair yields the (1,1) certificate") {
    LinearProgram lp(1);
    lp.add_row(make_vector({1}), Relation::LessEq, -1);
    lp.add_row(make_vector({-1}), Relation::LessEq, 0);
    LpOutcome out = solve_lp(lp);
    REQUIRE(is_infeasible(out));
    CHECK(verify_certificate(lp, out));
    const Vector& y = std::get<Infeasible>(out).farkas;
    CHECK(y[0] == y[1]);
    CHECK(verify_certificate(lp, Infeasible{make_vector({1, 1})}));
    CHECK_FALSE(verify_certificate(lp, Infeasible{make_vector({1, 0})}));
}

TEST_CASE("unit box minimum agrees with the four vertices") {
    LinearProgram lp(2);
    lp.objective = make_vector({1, 1});
    for (int j = 0; j < 2; ++j) {
        lp.set_lower(j, 0);
        lp.set_upper(j, 1);
    }
    LpOutcome out = solve_lp(lp);
    REQUIRE(is_optimal(out));
    Rational brute = 10;
    for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 1; ++b) brute = std::min<Rational>(brute, Rational(a + b));
    CHECK(std::get<Optimal>(out).value == brute);
    CHECK(verify_certificate(lp, out));
}

TEST_CASE("unbounded ray is certified") {
    LinearProgram lp(2);
    lp.sense = Sense::Maximize;
    lp.objective = make_vector({1, 0});
    lp.add_row(make_vector({0, 1}), Relation::LessEq, 3);
    lp.add_row(make_vector({-1, 0}), Relation::LessEq, 0);
    LpOutcome out = solve_lp(lp);
    REQUIRE(is_unbounded(out));
    CHECK(verify_certificate(lp, out));
}

TEST_CASE("equality rows and redundant equalities") {
    LinearProgram lp(3);
    lp.objective = make_vector({1, 2, 3});
    lp.add_row(make_vector({1, 1, 1}), Relation::Equal, 1);
    lp.add_row(make_vector({2, 2, 2}), Relation::Equal, 2);
    for (int j = 0; j < 3; ++j) lp.set_lower(j, 0);
    LpOutcome out = solve_lp(lp);
    REQUIRE(is_optimal(out));
    CHECK(std::get<Optimal>(out).value == 1);
    CHECK(verify_certificate(lp, out));
}

TEST_CASE("malformed input is rejected") {
    LinearProgram lp(2);
    lp.add_row(make_vector({1}), Relation::LessEq, 0);
    CHECK_THROWS_AS(solve_lp(lp), MalformedInput);
}

TEST_CASE("random LPs with an optimum fixed by construction") {
    testsupport::Gen gen(testsupport::seed_from_env());
    for (int trial = 0; trial < 150; ++trial) {
        const Eigen::Index n = gen.integer(1, 4);
        Vector xstar = gen.vec(n, -3, 3, 2);
        LinearProgram lp(n);
        lp.sense = Sense::Maximize;
        Vector c = zeros(n);
        const int m = gen.integer(static_cast<int>(n), static_cast<int>(n) + 4);
        for (int r = 0; r < m; ++r) {
            Vector a = gen.nonzero_vec(n, -3, 3);
            bool active = r < n || gen.coin(30);
            Rational slack = active ? Rational(0) : gen.rational(1, 4);
            lp.add_row(a, Relation::LessEq, a.dot(xstar) + slack);
            if (active) c += Rational(gen.integer(0, 3)) * a;
        }
        lp.objective = c;
        LpOutcome out = solve_lp(lp);
        REQUIRE(is_optimal(out));
        CHECK(std::get<Optimal>(out).value == c.dot(xstar));
        CHECK(verify_certificate(lp, out));

        // Row permutation leaves the value unchanged.
        LinearProgram shuffled = lp;
        std::shuffle(shuffled.rows.begin(), shuffled.rows.end(), gen.rng);
        LpOutcome out2 = solve_lp(shuffled);
        REQUIRE(is_optimal(out2));
        CHECK(std::get<Optimal>(out2).value == std::get<Optimal>(out).value);
    }
}

TEST_CASE("random bounded polygons match vertex enumeration") {
    testsupport::Gen gen(testsupport::seed_from_env() + 1);
    for (int trial = 0; trial < 100; ++trial) {
        LinearProgram lp(2);
        lp.sense = Sense::Maximize;
        lp.objective = gen.vec(2, -4, 4);
        for (int j = 0; j < 2; ++j) {
            lp.add_row(unit_vector(2, j), Relation::LessEq, 5);
            lp.add_row(-unit_vector(2, j), Relation::LessEq, 5);
        }
        const int extra = gen.integer(0, 4);
        for (int r = 0; r < extra; ++r)
            lp.add_row(gen.nonzero_vec(2, -3, 3), Relation::LessEq, gen.rational(-2, 6));
        LpOutcome out = solve_lp(lp);
        auto brute = vertex_max_2d(lp.rows, lp.objective);
        CHECK(verify_certificate(lp, out));
        if (brute) {
            REQUIRE(is_optimal(out));
            CHECK(std::get<Optimal>(out).value == *brute);
        } else {
            CHECK(is_infeasible(out));
        }
    }
}

TEST_CASE("rational parsing and rendering") {
    CHECK(to_string(parse_rational("6/4")) == "3/2");
    CHECK(to_string(parse_rational("-2")) == "-2");
    CHECK_THROWS_AS(parse_rational("0.5"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
}
