#include "dualdiag/lp.hpp"

#include <cstdlib>
#include <string>

namespace dualdiag {

LinearProgram::LinearProgram(Eigen::Index dim) : n(dim), objective(zeros(dim)) {}

void LinearProgram::add_row(Vector coeffs, Relation rel, Rational rhs) {
    rows.push_back({std::move(coeffs), rel, std::move(rhs)});
}

void LinearProgram::set_lower(Eigen::Index j, Rational v) {
    if (lower.empty()) lower.resize(static_cast<std::size_t>(n));
    lower[static_cast<std::size_t>(j)] = std::move(v);
}

void LinearProgram::set_upper(Eigen::Index j, Rational v) {
    if (upper.empty()) upper.resize(static_cast<std::size_t>(n));
    upper[static_cast<std::size_t>(j)] = std::move(v);
}

namespace {

void check_well_formed(const LinearProgram& lp) {
    if (lp.n < 0) throw MalformedInput("negative dimension");
    if (lp.objective.size() != lp.n)
        throw MalformedInput("objective has length " + std::to_string(lp.objective.size()) +
                             ", expected " + std::to_string(lp.n));
    for (std::size_t i = 0; i < lp.rows.size(); ++i)
        if (lp.rows[i].coeffs.size() != lp.n)
            throw MalformedInput("row " + std::to_string(i) + " has wrong length");
    if (!lp.lower.empty() && static_cast<Eigen::Index>(lp.lower.size()) != lp.n)
        throw MalformedInput("lower bounds have wrong length");
    if (!lp.upper.empty() && static_cast<Eigen::Index>(lp.upper.size()) != lp.n)
        throw MalformedInput("upper bounds have wrong length");
}

bool row_satisfied(const LpRow& r, const Rational& lhs) {
    switch (r.rel) {
        case Relation::LessEq: return lhs <= r.rhs;
        case Relation::GreaterEq: return lhs >= r.rhs;
        case Relation::Equal: return lhs == r.rhs;
    }
    return false;
}

Rational dot(const Vector& a, const Vector& b) {
    Rational s = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

struct Tableau {
    Eigen::Index m = 0;        // rows
    Eigen::Index n = 0;        // original variables
    Eigen::Index n_slack = 0;
    Eigen::Index cols = 0;     // 2n + slacks + m artificials
    Eigen::Index art0 = 0;     // first artificial column
    Matrix T;                  // m x (cols + 1), last column is rhs
    std::vector<Eigen::Index> basis;
    std::vector<int> sigma;    // +1 / -1 row flips
    Vector reduced;            // length cols
    long pivots = 0;
    long cap = 0;

    const Rational& rhs(Eigen::Index i) const { return T(i, cols); }

    void pivot(Eigen::Index r, Eigen::Index c) {
        if (++pivots > cap)
            throw LpIterationLimit("simplex pivot cap of " + std::to_string(cap) + " exceeded");
        Rational p = T(r, c);
        if (p != 1) T.row(r) /= p;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (i == r || T(i, c) == 0) continue;
            Rational f = T(i, c);
            T.row(i) -= f * T.row(r);
        }
        if (reduced[c] != 0) {
            Rational f = reduced[c];
            for (Eigen::Index j = 0; j < cols; ++j)
                if (T(r, j) != 0) reduced[j] -= f * T(r, j);
        }
        basis[static_cast<std::size_t>(r)] = c;
    }

    void price(const Vector& cost) {
        reduced = cost;
        for (Eigen::Index i = 0; i < m; ++i) {
            const Rational& cb = cost[basis[static_cast<std::size_t>(i)]];
            if (cb == 0) continue;
            for (Eigen::Index j = 0; j < cols; ++j)
                if (T(i, j) != 0) reduced[j] -= cb * T(i, j);
        }
    }

    // Returns the entering column that proved unboundedness, or -1 at optimum.
    Eigen::Index run(bool allow_artificial) {
        for (;;) {
            Eigen::Index enter = -1;
            Eigen::Index limit = allow_artificial ? cols : art0;
            for (Eigen::Index j = 0; j < limit; ++j)
                if (reduced[j] < 0) { enter = j; break; }
            if (enter < 0) return -1;
            Eigen::Index leave = -1;
            Rational best;
            for (Eigen::Index i = 0; i < m; ++i) {
                if (T(i, enter) <= 0) continue;
                Rational ratio = rhs(i) / T(i, enter);
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis[static_cast<std::size_t>(i)] <
                                          basis[static_cast<std::size_t>(leave)])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return enter;
            pivot(leave, enter);
        }
    }

    Vector column_values() const {
        Vector z = zeros(cols);
        for (Eigen::Index i = 0; i < m; ++i) z[basis[static_cast<std::size_t>(i)]] = rhs(i);
        return z;
    }

    Vector original_point(const Vector& z) const {
        Vector x(n);
        for (Eigen::Index j = 0; j < n; ++j) x[j] = z[j] - z[n + j];
        return x;
    }

    // y_i = c_B^T B^{-1}, read from the artificial block, mapped back through the row flips.
    Vector row_prices(const Vector& cost) const {
        Vector y = zeros(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const Rational& cb = cost[basis[static_cast<std::size_t>(i)]];
            if (cb == 0) continue;
            for (Eigen::Index k = 0; k < m; ++k)
                if (T(i, art0 + k) != 0) y[k] += cb * T(i, art0 + k);
        }
        for (Eigen::Index k = 0; k < m; ++k)
            if (sigma[static_cast<std::size_t>(k)] < 0) y[k] = -y[k];
        return y;
    }
};

}  // namespace

long max_pivots() {
    if (const char* env = std::getenv("DUALDIAG_MAX_PIVOTS")) {
        try {
            long v = std::stol(env);
            if (v > 0) return v;
        } catch (...) {
        }
    }
    return 100000;
}

std::vector<LpRow> expanded_rows(const LinearProgram& lp) {
    std::vector<LpRow> rows = lp.rows;
    for (std::size_t j = 0; j < lp.lower.size(); ++j)
        if (lp.lower[j])
            rows.push_back({unit_vector(lp.n, static_cast<Eigen::Index>(j)), Relation::GreaterEq,
                            *lp.lower[j]});
    for (std::size_t j = 0; j < lp.upper.size(); ++j)
        if (lp.upper[j])
            rows.push_back({unit_vector(lp.n, static_cast<Eigen::Index>(j)), Relation::LessEq,
                            *lp.upper[j]});
    return rows;
}

LpOutcome solve_lp(const LinearProgram& lp) {
    check_well_formed(lp);
    const std::vector<LpRow> rows = expanded_rows(lp);
    Tableau tb;
    tb.cap = max_pivots();
    tb.m = static_cast<Eigen::Index>(rows.size());
    tb.n = lp.n;
    for (const auto& r : rows)
        if (r.rel != Relation::Equal) ++tb.n_slack;
    tb.art0 = 2 * tb.n + tb.n_slack;
    tb.cols = tb.art0 + tb.m;
    tb.T = Matrix::Zero(tb.m, tb.cols + 1);
    tb.sigma.assign(rows.size(), 1);
    tb.basis.resize(rows.size());

    Eigen::Index slack = 2 * tb.n;
    for (Eigen::Index i = 0; i < tb.m; ++i) {
        const LpRow& r = rows[static_cast<std::size_t>(i)];
        int s = r.rhs < 0 ? -1 : 1;
        tb.sigma[static_cast<std::size_t>(i)] = s;
        for (Eigen::Index j = 0; j < tb.n; ++j) {
            if (r.coeffs[j] == 0) continue;
            tb.T(i, j) = s * r.coeffs[j];
            tb.T(i, tb.n + j) = -s * r.coeffs[j];
        }
        if (r.rel == Relation::LessEq) tb.T(i, slack++) = s;
        else if (r.rel == Relation::GreaterEq) tb.T(i, slack++) = -s;
        tb.T(i, tb.art0 + i) = 1;
        tb.T(i, tb.cols) = s * r.rhs;
        tb.basis[static_cast<std::size_t>(i)] = tb.art0 + i;
    }

    // Phase 1: minimize the sum of artificials; artificials never re-enter.
    Vector phase1 = zeros(tb.cols);
    for (Eigen::Index k = 0; k < tb.m; ++k) phase1[tb.art0 + k] = 1;
    tb.price(phase1);
    tb.run(false);
    Rational infeas = 0;
    for (Eigen::Index i = 0; i < tb.m; ++i)
        if (tb.basis[static_cast<std::size_t>(i)] >= tb.art0) infeas += tb.rhs(i);
    if (infeas > 0) {
        Vector y = tb.row_prices(phase1);
        return Infeasible{-y};
    }

    // Drive zero-level artificials out of the basis where a structural pivot exists.
    for (Eigen::Index i = 0; i < tb.m; ++i) {
        if (tb.basis[static_cast<std::size_t>(i)] < tb.art0) continue;
        for (Eigen::Index j = 0; j < tb.art0; ++j)
            if (tb.T(i, j) != 0) {
                tb.pivot(i, j);
                break;
            }
    }

    // Phase 2 on the minimization form.
    Vector cost = zeros(tb.cols);
    for (Eigen::Index j = 0; j < tb.n; ++j) {
        Rational c = lp.sense == Sense::Minimize ? lp.objective[j] : Rational(-lp.objective[j]);
        cost[j] = c;
        cost[tb.n + j] = -c;
    }
    tb.price(cost);
    Eigen::Index enter = tb.run(false);
    Vector z = tb.column_values();
    Vector point = tb.original_point(z);
    if (enter >= 0) {
        Vector d = zeros(tb.cols);
        d[enter] = 1;
        for (Eigen::Index i = 0; i < tb.m; ++i) d[tb.basis[static_cast<std::size_t>(i)]] = -tb.T(i, enter);
        return Unbounded{point, tb.original_point(d)};
    }
    Vector y = tb.row_prices(cost);
    if (lp.sense == Sense::Maximize) y = -y;
    Rational value = dot(lp.objective, point);
    return Optimal{point, value, y};
}

bool verify_certificate(const LinearProgram& lp, const LpOutcome& out) {
    try {
        check_well_formed(lp);
    } catch (const MalformedInput&) {
        return false;
    }
    const std::vector<LpRow> rows = expanded_rows(lp);
    const auto m = static_cast<Eigen::Index>(rows.size());
    auto feasible = [&](const Vector& x) {
        if (x.size() != lp.n) return false;
        for (const auto& r : rows)
            if (!row_satisfied(r, dot(r.coeffs, x))) return false;
        return true;
    };

    if (const auto* opt = std::get_if<Optimal>(&out)) {
        if (!feasible(opt->point)) return false;
        if (dot(lp.objective, opt->point) != opt->value) return false;
        if (opt->duals.size() != m) return false;
        Vector combo = zeros(lp.n);
        Rational bound = 0;
        for (Eigen::Index r = 0; r < m; ++r) {
            const Rational& y = opt->duals[r];
            const LpRow& row = rows[static_cast<std::size_t>(r)];
            bool min = lp.sense == Sense::Minimize;
            if (row.rel == Relation::LessEq && (min ? y > 0 : y < 0)) return false;
            if (row.rel == Relation::GreaterEq && (min ? y < 0 : y > 0)) return false;
            if (y == 0) continue;
            combo += y * row.coeffs;
            bound += y * row.rhs;
        }
        return combo == lp.objective && bound == opt->value;
    }
    if (const auto* inf = std::get_if<Infeasible>(&out)) {
        if (inf->farkas.size() != m) return false;
        Vector combo = zeros(lp.n);
        Rational bound = 0;
        for (Eigen::Index r = 0; r < m; ++r) {
            const Rational& y = inf->farkas[r];
            const LpRow& row = rows[static_cast<std::size_t>(r)];
            if (row.rel == Relation::LessEq && y < 0) return false;
            if (row.rel == Relation::GreaterEq && y > 0) return false;
            if (y == 0) continue;
            combo += y * row.coeffs;
            bound += y * row.rhs;
        }
        return is_zero(combo) && bound < 0;
    }
    const auto& unb = std::get<Unbounded>(out);
    if (!feasible(unb.point) || unb.ray.size() != lp.n) return false;
    for (const auto& r : rows) {
        Rational s = dot(r.coeffs, unb.ray);
        if (r.rel == Relation::LessEq && s > 0) return false;
        if (r.rel == Relation::GreaterEq && s < 0) return false;
        if (r.rel == Relation::Equal && s != 0) return false;
    }
    Rational gain = dot(lp.objective, unb.ray);
    return lp.sense == Sense::Minimize ? gain < 0 : gain > 0;
}

}  // namespace dualdiag
