#include "dualdiag/polyhedron.hpp"

#include <algorithm>
#include <sstream>

namespace dualdiag {

std::string notion_name(Notion k) {
    switch (k) {
        case Notion::Int: return "int";
        case Notion::Core: return "core";
        case Notion::Qi: return "qi";
        case Notion::Sqri: return "sqri";
        case Notion::Icr: return "icr";
        case Notion::Qri: return "qri";
    }
    return "?";
}

Notion parse_notion(const std::string& s) {
    for (Notion k : kAllNotions)
        if (notion_name(k) == s) return k;
    throw ParseError("unknown interiority notion '" + s + "'");
}

namespace {

struct Row {
    Vector a;
    Rational b;
};

Matrix append_row(const Matrix& M, const Vector& r) {
    Matrix out(M.rows() + 1, r.size());
    if (M.rows() > 0) out.topRows(M.rows()) = M;
    out.row(M.rows()) = r.transpose();
    return out;
}

Vector append_entry(const Vector& v, const Rational& x) {
    Vector out(v.size() + 1);
    if (v.size() > 0) out.head(v.size()) = v;
    out[v.size()] = x;
    return out;
}

std::vector<Row> rows_of(const Matrix& M, const Vector& rhs) {
    std::vector<Row> out;
    out.reserve(static_cast<std::size_t>(M.rows()));
    for (Eigen::Index i = 0; i < M.rows(); ++i) out.push_back({M.row(i).transpose(), rhs[i]});
    return out;
}

Polyhedron from_rows(Eigen::Index n, const std::vector<Row>& ineqs, const std::vector<Row>& eqs) {
    Polyhedron P(n);
    P.A = Matrix(static_cast<Eigen::Index>(ineqs.size()), n);
    P.b = Vector(static_cast<Eigen::Index>(ineqs.size()));
    for (std::size_t i = 0; i < ineqs.size(); ++i) {
        P.A.row(static_cast<Eigen::Index>(i)) = ineqs[i].a.transpose();
        P.b[static_cast<Eigen::Index>(i)] = ineqs[i].b;
    }
    P.E = Matrix(static_cast<Eigen::Index>(eqs.size()), n);
    P.d = Vector(static_cast<Eigen::Index>(eqs.size()));
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        P.E.row(static_cast<Eigen::Index>(i)) = eqs[i].a.transpose();
        P.d[static_cast<Eigen::Index>(i)] = eqs[i].b;
    }
    return P;
}

LinearProgram lp_of(const Polyhedron& P) {
    LinearProgram lp(P.n);
    for (Eigen::Index i = 0; i < P.A.rows(); ++i)
        lp.add_row(P.A.row(i).transpose(), Relation::LessEq, P.b[i]);
    for (Eigen::Index i = 0; i < P.E.rows(); ++i)
        lp.add_row(P.E.row(i).transpose(), Relation::Equal, P.d[i]);
    return lp;
}

// Scale so the first nonzero coefficient has absolute value one.
void normalize_row(Row& r) {
    for (Eigen::Index i = 0; i < r.a.size(); ++i) {
        if (r.a[i] == 0) continue;
        Rational s = abs(r.a[i]);
        if (s != 1) {
            r.a /= s;
            r.b /= s;
        }
        return;
    }
}

void normalize_eq(Row& r) {
    for (Eigen::Index i = 0; i < r.a.size(); ++i) {
        if (r.a[i] == 0) continue;
        Rational s = r.a[i];
        if (s != 1) {
            r.a /= s;
            r.b /= s;
        }
        return;
    }
}

// Returns false when a row reduces to 0 <= negative (empty set).
bool tidy(std::vector<Row>& ineqs, std::vector<Row>& eqs) {
    std::vector<Row> kept;
    for (Row& r : ineqs) {
        if (is_zero(r.a)) {
            if (r.b < 0) return false;
            continue;
        }
        normalize_row(r);
        bool merged = false;
        for (Row& k : kept)
            if (k.a == r.a) {
                if (r.b < k.b) k.b = r.b;
                merged = true;
                break;
            }
        if (!merged) kept.push_back(r);
    }
    // Opposite pairs a.x <= b, -a.x <= -b become equalities.
    std::vector<bool> gone(kept.size(), false);
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (gone[i]) continue;
        for (std::size_t j = i + 1; j < kept.size(); ++j) {
            if (gone[j]) continue;
            if (kept[j].a == -kept[i].a) {
                if (kept[j].b == -kept[i].b) {
                    eqs.push_back(kept[i]);
                    gone[i] = gone[j] = true;
                } else if (kept[j].b < -kept[i].b) {
                    return false;
                }
                break;
            }
        }
    }
    ineqs.clear();
    for (std::size_t i = 0; i < kept.size(); ++i)
        if (!gone[i]) ineqs.push_back(kept[i]);

    std::vector<Row> eq_kept;
    for (Row& r : eqs) {
        if (is_zero(r.a)) {
            if (r.b != 0) return false;
            continue;
        }
        normalize_eq(r);
        bool dup = false;
        for (const Row& k : eq_kept)
            if (k.a == r.a) {
                if (k.b != r.b) return false;
                dup = true;
                break;
            }
        if (!dup) eq_kept.push_back(r);
    }
    eqs = std::move(eq_kept);
    return true;
}

// Gaussian reduction of equality rows: drops dependent rows, detects inconsistency.
bool reduce_equalities(std::vector<Row>& eqs, Eigen::Index n) {
    std::vector<Row> basis;
    std::vector<Eigen::Index> pivots;
    for (Row r : eqs) {
        Row red = r;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            Rational f = red.a[pivots[k]];
            if (f == 0) continue;
            red.a -= f * basis[k].a;
            red.b -= f * basis[k].b;
        }
        Eigen::Index p = -1;
        for (Eigen::Index i = 0; i < n; ++i)
            if (red.a[i] != 0) { p = i; break; }
        if (p < 0) {
            if (red.b != 0) return false;
            continue;
        }
        Rational s = red.a[p];
        red.a /= s;
        red.b /= s;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            Rational f = basis[k].a[p];
            if (f == 0) continue;
            basis[k].a -= f * red.a;
            basis[k].b -= f * red.b;
        }
        basis.push_back(red);
        pivots.push_back(p);
    }
    // Keep the caller's rows that were independent, in original order, for readability.
    std::vector<Row> kept;
    Matrix acc(0, n);
    for (const Row& r : eqs) {
        Matrix trial = append_row(acc, r.a);
        if (rank(trial) > acc.rows()) {
            kept.push_back(r);
            acc = trial;
        }
    }
    eqs = std::move(kept);
    return true;
}

void prune(std::vector<Row>& ineqs, const std::vector<Row>& eqs, Eigen::Index n) {
    for (std::size_t i = ineqs.size(); i-- > 0;) {
        LinearProgram lp(n);
        lp.sense = Sense::Maximize;
        lp.objective = ineqs[i].a;
        for (std::size_t j = 0; j < ineqs.size(); ++j)
            if (j != i) lp.add_row(ineqs[j].a, Relation::LessEq, ineqs[j].b);
        for (const Row& e : eqs) lp.add_row(e.a, Relation::Equal, e.b);
        LpOutcome out = solve_lp(lp);
        if (const auto* opt = std::get_if<Optimal>(&out))
            if (opt->value <= ineqs[i].b) ineqs.erase(ineqs.begin() + static_cast<std::ptrdiff_t>(i));
    }
}

}  // namespace

Polyhedron::Polyhedron(Eigen::Index dim) : n(dim), A(0, dim), b(0), E(0, dim), d(0) {}

Polyhedron Polyhedron::empty(Eigen::Index dim) {
    Polyhedron P(dim);
    P.add_ineq(zeros(dim), -1);
    return P;
}

Polyhedron Polyhedron::point(const Vector& x) {
    Polyhedron P(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) P.add_eq(unit_vector(x.size(), i), x[i]);
    return P;
}

Polyhedron Polyhedron::box(const Vector& lo, const Vector& hi) {
    Polyhedron P(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
        P.add_ineq(unit_vector(lo.size(), i), hi[i]);
        P.add_ineq(-unit_vector(lo.size(), i), -lo[i]);
    }
    return P;
}

Polyhedron Polyhedron::orthant(Eigen::Index dim) {
    Polyhedron P(dim);
    for (Eigen::Index i = 0; i < dim; ++i) P.add_ineq(-unit_vector(dim, i), 0);
    return P;
}

void Polyhedron::add_ineq(const Vector& a, const Rational& rhs) {
    if (a.size() != n) throw MalformedInput("inequality has wrong length");
    A = append_row(A, a);
    b = append_entry(b, rhs);
}

void Polyhedron::add_eq(const Vector& e, const Rational& rhs) {
    if (e.size() != n) throw MalformedInput("equality has wrong length");
    E = append_row(E, e);
    d = append_entry(d, rhs);
}

bool Polyhedron::contains(const Vector& x) const {
    if (x.size() != n) return false;
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        if (A.row(i).dot(x.transpose()) > b[i]) return false;
    for (Eigen::Index i = 0; i < E.rows(); ++i)
        if (E.row(i).dot(x.transpose()) != d[i]) return false;
    return true;
}

std::string Polyhedron::describe() const {
    std::ostringstream os;
    os << "{x in R^" << n;
    auto term = [&](const Eigen::Index i, const Matrix& M) {
        std::string s;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (M(i, j) == 0) continue;
            if (!s.empty()) s += " + ";
            s += to_string(M(i, j)) + "*x" + std::to_string(j + 1);
        }
        return s.empty() ? std::string("0") : s;
    };
    for (Eigen::Index i = 0; i < A.rows(); ++i) os << " : " << term(i, A) << " <= " << to_string(b[i]);
    for (Eigen::Index i = 0; i < E.rows(); ++i) os << " : " << term(i, E) << " = " << to_string(d[i]);
    os << "}";
    return os.str();
}

Eigen::Index rank(const Matrix& M0) {
    Matrix M = M0;
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < M.cols() && r < M.rows(); ++c) {
        Eigen::Index p = -1;
        for (Eigen::Index i = r; i < M.rows(); ++i)
            if (M(i, c) != 0) { p = i; break; }
        if (p < 0) continue;
        M.row(p).swap(M.row(r));
        for (Eigen::Index i = r + 1; i < M.rows(); ++i) {
            if (M(i, c) == 0) continue;
            Rational f = M(i, c) / M(r, c);
            M.row(i) -= f * M.row(r);
        }
        ++r;
    }
    return r;
}

Eigen::Index AffineSubspace::dimension() const {
    return n - rank(E);
}

LpOutcome optimize(const Polyhedron& P, const Vector& c, Sense sense) {
    LinearProgram lp = lp_of(P);
    lp.objective = c;
    lp.sense = sense;
    return solve_lp(lp);
}

std::optional<Vector> feasible_point(const Polyhedron& P) {
    LpOutcome out = optimize(P, zeros(P.n), Sense::Minimize);
    if (const auto* opt = std::get_if<Optimal>(&out)) return opt->point;
    return std::nullopt;
}

bool is_empty(const Polyhedron& P) {
    return !feasible_point(P).has_value();
}

std::vector<bool> implicit_equalities(const Polyhedron& P) {
    std::vector<bool> out(static_cast<std::size_t>(P.A.rows()), false);
    for (Eigen::Index i = 0; i < P.A.rows(); ++i) {
        LpOutcome o = optimize(P, P.A.row(i).transpose(), Sense::Minimize);
        if (const auto* opt = std::get_if<Optimal>(&o)) out[static_cast<std::size_t>(i)] = opt->value == P.b[i];
    }
    return out;
}

AffineSubspace affine_hull(const Polyhedron& P) {
    if (is_empty(P)) throw EmptyPolyhedron("affine hull of an empty polyhedron");
    std::vector<bool> imp = implicit_equalities(P);
    std::vector<Row> eqs = rows_of(P.E, P.d);
    for (Eigen::Index i = 0; i < P.A.rows(); ++i)
        if (imp[static_cast<std::size_t>(i)] && !is_zero(P.A.row(i).transpose()))
            eqs.push_back({P.A.row(i).transpose(), P.b[i]});
    std::vector<Row> none;
    tidy(none, eqs);
    reduce_equalities(eqs, P.n);
    AffineSubspace H;
    H.n = P.n;
    Polyhedron tmp = from_rows(P.n, {}, eqs);
    H.E = tmp.E;
    H.d = tmp.d;
    return H;
}

std::optional<Vector> relative_interior_point(const Polyhedron& P) {
    if (is_empty(P)) return std::nullopt;
    std::vector<bool> imp = implicit_equalities(P);
    // Maximize a common slack t <= 1 on the non-implicit rows.
    LinearProgram lp(P.n + 1);
    lp.sense = Sense::Maximize;
    lp.objective = unit_vector(P.n + 1, P.n);
    for (Eigen::Index i = 0; i < P.A.rows(); ++i) {
        Vector row = append_entry(P.A.row(i).transpose(), imp[static_cast<std::size_t>(i)] ? 0 : 1);
        lp.add_row(row, imp[static_cast<std::size_t>(i)] ? Relation::Equal : Relation::LessEq, P.b[i]);
    }
    for (Eigen::Index i = 0; i < P.E.rows(); ++i)
        lp.add_row(append_entry(P.E.row(i).transpose(), 0), Relation::Equal, P.d[i]);
    lp.set_upper(P.n, 1);
    LpOutcome out = solve_lp(lp);
    const auto& opt = std::get<Optimal>(out);
    return Vector(opt.point.head(P.n));
}

bool zero_in(Notion k, const Polyhedron& P) {
    for (Eigen::Index i = 0; i < P.E.rows(); ++i)
        if (P.d[i] != 0) return false;
    for (Eigen::Index i = 0; i < P.A.rows(); ++i)
        if (P.b[i] < 0) return false;
    const bool full = k == Notion::Int || k == Notion::Core || k == Notion::Qi;
    if (full)
        for (Eigen::Index i = 0; i < P.E.rows(); ++i)
            if (!is_zero(P.E.row(i).transpose())) return false;
    std::vector<bool> imp = implicit_equalities(P);
    for (Eigen::Index i = 0; i < P.A.rows(); ++i) {
        if (is_zero(P.A.row(i).transpose())) continue;
        if (imp[static_cast<std::size_t>(i)]) {
            if (full) return false;
            continue;
        }
        if (P.b[i] == 0) return false;
    }
    return true;
}

FinitelyGeneratedCone normal_cone(const Polyhedron& P, const Vector& x) {
    if (!P.contains(x)) throw NotAMember("point " + to_string(x) + " is not in the polyhedron");
    FinitelyGeneratedCone K;
    K.n = P.n;
    for (Eigen::Index i = 0; i < P.A.rows(); ++i) {
        Vector a = P.A.row(i).transpose();
        if (!is_zero(a) && a.dot(x) == P.b[i]) K.generators.push_back(a);
    }
    for (Eigen::Index i = 0; i < P.E.rows(); ++i) {
        Vector e = P.E.row(i).transpose();
        if (!is_zero(e)) K.lineality.push_back(e);
    }
    return K;
}

bool cone_contains(const FinitelyGeneratedCone& K, const Vector& v) {
    const auto g = static_cast<Eigen::Index>(K.generators.size());
    const auto l = static_cast<Eigen::Index>(K.lineality.size());
    LinearProgram lp(g + l);
    for (Eigen::Index r = 0; r < K.n; ++r) {
        Vector row(g + l);
        for (Eigen::Index j = 0; j < g; ++j) row[j] = K.generators[static_cast<std::size_t>(j)][r];
        for (Eigen::Index j = 0; j < l; ++j) row[g + j] = K.lineality[static_cast<std::size_t>(j)][r];
        lp.add_row(row, Relation::Equal, v[r]);
    }
    for (Eigen::Index j = 0; j < g; ++j) lp.set_lower(j, 0);
    return is_optimal(solve_lp(lp));
}

bool is_linear_subspace(const FinitelyGeneratedCone& K) {
    for (const Vector& g : K.generators)
        if (!cone_contains(K, -g)) return false;
    return true;
}

bool is_trivial(const FinitelyGeneratedCone& K) {
    for (const Vector& g : K.generators)
        if (!is_zero(g)) return false;
    for (const Vector& l : K.lineality)
        if (!is_zero(l)) return false;
    return true;
}

Polyhedron dual_cone(const FinitelyGeneratedCone& K) {
    Polyhedron P(K.n);
    for (const Vector& g : K.generators) P.add_ineq(-g, 0);
    for (const Vector& l : K.lineality) P.add_eq(l, 0);
    return P;
}

Polyhedron remove_redundancy(const Polyhedron& P) {
    if (is_empty(P)) return Polyhedron::empty(P.n);
    std::vector<Row> ineqs = rows_of(P.A, P.b), eqs = rows_of(P.E, P.d);
    tidy(ineqs, eqs);
    reduce_equalities(eqs, P.n);
    prune(ineqs, eqs, P.n);
    return from_rows(P.n, ineqs, eqs);
}

Polyhedron project(const Polyhedron& P, const std::vector<Eigen::Index>& keep) {
    const Eigen::Index n = P.n;
    const auto k = static_cast<Eigen::Index>(keep.size());
    std::vector<bool> kept(static_cast<std::size_t>(n), false);
    for (Eigen::Index j : keep) {
        if (j < 0 || j >= n) throw MalformedInput("projection index out of range");
        kept[static_cast<std::size_t>(j)] = true;
    }
    if (is_empty(P)) return Polyhedron::empty(k);

    std::vector<Row> ineqs = rows_of(P.A, P.b), eqs = rows_of(P.E, P.d);
    if (!tidy(ineqs, eqs)) return Polyhedron::empty(k);

    std::vector<Eigen::Index> dropped;
    for (Eigen::Index j = 0; j < n; ++j)
        if (!kept[static_cast<std::size_t>(j)]) dropped.push_back(j);

    // Substitute dropped coordinates out through equalities first.
    for (Eigen::Index j : dropped) {
        auto it = std::find_if(eqs.begin(), eqs.end(), [&](const Row& r) { return r.a[j] != 0; });
        if (it == eqs.end()) continue;
        Row piv = *it;
        eqs.erase(it);
        auto substitute = [&](Row& r) {
            if (r.a[j] == 0) return;
            Rational f = r.a[j] / piv.a[j];
            r.a -= f * piv.a;
            r.b -= f * piv.b;
            r.a[j] = 0;
        };
        for (Row& r : ineqs) substitute(r);
        for (Row& r : eqs) substitute(r);
    }
    if (!tidy(ineqs, eqs)) return Polyhedron::empty(k);
    prune(ineqs, eqs, n);

    std::vector<Eigen::Index> todo;
    for (Eigen::Index j : dropped) {
        bool used = std::any_of(ineqs.begin(), ineqs.end(), [&](const Row& r) { return r.a[j] != 0; });
        if (used) todo.push_back(j);
    }
    while (!todo.empty()) {
        // Cheapest coordinate first: smallest product of positive and negative counts.
        std::size_t best = 0;
        long best_cost = 0;
        bool first = true;
        for (std::size_t t = 0; t < todo.size(); ++t) {
            long pos = 0, neg = 0;
            for (const Row& r : ineqs) {
                if (r.a[todo[t]] > 0) ++pos;
                else if (r.a[todo[t]] < 0) ++neg;
            }
            long cost = pos * neg - pos - neg;
            if (first || cost < best_cost) {
                best = t;
                best_cost = cost;
                first = false;
            }
        }
        const Eigen::Index j = todo[best];
        todo.erase(todo.begin() + static_cast<std::ptrdiff_t>(best));
        std::vector<Row> pos, neg, next;
        for (Row& r : ineqs) {
            if (r.a[j] > 0) pos.push_back(r);
            else if (r.a[j] < 0) neg.push_back(r);
            else next.push_back(r);
        }
        for (const Row& p : pos)
            for (const Row& q : neg) {
                Rational sp = p.a[j], sq = -q.a[j];
                Row r{Vector(p.a / sp + q.a / sq), p.b / sp + q.b / sq};
                r.a[j] = 0;
                next.push_back(r);
            }
        ineqs = std::move(next);
        if (!tidy(ineqs, eqs)) return Polyhedron::empty(k);
        prune(ineqs, eqs, n);
    }
    reduce_equalities(eqs, n);

    auto shrink = [&](const std::vector<Row>& rows) {
        std::vector<Row> out;
        for (const Row& r : rows) {
            Row s{Vector(k), r.b};
            for (Eigen::Index t = 0; t < k; ++t) s.a[t] = r.a[keep[static_cast<std::size_t>(t)]];
            out.push_back(s);
        }
        return out;
    };
    return from_rows(k, shrink(ineqs), shrink(eqs));
}

Polyhedron intersect(const Polyhedron& P, const Polyhedron& Q) {
    if (P.n != Q.n) throw MalformedInput("intersection of polyhedra in different dimensions");
    Polyhedron R(P.n);
    R.A = vstack(P.A, Q.A);
    R.b = vcat(P.b, Q.b);
    R.E = vstack(P.E, Q.E);
    R.d = vcat(P.d, Q.d);
    if (R.A.rows() == 0) R.A = Matrix(0, P.n);
    if (R.E.rows() == 0) R.E = Matrix(0, P.n);
    return R;
}

Polyhedron translate(const Polyhedron& P, const Vector& t) {
    Polyhedron R = P;
    for (Eigen::Index i = 0; i < P.A.rows(); ++i) R.b[i] += P.A.row(i).dot(t.transpose());
    for (Eigen::Index i = 0; i < P.E.rows(); ++i) R.d[i] += P.E.row(i).dot(t.transpose());
    return R;
}

Polyhedron negate(const Polyhedron& P) {
    Polyhedron R = P;
    R.A = -P.A;
    R.E = -P.E;
    return R;
}

Polyhedron scale(const Polyhedron& P, const Rational& s) {
    if (s == 0) {
        if (is_empty(P)) return Polyhedron::empty(P.n);
        return Polyhedron::point(zeros(P.n));
    }
    Polyhedron R = P;
    R.A = P.A / s;
    R.E = P.E / s;
    return R;
}

Polyhedron product(const Polyhedron& P, const Polyhedron& Q) {
    const Eigen::Index n = P.n + Q.n;
    Polyhedron R(n);
    R.A = Matrix::Zero(P.A.rows() + Q.A.rows(), n);
    R.A.topLeftCorner(P.A.rows(), P.n) = P.A;
    R.A.bottomRightCorner(Q.A.rows(), Q.n) = Q.A;
    R.b = vcat(P.b, Q.b);
    R.E = Matrix::Zero(P.E.rows() + Q.E.rows(), n);
    R.E.topLeftCorner(P.E.rows(), P.n) = P.E;
    R.E.bottomRightCorner(Q.E.rows(), Q.n) = Q.E;
    R.d = vcat(P.d, Q.d);
    return R;
}

Polyhedron affine_image(const Matrix& M, const Vector& t, const Polyhedron& P) {
    const Eigen::Index m = M.rows();
    // Variables (z, x) with z - M x = t.
    Polyhedron lifted = product(Polyhedron::whole(m), P);
    for (Eigen::Index i = 0; i < m; ++i) {
        Vector row = zeros(m + P.n);
        row[i] = 1;
        for (Eigen::Index j = 0; j < P.n; ++j) row[m + j] = -M(i, j);
        lifted.add_eq(row, t[i]);
    }
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < m; ++i) keep.push_back(i);
    return project(lifted, keep);
}

Polyhedron affine_preimage(const Matrix& M, const Vector& t, const Polyhedron& P) {
    Polyhedron R(M.cols());
    R.A = P.A * M;
    R.b = P.b - P.A * t;
    R.E = P.E * M;
    R.d = P.d - P.E * t;
    if (R.A.rows() == 0) R.A = Matrix(0, M.cols());
    if (R.E.rows() == 0) R.E = Matrix(0, M.cols());
    return R;
}

namespace {

// {(x, s) : A x <= s b, E x = s d, s >= 0 [, s <= 1]} projected to x.
Polyhedron homogenized_shadow(const Polyhedron& P, bool cap_at_one) {
    if (is_empty(P)) return Polyhedron::empty(P.n);
    Polyhedron H(P.n + 1);
    for (Eigen::Index i = 0; i < P.A.rows(); ++i)
        H.add_ineq(append_entry(P.A.row(i).transpose(), -P.b[i]), 0);
    for (Eigen::Index i = 0; i < P.E.rows(); ++i)
        H.add_eq(append_entry(P.E.row(i).transpose(), -P.d[i]), 0);
    H.add_ineq(-unit_vector(P.n + 1, P.n), 0);
    if (cap_at_one) H.add_ineq(unit_vector(P.n + 1, P.n), 1);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < P.n; ++i) keep.push_back(i);
    return project(H, keep);
}

}  // namespace

Polyhedron closed_cone_hull(const Polyhedron& P) {
    return homogenized_shadow(P, false);
}

Polyhedron closed_hull_with_origin(const Polyhedron& P) {
    return homogenized_shadow(P, true);
}

Polyhedron minkowski_sum(const Polyhedron& P, const Polyhedron& Q) {
    if (P.n != Q.n) throw MalformedInput("Minkowski sum of polyhedra in different dimensions");
    const Eigen::Index n = P.n;
    Polyhedron lifted = product(Polyhedron::whole(n), product(P, Q));
    for (Eigen::Index i = 0; i < n; ++i) {
        Vector row = zeros(3 * n);
        row[i] = 1;
        row[n + i] = -1;
        row[2 * n + i] = -1;
        lifted.add_eq(row, 0);
    }
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < n; ++i) keep.push_back(i);
    return project(lifted, keep);
}

bool contains_polyhedron(const Polyhedron& outer, const Polyhedron& inner) {
    if (is_empty(inner)) return true;
    for (Eigen::Index i = 0; i < outer.A.rows(); ++i) {
        LpOutcome o = optimize(inner, outer.A.row(i).transpose(), Sense::Maximize);
        const auto* opt = std::get_if<Optimal>(&o);
        if (!opt || opt->value > outer.b[i]) return false;
    }
    for (Eigen::Index i = 0; i < outer.E.rows(); ++i) {
        Vector e = outer.E.row(i).transpose();
        LpOutcome hi = optimize(inner, e, Sense::Maximize);
        LpOutcome lo = optimize(inner, e, Sense::Minimize);
        const auto* h = std::get_if<Optimal>(&hi);
        const auto* l = std::get_if<Optimal>(&lo);
        if (!h || !l || h->value != outer.d[i] || l->value != outer.d[i]) return false;
    }
    return true;
}

bool same_set(const Polyhedron& P, const Polyhedron& Q) {
    return P.n == Q.n && contains_polyhedron(P, Q) && contains_polyhedron(Q, P);
}

}  // namespace dualdiag
