#include "dualdiag/functions.hpp"

#include "dualdiag/sets.hpp"

#include <algorithm>

namespace dualdiag {

// ---------------------------------------------------------------- lifted systems

Polyhedron Lifted::materialize() const {
    if (aux() == 0) return sys;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < visible; ++i) keep.push_back(i);
    return project(sys, keep);
}

Eigen::Index LiftedBuilder::add_vars(Eigen::Index k) {
    Eigen::Index start = nvars_;
    nvars_ += k;
    return start;
}

void LiftedBuilder::ineq(Vector a, Rational rhs) { ineqs_.emplace_back(std::move(a), std::move(rhs)); }
void LiftedBuilder::eq(Vector a, Rational rhs) { eqs_.emplace_back(std::move(a), std::move(rhs)); }

void LiftedBuilder::attach(const Lifted& part, const Matrix& T, const Vector& t0) {
    const Eigen::Index vis = part.visible;
    if (T.rows() != vis || t0.size() != vis) throw MalformedExpression("attach: substitution has the wrong shape");
    const Eigen::Index aux = part.aux();
    const Eigen::Index aux_start = add_vars(aux);
    auto lift = [&](const auto& a, const Rational& rhs, bool equality) {
        Vector row = zeros(nvars_);
        Vector head = a.head(vis).transpose();
        row.head(T.cols()) = T.transpose() * head;
        if (aux > 0) row.segment(aux_start, aux) = a.tail(aux).transpose();
        Rational r = rhs - head.dot(t0);
        if (equality) eq(std::move(row), std::move(r));
        else ineq(std::move(row), std::move(r));
    };
    for (Eigen::Index i = 0; i < part.sys.A.rows(); ++i) lift(part.sys.A.row(i), part.sys.b[i], false);
    for (Eigen::Index i = 0; i < part.sys.E.rows(); ++i) lift(part.sys.E.row(i), part.sys.d[i], true);
}

Matrix LiftedBuilder::pick(Eigen::Index start, Eigen::Index count, const Rational& scale) const {
    Matrix T = Matrix::Zero(count, nvars_);
    for (Eigen::Index i = 0; i < count; ++i) T(i, start + i) = scale;
    return T;
}

Lifted LiftedBuilder::build(Eigen::Index visible) const {
    Polyhedron P(nvars_);
    P.A = Matrix::Zero(static_cast<Eigen::Index>(ineqs_.size()), nvars_);
    P.b = Vector(static_cast<Eigen::Index>(ineqs_.size()));
    for (std::size_t i = 0; i < ineqs_.size(); ++i) {
        const auto& [a, r] = ineqs_[i];
        P.A.row(static_cast<Eigen::Index>(i)).head(a.size()) = a.transpose();
        P.b[static_cast<Eigen::Index>(i)] = r;
    }
    P.E = Matrix::Zero(static_cast<Eigen::Index>(eqs_.size()), nvars_);
    P.d = Vector(static_cast<Eigen::Index>(eqs_.size()));
    for (std::size_t i = 0; i < eqs_.size(); ++i) {
        const auto& [a, r] = eqs_[i];
        P.E.row(static_cast<Eigen::Index>(i)).head(a.size()) = a.transpose();
        P.d[static_cast<Eigen::Index>(i)] = r;
    }
    return {visible, std::move(P)};
}

Lifted with_visible(const Lifted& L, const std::vector<Eigen::Index>& front) {
    const Eigen::Index n = L.sys.n;
    std::vector<Eigen::Index> order = front;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (Eigen::Index i : front) used[static_cast<std::size_t>(i)] = true;
    for (Eigen::Index i = 0; i < n; ++i)
        if (!used[static_cast<std::size_t>(i)]) order.push_back(i);
    LiftedBuilder B;
    B.add_vars(n);
    Matrix T = Matrix::Zero(n, n);
    for (Eigen::Index pos = 0; pos < n; ++pos) T(order[static_cast<std::size_t>(pos)], pos) = 1;
    B.attach(Lifted{n, L.sys}, T, zeros(n));
    return B.build(static_cast<Eigen::Index>(front.size()));
}

Lifted support_epigraph(const Lifted& L, const std::vector<std::optional<Rational>>& fixed) {
    const Eigen::Index k = L.visible;
    if (static_cast<Eigen::Index>(fixed.size()) != k) throw MalformedExpression("support_epigraph: fixed has the wrong length");
    const Polyhedron& P = L.sys;
    const Eigen::Index mA = P.A.rows(), mE = P.E.rows();
    Eigen::Index free = 0;
    for (const auto& f : fixed) free += f ? 0 : 1;
    const Eigen::Index s = free;
    const Eigen::Index lam = s + 1, mu = lam + mA, total = mu + mE;
    LiftedBuilder B;
    B.add_vars(total);
    Eigen::Index next_free = 0;
    // A^T lam + E^T mu = (y, 0) column by column.
    for (Eigen::Index j = 0; j < P.n; ++j) {
        Vector row = zeros(total);
        for (Eigen::Index i = 0; i < mA; ++i) row[lam + i] = P.A(i, j);
        for (Eigen::Index i = 0; i < mE; ++i) row[mu + i] = P.E(i, j);
        Rational rhs = 0;
        if (j < k) {
            if (fixed[static_cast<std::size_t>(j)]) rhs = *fixed[static_cast<std::size_t>(j)];
            else row[next_free++] = -1;
        }
        B.eq(std::move(row), rhs);
    }
    Vector obj = zeros(total);
    for (Eigen::Index i = 0; i < mA; ++i) obj[lam + i] = P.b[i];
    for (Eigen::Index i = 0; i < mE; ++i) obj[mu + i] = P.d[i];
    obj[s] = -1;
    B.ineq(std::move(obj), 0);
    for (Eigen::Index i = 0; i < mA; ++i) B.ineq(-unit_vector(total, lam + i), 0);
    return B.build(s + 1);
}

// ---------------------------------------------------------------- helpers

Vector to_vector(const Point& p, Eigen::Index n) {
    if (p.is_numeric()) {
        if (p.coords.size() != n) throw MalformedExpression("point " + p.key() + " has the wrong dimension");
        return p.coords;
    }
    if (p.is_zero()) return zeros(n);
    throw RegimeError("point " + p.key() + " has no numeric coordinates");
}

std::pair<Matrix, Vector> numeric_map(const MapExpr& m) {
    switch (m->kind) {
        case MapKind::Affine: return {m->M, m->t};
        case MapKind::Identity:
        case MapKind::Negation:
        case MapKind::Shift: {
            if (!m->from.finite_dim()) break;
            const Eigen::Index n = m->from.total_dim();
            Matrix I = identity(n);
            if (m->kind == MapKind::Negation) I = -I;
            Vector t = m->kind == MapKind::Shift ? to_vector(m->shift, n) : zeros(n);
            return {I, t};
        }
        case MapKind::Operator: break;
    }
    throw RegimeError("map " + m->key + " has no numeric form");
}

namespace {

Eigen::Index dim_of(const SpaceTag& s, const std::string& what) {
    if (!s.finite_dim()) throw RegimeError(what + " lives in an infinite-dimensional space");
    return s.total_dim();
}

// Row blocks may have been picked at different variable counts; pad to the wider one.
Matrix stack(const Matrix& a, const Matrix& b) {
    const Eigen::Index w = std::max(a.cols(), b.cols());
    Matrix out = Matrix::Zero(a.rows() + b.rows(), w);
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomLeftCorner(b.rows(), b.cols()) = b;
    return out;
}

}  // namespace

// ---------------------------------------------------------------- realization

Lifted realize(const SetExpr& s) {
    const Eigen::Index n = dim_of(s->space, "set " + s->key);
    LiftedBuilder B;
    B.add_vars(n);
    switch (s->kind) {
        case SetKind::Poly: return {n, s->poly};
        case SetKind::Whole: return {n, Polyhedron(n)};
        case SetKind::Singleton: return {n, Polyhedron::point(to_vector(s->point, n))};
        case SetKind::Catalog:
        case SetKind::Abstract: throw RegimeError("set " + s->key + " has no polyhedral form");
        case SetKind::Neg: B.attach(realize(s->args[0]), B.pick(0, n, -1), zeros(n)); break;
        case SetKind::Scale: {
            Lifted inner = realize(s->args[0]);
            if (s->scalar == 0) return {n, inner.empty() ? Polyhedron::empty(n) : Polyhedron::point(zeros(n))};
            B.attach(inner, B.pick(0, n, Rational(1) / s->scalar), zeros(n));
            break;
        }
        case SetKind::Translate:
            B.attach(realize(s->args[0]), B.pick(0, n), -to_vector(s->point, n));
            break;
        case SetKind::MinkSum: {
            const Eigen::Index u = B.add_vars(n);
            B.attach(realize(s->args[0]), B.pick(u, n), zeros(n));
            B.attach(realize(s->args[1]), B.pick(0, n) - B.pick(u, n), zeros(n));
            break;
        }
        case SetKind::Product: {
            const Eigen::Index na = s->args[0]->space.total_dim();
            B.attach(realize(s->args[0]), B.pick(0, na), zeros(na));
            B.attach(realize(s->args[1]), B.pick(na, n - na), zeros(n - na));
            break;
        }
        case SetKind::Intersection:
            for (const auto& a : s->args) B.attach(realize(a), B.pick(0, n), zeros(n));
            break;
        case SetKind::ConeHull: {
            Polyhedron P = realize(s->args[0]).materialize();
            return {n, is_empty(P) ? Polyhedron::empty(n) : closed_cone_hull(P)};
        }
        case SetKind::HullWithOrigin: {
            Polyhedron P = realize(s->args[0]).materialize();
            return {n, is_empty(P) ? Polyhedron::point(zeros(n)) : closed_hull_with_origin(P)};
        }
        case SetKind::Closure: return realize(s->args[0]);
        case SetKind::PolarCone: {
            Lifted inner = realize(s->args[0]);
            if (inner.empty()) return {n, Polyhedron(n)};
            Lifted sup = support_epigraph(inner, std::vector<std::optional<Rational>>(static_cast<std::size_t>(n)));
            B.attach(sup, stack(B.pick(0, n), Matrix::Zero(1, n)), zeros(n + 1));
            break;
        }
        case SetKind::Image: {
            auto [M, t] = numeric_map(s->map);
            const Eigen::Index k = M.cols();
            const Eigen::Index x = B.add_vars(k);
            for (Eigen::Index i = 0; i < n; ++i) {
                Vector row = zeros(B.vars());
                row[i] = 1;
                row.segment(x, k) = -M.row(i).transpose();
                B.eq(std::move(row), t[i]);
            }
            B.attach(realize(s->args[0]), B.pick(x, k), zeros(k));
            break;
        }
        case SetKind::Preimage: {
            auto [M, t] = numeric_map(s->map);
            B.attach(realize(s->args[0]), M, t);
            break;
        }
        case SetKind::EpiDiff: {
            const Eigen::Index d = n - 1;
            const Eigen::Index x = B.add_vars(d);
            const Eigen::Index tf = B.add_vars(1);
            const Eigen::Index tg = B.add_vars(1);
            B.attach(epigraph(s->fns[0]), stack(B.pick(x, d), B.pick(tf, 1)), zeros(d + 1));
            B.attach(epigraph(s->fns[1]), stack(B.pick(x, d) - B.pick(0, d), B.pick(tg, 1)), zeros(d + 1));
            Vector row = zeros(B.vars());
            row[tf] = 1;
            row[tg] = 1;
            row[d] = -1;
            B.ineq(std::move(row), s->level);
            break;
        }
        case SetKind::ConicExt: {
            const Eigen::Index m = n - 1;
            auto [M, t] = numeric_map(s->map);
            const Eigen::Index k = M.cols();
            const Eigen::Index x = B.add_vars(k);
            const Eigen::Index tf = B.add_vars(1);
            const Eigen::Index c = B.add_vars(m);
            B.attach(epigraph(s->fns[0]), stack(B.pick(x, k), B.pick(tf, 1)), zeros(k + 1));
            B.attach(realize(s->args[0]), B.pick(x, k), zeros(k));
            B.attach(realize(s->args[1]), B.pick(c, m), zeros(m));
            for (Eigen::Index i = 0; i < m; ++i) {
                Vector row = zeros(B.vars());
                row[i] = 1;
                row.segment(x, k) = -M.row(i).transpose();
                row[c + i] = -1;
                B.eq(std::move(row), t[i]);
            }
            Vector row = zeros(B.vars());
            row[tf] = 1;
            row[m] = -1;
            B.ineq(std::move(row), s->level);
            break;
        }
        case SetKind::DomainOf: {
            Lifted epi = epigraph(s->fns[0]);
            return {n, epi.sys};
        }
    }
    return B.build(n);
}

// ---------------------------------------------------------------- epigraphs

Lifted epigraph(const FunctionExpr& f) {
    const Eigen::Index n = dim_of(f->space, "function " + f->key);
    LiftedBuilder B;
    B.add_vars(n + 1);
    auto t_row = [&](Rational coef) {
        Vector r = zeros(B.vars());
        r[n] = coef;
        return r;
    };
    switch (f->kind) {
        case FnKind::Affine: {
            Vector row = t_row(-1);
            row.head(n) = to_vector(f->coeff, n);
            B.ineq(std::move(row), -f->constant);
            break;
        }
        case FnKind::Indicator:
            B.attach(realize(f->set), B.pick(0, n), zeros(n));
            B.ineq(t_row(-1), 0);
            break;
        case FnKind::Norm: {
            if (f->norm == NormKind::L2) throw RegimeError("the Euclidean norm is not polyhedral");
            if (f->norm == NormKind::Linf) {
                for (Eigen::Index i = 0; i < n; ++i)
                    for (int sign : {1, -1}) {
                        Vector row = t_row(-1);
                        row[i] = sign;
                        B.ineq(std::move(row), 0);
                    }
                break;
            }
            const Eigen::Index s = B.add_vars(n);
            Vector total = t_row(-1);
            for (Eigen::Index i = 0; i < n; ++i) {
                for (int sign : {1, -1}) {
                    Vector row = zeros(B.vars());
                    row[i] = sign;
                    row[s + i] = -1;
                    B.ineq(std::move(row), 0);
                }
                total[s + i] = 1;
            }
            B.ineq(std::move(total), 0);
            break;
        }
        case FnKind::SupOfAffine:
            for (const auto& [c, alpha] : f->pieces) {
                Vector row = t_row(-1);
                row.head(n) = c;
                B.ineq(std::move(row), -alpha);
            }
            break;
        case FnKind::Sum:
        case FnKind::InfConv: {
            const bool conv = f->kind == FnKind::InfConv;
            const Eigen::Index u = conv ? B.add_vars(n) : 0;
            const Eigen::Index t1 = B.add_vars(1);
            const Eigen::Index t2 = B.add_vars(1);
            Matrix first = conv ? B.pick(u, n) : B.pick(0, n);
            Matrix second = conv ? Matrix(B.pick(0, n) - B.pick(u, n)) : B.pick(0, n);
            B.attach(epigraph(f->args[0]), stack(first, B.pick(t1, 1)), zeros(n + 1));
            B.attach(epigraph(f->args[1]), stack(second, B.pick(t2, 1)), zeros(n + 1));
            Vector row = zeros(B.vars());
            row[t1] = 1;
            row[t2] = 1;
            row[n] = -1;
            B.ineq(std::move(row), 0);
            break;
        }
        case FnKind::ArgTranslate:
            B.attach(epigraph(f->args[0]), B.pick(0, n + 1), vcat(-to_vector(f->shift, n), zeros(1)));
            break;
        case FnKind::PrecomposeLinear: {
            auto [M, t] = numeric_map(f->map);
            const Eigen::Index m = M.rows();
            Matrix T = Matrix::Zero(m + 1, n + 1);
            T.topLeftCorner(m, n) = M;
            T(m, n) = 1;
            B.attach(epigraph(f->args[0]), T, vcat(t, zeros(1)));
            break;
        }
        case FnKind::PlusConst:
            B.attach(epigraph(f->args[0]), B.pick(0, n + 1), vcat(zeros(n), make_vector({-f->constant})));
            break;
        case FnKind::Conjugate: {
            Lifted inner = epigraph(f->args[0]);
            if (inner.empty()) throw ImproperFunction("conjugate of " + f->args[0]->key + ", which is identically +inf");
            std::vector<std::optional<Rational>> fixed(static_cast<std::size_t>(n + 1));
            fixed.back() = Rational(-1);
            return support_epigraph(inner, fixed);
        }
        case FnKind::Support: {
            Lifted inner = realize(f->set);
            if (inner.empty()) throw ImproperFunction("support function of an empty set");
            return support_epigraph(inner, std::vector<std::optional<Rational>>(static_cast<std::size_t>(n)));
        }
    }
    return B.build(n + 1);
}

// ---------------------------------------------------------------- evaluation

namespace {

ExtendedReal numeric_value(const FunctionExpr& f, const Vector& x) {
    const Eigen::Index n = x.size();
    Lifted epi = epigraph(f);
    Polyhedron P = epi.sys;
    for (Eigen::Index i = 0; i < n; ++i) P.add_eq(unit_vector(P.n, i), x[i]);
    LpOutcome o = optimize(P, unit_vector(P.n, n), Sense::Minimize);
    if (const auto* opt = std::get_if<Optimal>(&o)) return ExtendedReal::finite(opt->value);
    if (is_infeasible(o)) return ExtendedReal::plus_inf();
    return ExtendedReal::minus_inf();
}

bool numeric_point(const Point& p) { return p.is_numeric() || p.is_zero(); }

[[noreturn]] void undecidable(const FunctionExpr& f, const Point& x) {
    throw UndecidableValue("value of " + f->key + " at " + x.key() + " is not decidable symbolically");
}

}  // namespace

ExtendedReal evaluate(const FunctionExpr& f, const Point& x) {
    if (x.is_any()) throw MalformedExpression("cannot evaluate at the wildcard point");
    if (is_numeric(f) && numeric_point(x)) return numeric_value(f, to_vector(x, f->space.total_dim()));
    switch (f->kind) {
        case FnKind::Indicator: {
            FactStatus m = membership(x, f->set).status;
            if (m == FactStatus::Holds) return ExtendedReal::finite(0);
            if (m == FactStatus::Fails) return ExtendedReal::plus_inf();
            undecidable(f, x);
        }
        case FnKind::Affine:
            if (f->coeff.is_zero() || x.is_zero()) return ExtendedReal::finite(f->constant);
            if (f->coeff.is_numeric() && x.is_numeric())
                return ExtendedReal::finite(f->coeff.coords.dot(x.coords) + f->constant);
            undecidable(f, x);
        case FnKind::Norm:
            if (x.is_zero()) return ExtendedReal::finite(0);
            undecidable(f, x);
        case FnKind::Sum: return evaluate(f->args[0], x) + evaluate(f->args[1], x);
        case FnKind::PlusConst: return evaluate(f->args[0], x) + ExtendedReal::finite(f->constant);
        case FnKind::ArgTranslate: return evaluate(f->args[0], x - f->shift);
        case FnKind::PrecomposeLinear: {
            auto y = apply_map(f->map, x);
            if (!y) undecidable(f, x);
            return evaluate(f->args[0], *y);
        }
        case FnKind::Conjugate: {
            FunctionExpr c = conjugate(f->args[0]);
            if (c->kind == FnKind::Conjugate || c->kind == FnKind::Support) undecidable(f, x);
            return evaluate(c, x);
        }
        case FnKind::Support: {
            FunctionExpr c = conjugate(indicator(f->set));
            if (c->kind == FnKind::Conjugate || c->kind == FnKind::Support) undecidable(f, x);
            return evaluate(c, x);
        }
        default: undecidable(f, x);
    }
}

// ---------------------------------------------------------------- conjugation

namespace {

// x -> h(x - c), folding indicators into a translated set.
FunctionExpr shifted(const FunctionExpr& h, const Point& c) {
    if (c.is_zero()) return h;
    if (h->kind == FnKind::Indicator) return indicator(normalize(translate_set(h->set, c)));
    return arg_translate(h, c);
}

FunctionExpr plus(const FunctionExpr& h, const Rational& k) { return k == 0 ? h : plus_const(h, k); }

Polyhedron l1_ball(Eigen::Index n) {
    Polyhedron P(n);
    const unsigned long count = 1ul << n;
    for (unsigned long mask = 0; mask < count; ++mask) {
        Vector a(n);
        for (Eigen::Index i = 0; i < n; ++i) a[i] = (mask >> i) & 1u ? -1 : 1;
        P.add_ineq(a, 1);
    }
    return P;
}

FunctionExpr conjugate_indicator(const FunctionExpr& f) {
    const SetExpr& U = f->set;
    if (is_numeric(U)) return support_fn(U);
    SetExpr u = normalize(U);
    const SpaceTag& X = u->space;
    if (u->kind == SetKind::Singleton) return affine_fn(u->point, 0, X);
    if (u->kind == SetKind::Whole) return indicator(singleton(Point::zero(), X));
    if (is_convex_cone(u) == FactStatus::Holds) return indicator(normalize(polar_cone(u)));
    if (u->kind == SetKind::Translate && is_convex_cone(u->args[0]) == FactStatus::Holds)
        return sum_fn(indicator(normalize(polar_cone(u->args[0]))), affine_fn(u->point, 0, X));
    if (u->kind == SetKind::Catalog && u->atom == CatalogId::DualUnitBall) return norm_fn(NormKind::L2, X);
    return support_fn(u);
}

}  // namespace

FunctionExpr conjugate(const FunctionExpr& f, bool qualified) {
    if (f->proper.status == FactStatus::Fails) throw ImproperFunction(f->key + " is not proper");
    const SpaceTag& X = f->space;
    switch (f->kind) {
        case FnKind::Affine: return plus(indicator(singleton(f->coeff, X)), -f->constant);
        case FnKind::Indicator: return conjugate_indicator(f);
        case FnKind::Norm:
            if (X.finite_dim()) {
                const Eigen::Index n = X.total_dim();
                if (f->norm == NormKind::L1) {
                    Vector one = Vector::Constant(n, Rational(1));
                    return indicator(poly_set(Polyhedron::box(-one, one)));
                }
                if (f->norm == NormKind::Linf) return indicator(poly_set(l1_ball(n)));
                return conjugate_of(f);
            }
            return indicator(catalog_set(CatalogId::DualUnitBall, X));
        case FnKind::SupOfAffine:
        case FnKind::PrecomposeLinear: return conjugate_of(f);
        case FnKind::Sum: {
            const FunctionExpr& a = f->args[0];
            const FunctionExpr& b = f->args[1];
            for (int side = 0; side < 2; ++side) {
                const FunctionExpr& lin = side == 0 ? a : b;
                const FunctionExpr& rest = side == 0 ? b : a;
                if (lin->kind == FnKind::Affine)
                    return plus(shifted(conjugate(rest, qualified), lin->coeff), -lin->constant);
            }
            if (is_numeric(f)) return conjugate_of(f);
            const bool exact = qualified || finite_everywhere(a) || finite_everywhere(b);
            FunctionExpr ca = conjugate(a), cb = conjugate(b);
            if (exact && ca->kind == FnKind::Indicator && cb->kind == FnKind::Indicator)
                return indicator(normalize(mink_sum(ca->set, cb->set)));
            return inf_conv(ca, cb, exact);
        }
        case FnKind::InfConv: return sum_fn(conjugate(f->args[0]), conjugate(f->args[1]));
        case FnKind::ArgTranslate: {
            FunctionExpr c = conjugate(f->args[0]);
            if (f->shift.is_zero()) return c;
            return sum_fn(c, affine_fn(f->shift, 0, X));
        }
        case FnKind::PlusConst: return plus(conjugate(f->args[0]), -f->constant);
        case FnKind::Conjugate: {
            const FunctionExpr& h = f->args[0];
            if (h->proper.status == FactStatus::Holds && h->convex.status == FactStatus::Holds &&
                h->lsc.status == FactStatus::Holds)
                return h;
            return conjugate_of(f);
        }
        case FnKind::Support: return indicator(normalize(closure_set(f->set)));
    }
    return conjugate_of(f);
}

// ---------------------------------------------------------------- domains

namespace {

SetExpr raw_domain(const FunctionExpr& f) {
    switch (f->kind) {
        case FnKind::Affine:
        case FnKind::Norm:
        case FnKind::SupOfAffine: return whole_set(f->space);
        case FnKind::Indicator: return f->set;
        case FnKind::Sum: return intersect_set(raw_domain(f->args[0]), raw_domain(f->args[1]));
        case FnKind::InfConv: return mink_sum(raw_domain(f->args[0]), raw_domain(f->args[1]));
        case FnKind::ArgTranslate: return translate_set(raw_domain(f->args[0]), f->shift);
        case FnKind::PrecomposeLinear: return preimage_set(f->map, raw_domain(f->args[0]));
        case FnKind::PlusConst: return raw_domain(f->args[0]);
        case FnKind::Conjugate:
        case FnKind::Support: {
            if (is_numeric(f)) return domain_of(f);
            FunctionExpr c = f->kind == FnKind::Conjugate ? conjugate(f->args[0]) : conjugate(indicator(f->set));
            if (c->kind == FnKind::Conjugate || c->kind == FnKind::Support) return domain_of(f);
            return raw_domain(c);
        }
    }
    return domain_of(f);
}

}  // namespace

SetExpr domain(const FunctionExpr& f) { return normalize(raw_domain(f)); }
SetExpr domain_expression(const FunctionExpr& f) { return raw_domain(f); }

EpiDiff epi_diff_set(const FunctionExpr& f, const FunctionExpr& g, const Rational& level) {
    EpiDiff out{f, g, level, nullptr};
    if (f->kind == FnKind::Indicator && g->kind == FnKind::Indicator) {
        Polyhedron ray(1);
        ray.add_ineq(make_vector({-1}), level);
        out.set = normalize(product_set(mink_diff(f->set, g->set), poly_set(ray)));
    } else {
        out.set = normalize(epi_diff_node(f, g, level));
    }
    return out;
}

// ---------------------------------------------------------------- checks and bounds

bool biconjugate_check(const FunctionExpr& f, const std::vector<Vector>& xs, const std::vector<Vector>& ys) {
    FunctionExpr fs = conjugate_of(f);
    FunctionExpr fss = conjugate_of(fs);
    for (const auto& x : xs)
        if (!(evaluate(fss, Point::numeric(x)) == evaluate(f, Point::numeric(x)))) return false;
    for (const auto& x : xs) {
        ExtendedReal fx = evaluate(f, Point::numeric(x));
        for (const auto& y : ys) {
            ExtendedReal lhs = fx + evaluate(fs, Point::numeric(y));
            if (lhs < ExtendedReal::finite(x.dot(y))) return false;
        }
    }
    return true;
}

FactStatus numeric_proper(const FunctionExpr& f) {
    Lifted epi = epigraph(f);
    auto p = feasible_point(epi.sys);
    if (!p) return FactStatus::Fails;
    const Eigen::Index n = f->space.total_dim();
    ExtendedReal v = evaluate(f, Point::numeric(p->head(n)));
    return v.kind == ExtendedReal::Kind::MinusInf ? FactStatus::Fails : FactStatus::Holds;
}

namespace {

bool lp_plus_like(const SetExpr& s) {
    return s->kind == SetKind::Catalog &&
           (s->atom == CatalogId::LpPlus || s->atom == CatalogId::LpPlusUncountable);
}

}  // namespace

std::optional<Rational> lower_bound(const FunctionExpr& f) {
    if (is_numeric(f)) {
        Lifted epi = epigraph(f);
        LpOutcome o = optimize(epi.sys, unit_vector(epi.sys.n, f->space.total_dim()), Sense::Minimize);
        if (const auto* opt = std::get_if<Optimal>(&o)) return opt->value;
        return std::nullopt;
    }
    auto add = [](std::optional<Rational> a, std::optional<Rational> b) -> std::optional<Rational> {
        if (!a || !b) return std::nullopt;
        return *a + *b;
    };
    switch (f->kind) {
        case FnKind::Indicator:
        case FnKind::Norm: return Rational(0);
        case FnKind::Affine:
            if (f->coeff.is_zero()) return f->constant;
            return std::nullopt;
        case FnKind::PlusConst: return add(lower_bound(f->args[0]), f->constant);
        case FnKind::ArgTranslate: return lower_bound(f->args[0]);
        case FnKind::InfConv: return add(lower_bound(f->args[0]), lower_bound(f->args[1]));
        case FnKind::Sum: {
            // <c, x> + alpha on a cone K is bounded below by alpha when c lies in the dual cone.
            for (int side = 0; side < 2; ++side) {
                const FunctionExpr& lin = f->args[side];
                const FunctionExpr& ind = f->args[1 - side];
                if (lin->kind != FnKind::Affine || ind->kind != FnKind::Indicator) continue;
                SetExpr K = normalize(ind->set);
                if (lp_plus_like(K) && lin->coeff.has_tag("nonneg")) return lin->constant;
            }
            return add(lower_bound(f->args[0]), lower_bound(f->args[1]));
        }
        case FnKind::Conjugate: {
            // inf h* = -h**(0) >= -h(0)
            try {
                ExtendedReal h0 = evaluate(f->args[0], Point::zero());
                if (h0.is_finite()) return -h0.value;
            } catch (const UndecidableValue&) {
            }
            return std::nullopt;
        }
        case FnKind::Support:
            if (membership(Point::zero(), f->set).status == FactStatus::Holds) return Rational(0);
            return std::nullopt;
        default: return std::nullopt;
    }
}

}  // namespace dualdiag
