#include "dualdiag/duality.hpp"

namespace dualdiag {

std::string family_name(Family f) {
    switch (f) {
        case Family::Perturbation: return "perturbation";
        case Family::Fenchel: return "fenchel";
        case Family::Lagrange: return "lagrange";
    }
    return "?";
}

Family parse_family(const std::string& s) {
    if (s == "perturbation") return Family::Perturbation;
    if (s == "fenchel") return Family::Fenchel;
    if (s == "lagrange") return Family::Lagrange;
    throw MalformedExpression("unknown problem family '" + s + "'");
}

bool Instance::numeric() const {
    switch (family) {
        case Family::Perturbation: return phi && is_numeric(phi);
        case Family::Fenchel: return is_numeric(f) && is_numeric(g) && (!A || is_numeric(A));
        case Family::Lagrange: return is_numeric(f) && is_numeric(S) && is_numeric(gmap) && is_numeric(C);
    }
    return false;
}

Instance fenchel_instance(std::string id, FunctionExpr f, FunctionExpr g, MapExpr A) {
    Instance inst;
    inst.id = std::move(id);
    inst.family = Family::Fenchel;
    inst.X = f->space;
    inst.Y = g->space;
    if (A) {
        if (!(A->from == f->space) || !(A->to == g->space))
            throw MalformedExpression("operator " + A->key + " does not map dom f's space to g's space");
    } else if (!(f->space == g->space)) {
        throw MalformedExpression("f and g live in different spaces and no operator was given");
    }
    inst.f = std::move(f);
    inst.g = std::move(g);
    inst.A = std::move(A);
    return inst;
}

Instance lagrange_instance(std::string id, FunctionExpr f, SetExpr S, MapExpr g, SetExpr C) {
    Instance inst;
    inst.id = std::move(id);
    inst.family = Family::Lagrange;
    if (!(S->space == f->space) || !(g->from == f->space) || !(C->space == g->to))
        throw MalformedExpression("Lagrange data live in mismatched spaces");
    inst.X = f->space;
    inst.Y = C->space;
    inst.f = std::move(f);
    inst.S = std::move(S);
    inst.gmap = std::move(g);
    inst.C = std::move(C);
    return inst;
}

Instance perturbation_instance(std::string id, FunctionExpr phi, Eigen::Index x_dim) {
    if (!phi->space.finite_dim() || x_dim < 0 || x_dim > phi->space.total_dim())
        throw MalformedExpression("perturbation function needs a finite-dimensional space split as X x Y");
    Instance inst;
    inst.id = std::move(id);
    inst.family = Family::Perturbation;
    inst.X = SpaceTag::finite(x_dim);
    inst.Y = SpaceTag::finite(phi->space.total_dim() - x_dim);
    inst.phi = std::move(phi);
    return inst;
}

namespace {

Eigen::Index xdim(const Instance& inst) {
    if (!inst.X.finite_dim()) throw RegimeError("instance " + inst.id + " is not finite-dimensional");
    return inst.X.total_dim();
}

Eigen::Index ydim(const Instance& inst) {
    if (!inst.Y.finite_dim()) throw RegimeError("instance " + inst.id + " is not finite-dimensional");
    return inst.Y.total_dim();
}

void require_numeric(const Instance& inst, const std::string& what) {
    if (!inst.numeric()) throw RegimeError(what + " of " + inst.id + " needs polyhedral data");
}

Matrix operator_matrix(const Instance& inst) {
    if (!inst.A) return identity(xdim(inst));
    auto [M, t] = numeric_map(inst.A);
    if (!is_zero(t)) throw MalformedExpression("the Fenchel operator must be linear, got offset " + to_string(t));
    return M;
}

// [left right] side by side.
Matrix beside(const Matrix& left, const Matrix& right) {
    Matrix out(left.rows(), left.cols() + right.cols());
    out << left, right;
    return out;
}

// Epigraph of Phi, visible (x, y, t).
Lifted phi_epigraph(const Instance& inst) { return epigraph(perturbation_function(inst)); }

}  // namespace

FunctionExpr perturbation_function(const Instance& inst) {
    require_numeric(inst, "the perturbation function");
    const Eigen::Index n = xdim(inst), m = ydim(inst);
    if (inst.family == Family::Perturbation) return inst.phi;
    const Matrix take_x = beside(identity(n), Matrix::Zero(n, m));
    MapExpr to_x = affine_map(take_x, zeros(n));
    if (inst.family == Family::Fenchel) {
        // g(Ax - y)
        MapExpr inner = affine_map(beside(operator_matrix(inst), -identity(m)), zeros(m));
        return sum_fn(precompose(to_x, inst.f), precompose(inner, inst.g));
    }
    // indicator of z - g(x) in C
    auto [M, t] = numeric_map(inst.gmap);
    MapExpr slack = affine_map(beside(-M, identity(m)), -t);
    return sum_fn(precompose(to_x, sum_fn(inst.f, indicator(inst.S))), precompose(slack, indicator(inst.C)));
}

Instance to_perturbation(const Instance& inst) {
    Instance out = perturbation_instance(inst.id, perturbation_function(inst), xdim(inst));
    out.primal = inst.primal;
    out.dual = inst.dual;
    out.facts = inst.facts;
    out.flags = inst.flags;
    return out;
}

namespace {

// {y : exists x, t with (x, y, t) in epi Phi}
Lifted lifted_projected_domain(const Instance& inst) {
    const Eigen::Index n = xdim(inst), m = ydim(inst);
    LiftedBuilder B;
    B.add_vars(m);
    const Eigen::Index x = B.add_vars(n);
    const Eigen::Index t = B.add_vars(1);
    Matrix T(n + m + 1, B.vars());
    T << B.pick(x, n), B.pick(0, m), B.pick(t, 1);
    B.attach(phi_epigraph(inst), T, zeros(n + m + 1));
    return B.build(m);
}

// {(y, r) : exists x with Phi(x, y) <= r + v}
Lifted lifted_value_set(const Instance& inst, const Rational& v) {
    const Eigen::Index n = xdim(inst), m = ydim(inst);
    LiftedBuilder B;
    B.add_vars(m + 1);
    const Eigen::Index x = B.add_vars(n);
    Matrix T(n + m + 1, B.vars());
    T << B.pick(x, n), B.pick(0, m), B.pick(m, 1);
    Vector t0 = zeros(n + m + 1);
    t0[n + m] = v;
    B.attach(phi_epigraph(inst), T, t0);
    return B.build(m + 1);
}

}  // namespace

SetExpr projected_domain(const Instance& inst) {
    if (inst.numeric()) return poly_set(lifted_projected_domain(inst).materialize());
    switch (inst.family) {
        case Family::Fenchel: {
            SetExpr df = domain_expression(inst.f);
            if (inst.A) df = image_set(inst.A, df);
            return normalize(mink_diff(df, domain_expression(inst.g)));
        }
        case Family::Lagrange:
            return normalize(
                mink_sum(image_set(inst.gmap, intersect_set(domain_expression(inst.f), inst.S)), inst.C));
        case Family::Perturbation: break;
    }
    throw RegimeError("projected domain of " + inst.id + " needs polyhedral data");
}

SetExpr value_set(const Instance& inst, const Rational& v) {
    if (inst.numeric()) return poly_set(lifted_value_set(inst, v).materialize());
    switch (inst.family) {
        case Family::Fenchel:
            if (inst.A) break;
            return epi_diff_set(inst.f, inst.g, v).set;
        case Family::Lagrange: return normalize(conic_ext_node(inst.f, inst.S, inst.gmap, inst.C, v));
        case Family::Perturbation: break;
    }
    throw RegimeError("the epigraph-type set of " + inst.id + " has no symbolic form here");
}

PrimalResult solve_primal(const Instance& inst) {
    require_numeric(inst, "the primal value");
    const Eigen::Index n = xdim(inst), m = ydim(inst);
    Lifted epi = phi_epigraph(inst);
    Polyhedron P = epi.sys;
    for (Eigen::Index j = 0; j < m; ++j) P.add_eq(unit_vector(P.n, n + j), 0);
    LpOutcome o = optimize(P, unit_vector(P.n, n + m), Sense::Minimize);
    PrimalResult r;
    if (const auto* opt = std::get_if<Optimal>(&o)) {
        r.value = ExtendedReal::finite(opt->value);
        r.point = Vector(opt->point.head(n));
        r.attained = true;
    } else if (is_infeasible(o)) {
        r.value = ExtendedReal::plus_inf();
    } else {
        r.value = ExtendedReal::minus_inf();
    }
    return r;
}

namespace {

// The LP minimized s over epi of a conjugate; the dual value is -s.
DualResult read_dual(const LpOutcome& o, bool negate_point, Eigen::Index m) {
    DualResult r;
    if (const auto* opt = std::get_if<Optimal>(&o)) {
        r.value = ExtendedReal::finite(-opt->value);
        Vector y = opt->point.head(m);
        r.point = negate_point ? Vector(-y) : y;
        r.attained = true;
    } else if (is_infeasible(o)) {
        r.value = ExtendedReal::minus_inf();
    } else {
        r.value = ExtendedReal::plus_inf();
    }
    return r;
}

}  // namespace

DualResult solve_dual_via_perturbation(const Instance& inst) {
    require_numeric(inst, "the dual value");
    const Eigen::Index n = xdim(inst), m = ydim(inst);
    Lifted epi = phi_epigraph(inst);
    if (epi.empty()) return {ExtendedReal::plus_inf(), std::nullopt, false};
    // epi Phi*(0, .) with visible (y*, s); the dual maximizes -Phi*(0, y*).
    std::vector<std::optional<Rational>> fixed(static_cast<std::size_t>(n + m + 1));
    for (Eigen::Index i = 0; i < n; ++i) fixed[static_cast<std::size_t>(i)] = Rational(0);
    fixed.back() = Rational(-1);
    Lifted conj = support_epigraph(epi, fixed);
    LpOutcome o = optimize(conj.sys, unit_vector(conj.sys.n, m), Sense::Minimize);
    return read_dual(o, inst.family != Family::Perturbation, m);
}

DualResult solve_dual(const Instance& inst) {
    require_numeric(inst, "the dual value");
    if (inst.family != Family::Fenchel) return solve_dual_via_perturbation(inst);
    // sup over p of -f*(-A^T p) - g*(p)
    const Matrix M = operator_matrix(inst);
    const Eigen::Index n = xdim(inst), m = ydim(inst);
    if (epigraph(inst.f).empty() || epigraph(inst.g).empty()) return {ExtendedReal::plus_inf(), std::nullopt, false};
    LiftedBuilder B;
    B.add_vars(m);
    const Eigen::Index sf = B.add_vars(1);
    const Eigen::Index sg = B.add_vars(1);
    Matrix Tf = Matrix::Zero(n + 1, B.vars());
    Tf.topLeftCorner(n, m) = -M.transpose();
    Tf(n, sf) = 1;
    B.attach(epigraph(conjugate_of(inst.f)), Tf, zeros(n + 1));
    Matrix Tg = Matrix::Zero(m + 1, B.vars());
    Tg.topLeftCorner(m, m) = identity(m);
    Tg(m, sg) = 1;
    B.attach(epigraph(conjugate_of(inst.g)), Tg, zeros(m + 1));
    Lifted L = B.build(m + 2);
    Vector obj = zeros(L.sys.n);
    obj[sf] = 1;
    obj[sg] = 1;
    return read_dual(optimize(L.sys, obj, Sense::Minimize), false, m);
}

SeparationResult recover_dual_via_separation(const Instance& inst, const Rational& primal_value) {
    require_numeric(inst, "dual recovery");
    const Eigen::Index m = ydim(inst);
    Lifted E = lifted_value_set(inst, primal_value);
    if (E.empty()) throw MalformedExpression("the value set is empty; the primal value is not attained");
    // Polar cone of E inside the box [-1, 1]^(m+1): variables (y*, r*).
    LiftedBuilder B;
    B.add_vars(m + 1);
    Matrix T = Matrix::Zero(m + 2, m + 1);
    T.topLeftCorner(m + 1, m + 1) = identity(m + 1);
    B.attach(support_epigraph(E, std::vector<std::optional<Rational>>(static_cast<std::size_t>(m + 1))), T,
             zeros(m + 2));
    const Eigen::Index u = B.add_vars(m);
    for (Eigen::Index j = 0; j <= m; ++j) {
        B.ineq(unit_vector(B.vars(), j), 1);
        B.ineq(-unit_vector(B.vars(), j), 1);
    }
    for (Eigen::Index j = 0; j < m; ++j) {
        Vector up = unit_vector(B.vars(), j) - unit_vector(B.vars(), u + j);
        B.ineq(up, 0);
        Vector down = -unit_vector(B.vars(), j) - unit_vector(B.vars(), u + j);
        B.ineq(down, 0);
    }
    Polyhedron P = B.build(m + 1).sys;
    LpOutcome first = optimize(P, unit_vector(P.n, m), Sense::Minimize);
    const auto* opt = std::get_if<Optimal>(&first);
    if (!opt) throw std::logic_error("separation LP over a bounded box did not reach an optimum");
    if (opt->value == 0) {
        // No functional with negative r* separates; see whether any nonzero one does.
        Polyhedron flat = P;
        flat.add_eq(unit_vector(P.n, m), 0);
        for (Eigen::Index j = 0; j < m; ++j)
            for (Sense sense : {Sense::Minimize, Sense::Maximize}) {
                LpOutcome o = optimize(flat, unit_vector(P.n, j), sense);
                const auto* e = std::get_if<Optimal>(&o);
                if (e && e->value != 0)
                    throw DegenerateSeparation("only separators with zero epigraph component exist; "
                                               "(0, 0) sits on the boundary of E without a dual solution");
            }
        throw QriMembership("(0, 0) lies in the quasi-relative interior of E; no separating functional exists");
    }
    // Among optimal separators take the one with the smallest l1 norm.
    P.add_eq(unit_vector(P.n, m), opt->value);
    Vector l1 = zeros(P.n);
    for (Eigen::Index j = 0; j < m; ++j) l1[u + j] = 1;
    LpOutcome second = optimize(P, l1, Sense::Minimize);
    const auto* best = std::get_if<Optimal>(&second);
    if (!best) throw std::logic_error("l1 tie-break LP failed");
    SeparationResult r;
    r.separator = best->point.head(m);
    r.separator_r = opt->value;
    Vector phi_point = -r.separator / r.separator_r;
    r.dual_point = inst.family == Family::Perturbation ? phi_point : Vector(-phi_point);
    // Check -Phi*(0, y) reproduces the primal value.
    Vector at = vcat(zeros(xdim(inst)), phi_point);
    ExtendedReal conj = evaluate(conjugate_of(perturbation_function(inst)), Point::numeric(at));
    if (!conj.is_finite() || -conj.value != primal_value)
        throw std::logic_error("recovered dual point has value " + (-conj).str() + ", expected " +
                               to_string(primal_value));
    r.dual_value = primal_value;
    return r;
}

FunctionExpr scalarize(const Vector& w, const MapExpr& g, const SetExpr& C) {
    auto [M, t] = numeric_map(g);
    if (w.size() != M.rows()) throw MalformedExpression("multiplier has the wrong dimension");
    // w must be nonnegative on C, i.e. lie in its dual cone.
    Lifted cone = realize(C);
    LpOutcome o = optimize(cone.sys, vcat(w, zeros(cone.aux())), Sense::Minimize);
    const auto* opt = std::get_if<Optimal>(&o);
    if (!opt || opt->value < 0)
        throw MalformedExpression("multiplier " + to_string(w) + " is not in the dual cone of " + C->key);
    Vector slope = M.transpose() * w;
    return affine_fn(Point::numeric(slope), w.dot(t), g->from);
}

}  // namespace dualdiag
