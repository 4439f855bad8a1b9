#include "dualdiag/conditions.hpp"

#include <algorithm>
#include <functional>

namespace dualdiag {

namespace {

FactStatus negate_status(FactStatus s) {
    switch (s) {
        case FactStatus::Holds: return FactStatus::Fails;
        case FactStatus::Fails: return FactStatus::Holds;
        default: return FactStatus::Unknown;
    }
}

ProvenanceStep step(std::string rule, std::string citation, std::string conclusion, FactStatus s,
                    std::string detail = {}) {
    ProvenanceStep p;
    p.rule = std::move(rule);
    p.citation = std::move(citation);
    p.conclusion = std::move(conclusion);
    p.status = s;
    p.detail = std::move(detail);
    return p;
}

Clause make_clause(std::string description, FactStatus s, std::string rule, std::string citation,
                   std::string detail = {}) {
    Clause c;
    c.description = std::move(description);
    c.status = s;
    c.provenance.push_back(step(std::move(rule), std::move(citation), c.description, s, std::move(detail)));
    return c;
}

Clause from_inference(std::string description, const Inference& inf, bool negated = false) {
    Clause c;
    c.description = std::move(description);
    c.status = negated ? negate_status(inf.status) : inf.status;
    c.provenance = inf.provenance;
    if (negated)
        c.provenance.push_back(step("negation", "complement of the inferred membership", c.description, c.status));
    return c;
}

// ------------------------------------------------------------ numeric helpers

// Some x in the projection of P has M x + t in int Q (ri Q when `relative`).
// One LP maximizing a common slack s <= 1 on the strict rows of Q.
FactStatus meets_interior(const Lifted& P, const Matrix& M, const Vector& t, const Polyhedron& Q, bool relative) {
    if (P.empty() || is_empty(Q)) return FactStatus::Fails;
    const Eigen::Index n = P.visible, k = Q.n;
    if (k == 0) return FactStatus::Holds;
    std::vector<bool> implicit = implicit_equalities(Q);
    const bool flat = Q.num_eqs() > 0 || std::any_of(implicit.begin(), implicit.end(), [](bool b) { return b; });
    if (!relative && flat) return FactStatus::Fails;

    LiftedBuilder B;
    B.add_vars(n);
    B.attach(P, B.pick(0, n), zeros(n));
    const Eigen::Index s = B.add_vars(1);
    const Eigen::Index nv = B.vars();
    auto row = [&](const Vector& a) {
        Vector r = zeros(nv);
        r.head(n) = M.transpose() * a;
        return r;
    };
    for (Eigen::Index i = 0; i < Q.num_eqs(); ++i) {
        Vector e = Q.E.row(i).transpose();
        B.eq(row(e), Q.d[i] - e.dot(t));
    }
    for (Eigen::Index i = 0; i < Q.num_ineqs(); ++i) {
        Vector a = Q.A.row(i).transpose();
        Vector r = row(a);
        if (implicit[static_cast<std::size_t>(i)]) {
            B.eq(r, Q.b[i] - a.dot(t));
        } else {
            r[s] = 1;
            B.ineq(r, Q.b[i] - a.dot(t));
        }
    }
    Vector cap = zeros(nv);
    cap[s] = 1;
    B.ineq(cap, 1);
    Lifted sys = B.build(nv);
    LpOutcome o = optimize(sys.sys, cap, Sense::Maximize);
    if (!is_optimal(o)) return FactStatus::Fails;
    return std::get<Optimal>(o).value > 0 ? FactStatus::Holds : FactStatus::Fails;
}

Lifted domain_lifted(const FunctionExpr& f) {
    Lifted epi = epigraph(f);
    return Lifted{epi.visible - 1, epi.sys};
}

Lifted intersect_lifted(const Lifted& a, const Lifted& b) {
    LiftedBuilder B;
    const Eigen::Index n = a.visible;
    B.add_vars(n);
    B.attach(a, B.pick(0, n), zeros(n));
    B.attach(b, B.pick(0, n), zeros(n));
    return B.build(n);
}

// Some x' with 0 interior to the slice {y : (x', y) in dom Phi}: the cross
// polytope of radius s around 0 fits in one slice.
FactStatus slice_interior(const Lifted& dom, Eigen::Index n, Eigen::Index m) {
    if (dom.empty()) return FactStatus::Fails;
    if (m == 0) return FactStatus::Holds;
    LiftedBuilder B;
    B.add_vars(n + 1);
    const Eigen::Index s = n;
    for (Eigen::Index j = 0; j < 2 * m; ++j) {
        Matrix T = Matrix::Zero(n + m, n + 1);
        T.topLeftCorner(n, n) = identity(n);
        T(n + j / 2, s) = (j % 2 == 0) ? Rational(1) : Rational(-1);
        B.attach(dom, T, zeros(n + m));
    }
    const Eigen::Index nv = B.vars();
    Vector cap = zeros(nv);
    cap[s] = 1;
    B.ineq(cap, 1);
    LpOutcome o = optimize(B.build(nv).sys, cap, Sense::Maximize);
    if (!is_optimal(o)) return FactStatus::Fails;
    return std::get<Optimal>(o).value > 0 ? FactStatus::Holds : FactStatus::Fails;
}

// ------------------------------------------------------------ symbolic helpers

void collect_points(const SetExpr& s, std::vector<Point>& out);
void collect_points(const FunctionExpr& f, std::vector<Point>& out);

void collect_points(const MapExpr& m, std::vector<Point>& out) {
    if (m && m->kind == MapKind::Shift) out.push_back(m->shift);
}

void collect_points(const SetExpr& s, std::vector<Point>& out) {
    if (!s) return;
    if (s->kind == SetKind::Singleton || s->kind == SetKind::Translate) out.push_back(s->point);
    for (const auto& a : s->args) collect_points(a, out);
    for (const auto& f : s->fns) collect_points(f, out);
    collect_points(s->map, out);
}

void collect_points(const FunctionExpr& f, std::vector<Point>& out) {
    if (!f) return;
    if (f->kind == FnKind::Affine) out.push_back(f->coeff);
    if (f->kind == FnKind::ArgTranslate) out.push_back(f->shift);
    collect_points(f->set, out);
    for (const auto& a : f->args) collect_points(a, out);
    collect_points(f->map, out);
}

// Zero, every point named in the instance and in its facts, their halves and negatives.
std::vector<Point> witness_candidates(const Instance& inst) {
    std::vector<Point> base{Point::zero()};
    collect_points(inst.f, base);
    collect_points(inst.g, base);
    collect_points(inst.S, base);
    collect_points(inst.C, base);
    collect_points(inst.A, base);
    collect_points(inst.gmap, base);
    for (const auto& fact : inst.facts)
        if (!fact.point.is_any()) base.push_back(fact.point);
    std::vector<Point> out;
    auto add = [&](const Point& p) {
        if (p.is_any() || p.is_numeric()) return;
        if (std::none_of(out.begin(), out.end(), [&](const Point& q) { return q == p; })) out.push_back(p);
    };
    for (const auto& p : base) {
        add(p);
        add(p.scaled(Rational(1, 2)));
        add(-p);
    }
    return out;
}

// ------------------------------------------------------------ context

struct Context {
    const Instance& inst;
    const ValueReport& values;
    InferenceOptions opt;
    Hypotheses hyps;
    bool numeric;

    Context(const Instance& i, const ValueReport& v) : inst(i), values(v), hyps(hypotheses(i)), numeric(i.numeric()) {
        opt.facts = i.facts;
    }

    // Numeric sets are materialized once and shared by every condition.
    SetExpr D() const {
        if (!D_) {
            D_ = projected_domain(inst);
            if (numeric && D_->kind != SetKind::Poly) D_ = poly_set(realize(D_).materialize());
        }
        return D_;
    }
    SetExpr D_minus_D() const {
        if (!DD_) {
            SetExpr d = D();
            DD_ = numeric ? poly_set(minkowski_sum(d->poly, negate(d->poly))) : normalize(mink_diff(d, d));
        }
        return DD_;
    }
    // Numeric value set at the primal value, and its closed hull with the origin.
    const Polyhedron& E_numeric(const Rational& level) const {
        if (!E_) E_ = value_set(inst, level)->poly;
        return *E_;
    }
    const Polyhedron& hull_E_numeric(const Rational& level) const {
        if (!hullE_) hullE_ = closed_hull_with_origin(E_numeric(level));
        return *hullE_;
    }
    SetExpr dom_f() const { return domain(inst.f); }
    SetExpr dom_g() const { return domain(inst.g); }

    Inference infer_zero(Notion k, const SetExpr& s) const { return infer(k, Point::zero(), s, opt); }

    mutable std::optional<Clause> exclusion;

private:
    mutable SetExpr D_, DD_;
    mutable std::optional<Polyhedron> E_, hullE_;
};

std::string lsc_key(Family f) { return f == Family::Lagrange ? "closed-data" : "lsc"; }

Clause hypothesis_clause(const Context& c, const std::string& key, const std::string& description) {
    auto it = c.hyps.find(key);
    FactStatus s = it == c.hyps.end() ? FactStatus::Unknown : it->second;
    return make_clause(description, s, "hypothesis", "standing assumption of the condition", key);
}

std::vector<Clause> standing_hypotheses(const Context& c) {
    std::vector<Clause> out;
    switch (c.inst.family) {
        case Family::Perturbation:
            out.push_back(hypothesis_clause(c, "frechet", "X and Y are Frechet spaces"));
            out.push_back(hypothesis_clause(c, "lsc", "Phi is lower semicontinuous"));
            break;
        case Family::Fenchel:
            out.push_back(hypothesis_clause(c, "frechet", "X and Y are Frechet spaces"));
            out.push_back(hypothesis_clause(c, "lsc", "f and g are lower semicontinuous"));
            break;
        case Family::Lagrange:
            out.push_back(hypothesis_clause(c, "frechet", "X and Z are Frechet spaces"));
            out.push_back(hypothesis_clause(c, "S closed", "S is closed"));
            out.push_back(hypothesis_clause(c, "f lsc", "f is lower semicontinuous"));
            out.push_back(hypothesis_clause(c, "g epi-closed", "g is C-epi closed"));
            break;
    }
    return out;
}

// aff(D) is a closed linear subspace (D contains the origin).
Clause affine_hull_clause(const Context& c) {
    const std::string desc = "aff(D) is a closed linear subspace";
    auto flag = c.inst.flags.find("aff(D) closed");
    if (flag != c.inst.flags.end())
        return make_clause(desc, flag->second.status, "declared", flag->second.reason);
    SetExpr D = c.D();
    if (c.numeric || D->kind == SetKind::Poly)
        return make_clause(desc, FactStatus::Holds, "finite-dimensional",
                           "affine subspaces of a finite-dimensional space are closed");
    if (D->kind == SetKind::Whole)
        return make_clause(desc, FactStatus::Holds, "whole-space", "D is the whole space");
    if (normalize(mink_diff(D, D))->kind == SetKind::Whole)
        return make_clause(desc, FactStatus::Holds, "generating-set",
                           "D - D is the whole space, so the affine hull of D is too");
    if (is_subspace(D) == FactStatus::Holds) {
        FactStatus closed = is_closed(D);
        if (closed != FactStatus::Unknown)
            return make_clause(desc, closed, "subspace", "D is a linear subspace, so aff(D) = D");
    }
    return make_clause(desc, FactStatus::Unknown, "unresolved", "no rule decides closedness of the affine hull");
}

Notion interior_notion(CondIndex i) {
    switch (i) {
        case CondIndex::RC2: return Notion::Int;
        case CondIndex::RC3: return Notion::Core;
        case CondIndex::RC4: return Notion::Icr;
        default: return Notion::Sqri;
    }
}

// (0, 0) outside qri of co(E u {0}), with E the value set at the primal value.
Clause compute_exclusion_clause(const Context& c);

Clause exclusion_clause(const Context& c) {
    if (!c.exclusion) c.exclusion = compute_exclusion_clause(c);
    return *c.exclusion;
}

Clause compute_exclusion_clause(const Context& c) {
    const std::string desc = "(0, 0) is not in qri co(E u {(0, 0)})";
    const ValueReport& v = c.values;
    if (!v.primal_known || !v.primal.is_finite())
        return make_clause(desc, FactStatus::Unknown, "undefined", "the value set needs a finite primal value");
    const Rational level = v.primal.value;
    const bool attained = v.primal_attained;
    if (c.numeric) {
        const Polyhedron& target = attained ? c.E_numeric(level) : c.hull_E_numeric(level);
        const bool inside = zero_in(Notion::Qri, target);
        return make_clause(desc, inside ? FactStatus::Fails : FactStatus::Holds, "polyhedral",
                           "relative interior test on the materialized value set",
                           attained ? "primal attained: E contains the origin" : "hull with the origin taken");
    }
    SetExpr E;
    try {
        E = value_set(c.inst, level);
    } catch (const RegimeError& e) {
        return make_clause(desc, FactStatus::Unknown, "unresolved", "no symbolic form of the value set", e.what());
    }
    SetExpr target = attained ? E : hull_with_origin(E);
    Inference direct = infer(Notion::Qri, Point::zero(), target, c.opt);
    if (direct.status != FactStatus::Unknown) {
        Clause cl = from_inference(desc, direct, true);
        if (attained)
            cl.provenance.push_back(step("attained-primal", "E contains the origin when the primal value is attained",
                                         "co(E u {0}) = E", FactStatus::Holds));
        return cl;
    }
    Inference cert;
    if (c.inst.family == Family::Fenchel && !c.inst.A)
        cert = nonneg_certificate(c.inst.f, c.inst.g, level);
    else if (c.inst.family == Family::Lagrange)
        cert = lagrange_nonneg_certificate(c.inst.f, c.inst.S, level);
    if (cert.status == FactStatus::Holds) {
        Clause cl;
        cl.description = desc;
        cl.status = FactStatus::Holds;
        cl.provenance = cert.provenance;
        cl.provenance.push_back(step("lower-bound", "E lies in the half-space r >= 0 and reaches r > 0, so (0, -1) "
                                     "is a nonzero normal at the origin that is not a line direction",
                                     desc, FactStatus::Holds));
        return cl;
    }
    // With 0 in qi(D - D) the qri and qi memberships of the origin coincide.
    Inference spread = c.infer_zero(Notion::Qi, c.D_minus_D());
    if (spread.status == FactStatus::Holds) {
        Inference qi = infer(Notion::Qi, Point::zero(), target, c.opt);
        if (qi.status != FactStatus::Unknown) {
            Clause cl = from_inference(desc, qi, true);
            cl.provenance.insert(cl.provenance.begin(), spread.provenance.begin(), spread.provenance.end());
            cl.provenance.push_back(step("qi-route", "0 in qi(D - D) makes qi and qri agree at the origin of E",
                                         desc, cl.status));
            return cl;
        }
    }
    return make_clause(desc, FactStatus::Unknown, "unresolved", "no rule settles the value-set membership");
}

// ------------------------------------------------------------ per-condition clauses

Clause rc1_clause(const Context& c) {
    const Instance& I = c.inst;
    if (I.family == Family::Perturbation) {
        const std::string desc = "Phi(x', .) is continuous at 0 for some x' with (x', 0) in dom Phi";
        Lifted dom = domain_lifted(perturbation_function(I));
        const Eigen::Index n = I.X.total_dim();
        return make_clause(desc, slice_interior(dom, n, dom.visible - n), "polyhedral",
                           "a polyhedral function is continuous on the interior of its domain",
                           "one LP over a cross-polytope slice");
    }
    if (I.family == Family::Fenchel) {
        const bool with_operator = static_cast<bool>(I.A);
        const std::string desc = with_operator ? "g is continuous at A x' for some x' in dom f with A x' in dom g"
                                               : "f or g is continuous at some x' in dom f and dom g";
        if (c.numeric) {
            Lifted df = domain_lifted(I.f);
            Lifted dg = domain_lifted(I.g);
            const Eigen::Index n = df.visible;
            auto [M, t] = with_operator ? numeric_map(I.A) : std::pair<Matrix, Vector>{identity(n), zeros(n)};
            FactStatus s = meets_interior(df, M, t, dg.materialize(), false);
            if (s != FactStatus::Holds && !with_operator)
                s = meets_interior(dg, identity(n), zeros(n), df.materialize(), false);
            return make_clause(desc, s, "polyhedral",
                               "a polyhedral function is continuous exactly on the interior of its domain");
        }
        if (finite_everywhere(I.g))
            return make_clause(desc, FactStatus::Holds, "finite-everywhere", "g is finite and continuous everywhere",
                               I.g->key);
        if (!with_operator && finite_everywhere(I.f))
            return make_clause(desc, FactStatus::Holds, "finite-everywhere", "f is finite and continuous everywhere",
                               I.f->key);
        Inference ig = infer(Notion::Int, Point::any(), c.dom_g(), c.opt);
        if (ig.status == FactStatus::Fails) {
            if (with_operator) return from_inference(desc, ig);
            Inference if_ = infer(Notion::Int, Point::any(), c.dom_f(), c.opt);
            if (if_.status == FactStatus::Fails) {
                Clause cl = from_inference(desc, ig);
                cl.provenance.insert(cl.provenance.end(), if_.provenance.begin(), if_.provenance.end());
                cl.provenance.push_back(step("empty-interiors",
                                             "a convex function continuous at a point is bounded above near it, "
                                             "so its domain has interior points",
                                             desc, FactStatus::Fails));
                return cl;
            }
        }
        return make_clause(desc, FactStatus::Unknown, "unresolved", "no continuity point found");
    }
    // Lagrange: Slater point.
    const std::string desc = "some x' in dom f and S has g(x') in -int(C)";
    if (c.numeric) {
        Lifted feasible = intersect_lifted(domain_lifted(I.f), realize(I.S));
        auto [M, t] = numeric_map(I.gmap);
        FactStatus s = meets_interior(feasible, -M, Vector(-t), realize(I.C).materialize(), false);
        return make_clause(desc, s, "polyhedral", "strict feasibility LP");
    }
    Inference ic = infer(Notion::Int, Point::any(), I.C, c.opt);
    if (ic.status == FactStatus::Fails) return from_inference(desc, ic);
    for (const Point& p : witness_candidates(I)) {
        if (membership(p, c.dom_f(), c.opt).status != FactStatus::Holds) continue;
        if (membership(p, I.S, c.opt).status != FactStatus::Holds) continue;
        auto q = apply_map(I.gmap, p);
        if (!q) continue;
        Inference in = infer(Notion::Int, -*q, I.C, c.opt);
        if (in.status == FactStatus::Holds) {
            Clause cl = from_inference(desc, in);
            cl.provenance.push_back(step("witness", "explicit Slater point", desc, FactStatus::Holds, p.key()));
            return cl;
        }
    }
    return make_clause(desc, FactStatus::Unknown, "unresolved", "no Slater point found among the named points");
}

std::vector<Clause> rc6p_clauses(const Context& c) {
    const Instance& I = c.inst;
    std::vector<Clause> out;
    if (I.family == Family::Fenchel) {
        const std::string desc = I.A ? "A(dom f) meets qri(dom g)" : "dom f meets qri(dom g)";
        if (c.numeric) {
            Lifted df = domain_lifted(I.f);
            const Eigen::Index n = df.visible;
            auto [M, t] = I.A ? numeric_map(I.A) : std::pair<Matrix, Vector>{identity(n), zeros(n)};
            out.push_back(make_clause(desc, meets_interior(df, M, t, domain_lifted(I.g).materialize(), true),
                                      "polyhedral", "relative interior strictness LP"));
        } else {
            Inference empty = infer(Notion::Qri, Point::any(), c.dom_g(), c.opt);
            if (empty.status == FactStatus::Fails) {
                out.push_back(from_inference(desc, empty));
            } else {
                Clause found = make_clause(desc, FactStatus::Unknown, "unresolved", "no witness among the named points");
                for (const Point& p : witness_candidates(I)) {
                    if (membership(p, c.dom_f(), c.opt).status != FactStatus::Holds) continue;
                    auto q = I.A ? apply_map(I.A, p) : std::optional<Point>(p);
                    if (!q) continue;
                    Inference in = infer(Notion::Qri, *q, c.dom_g(), c.opt);
                    if (in.status == FactStatus::Holds) {
                        found = from_inference(desc, in);
                        found.provenance.push_back(step("witness", "explicit common point", desc,
                                                        FactStatus::Holds, p.key()));
                        break;
                    }
                }
                out.push_back(found);
            }
        }
        out.push_back(from_inference("0 in qi(dom g - dom g)",
                                     c.infer_zero(Notion::Qi, normalize(mink_diff(c.dom_g(), c.dom_g())))));
    } else {
        const std::string desc = "some x' in dom f and S has g(x') in -qri(C)";
        if (c.numeric) {
            Lifted feasible = intersect_lifted(domain_lifted(I.f), realize(I.S));
            auto [M, t] = numeric_map(I.gmap);
            out.push_back(make_clause(desc, meets_interior(feasible, -M, Vector(-t), realize(I.C).materialize(), true),
                                      "polyhedral", "relative interior strictness LP"));
        } else {
            Inference empty = infer(Notion::Qri, Point::any(), I.C, c.opt);
            if (empty.status == FactStatus::Fails) {
                out.push_back(from_inference(desc, empty));
            } else {
                Clause found = make_clause(desc, FactStatus::Unknown, "unresolved", "no witness among the named points");
                for (const Point& p : witness_candidates(I)) {
                    if (membership(p, c.dom_f(), c.opt).status != FactStatus::Holds) continue;
                    if (membership(p, I.S, c.opt).status != FactStatus::Holds) continue;
                    auto q = apply_map(I.gmap, p);
                    if (!q) continue;
                    Inference in = infer(Notion::Qri, -*q, I.C, c.opt);
                    if (in.status == FactStatus::Holds) {
                        found = from_inference(desc, in);
                        found.provenance.push_back(step("witness", "explicit feasible point", desc,
                                                        FactStatus::Holds, p.key()));
                        break;
                    }
                }
                out.push_back(found);
            }
        }
        out.push_back(from_inference("cl(C - C) = Z", c.infer_zero(Notion::Qi, normalize(mink_diff(I.C, I.C)))));
    }
    out.push_back(exclusion_clause(c));
    return out;
}

}  // namespace

// ------------------------------------------------------------ names

std::string condition_label(CondIndex i) {
    switch (i) {
        case CondIndex::RC1: return "RC1";
        case CondIndex::RC2: return "RC2";
        case CondIndex::RC3: return "RC3";
        case CondIndex::RC4: return "RC4";
        case CondIndex::RC5: return "RC5";
        case CondIndex::RC6p: return "RC6'";
        case CondIndex::RC6: return "RC6";
        case CondIndex::RC7: return "RC7";
        case CondIndex::RC8: return "RC8";
    }
    return "?";
}

CondIndex parse_condition(const std::string& s) {
    for (CondIndex i : kAllConditions)
        if (condition_label(i) == s) return i;
    if (s == "RC6p") return CondIndex::RC6p;
    throw MalformedExpression("unknown condition '" + s + "'");
}

std::string ConditionId::name() const { return condition_label(index) + "[" + family_name(family) + "]"; }

bool applicable(Family f, CondIndex i) {
    if (i == CondIndex::RC6p || i == CondIndex::RC8) return f != Family::Perturbation;
    return true;
}

std::vector<CondIndex> applicable_conditions(Family f) {
    std::vector<CondIndex> out;
    for (CondIndex i : kAllConditions)
        if (applicable(f, i)) out.push_back(i);
    return out;
}

FactStatus combine(const std::vector<Clause>& clauses) {
    bool unknown = false;
    for (const auto& c : clauses) {
        if (c.status == FactStatus::Fails) return FactStatus::Fails;
        if (c.status == FactStatus::Unknown) unknown = true;
    }
    return unknown ? FactStatus::Unknown : FactStatus::Holds;
}

std::optional<std::size_t> ConditionVerdict::blocking() const {
    for (std::size_t i = 0; i < clauses.size(); ++i)
        if (clauses[i].status == FactStatus::Fails) return i;
    for (std::size_t i = 0; i < clauses.size(); ++i)
        if (clauses[i].status == FactStatus::Unknown) return i;
    return std::nullopt;
}

std::string verdict_name(DualityVerdict v) {
    switch (v) {
        case DualityVerdict::GuaranteedBy: return "guaranteed-by";
        case DualityVerdict::VerifiedNumerically: return "verified-numerically";
        case DualityVerdict::GapDetected: return "gap-detected";
        case DualityVerdict::Undecided: return "undecided";
    }
    return "?";
}

// ------------------------------------------------------------ graph

ImplicationGraph implication_graph(Family f) {
    using C = CondIndex;
    const std::string lsc = lsc_key(f);
    ImplicationGraph g{f, {}};
    auto edge = [&](C a, C b, std::vector<std::string> req, std::string why) {
        g.edges.push_back(Edge{a, b, std::move(req), std::move(why)});
    };
    edge(C::RC1, C::RC2, {"frechet", lsc}, "continuity at a feasible point puts the origin in the interior of D");
    edge(C::RC2, C::RC3, {}, "the interior is contained in the core");
    edge(C::RC3, C::RC2, {}, "core and interior of D agree for lower semicontinuous data on Frechet spaces");
    edge(C::RC3, C::RC4, {}, "a core point is an intrinsic core point of a set with closed full affine hull");
    edge(C::RC4, C::RC5, {}, "intrinsic core and strong quasi-relative interior agree when aff(D) is closed");
    edge(C::RC5, C::RC4, {}, "intrinsic core and strong quasi-relative interior agree when aff(D) is closed");
    edge(C::RC3, C::RC6, {"finite-value"}, "a core point of D excludes the origin from qri of the value set");
    edge(C::RC1, C::RC6, {"finite-value"}, "continuity excludes the origin from qri of the value set");
    edge(C::RC6, C::RC7, {}, "0 in qi(D) iff 0 in qi(D - D) and 0 in qri(D)");
    edge(C::RC7, C::RC6, {}, "0 in qi(D) iff 0 in qi(D - D) and 0 in qri(D)");
    if (f != Family::Perturbation) {
        edge(C::RC5, C::RC8, {"frechet", lsc}, "interiority-type conditions imply the closedness-type condition");
        edge(C::RC1, C::RC8, {lsc}, "continuity implies the closedness-type condition");
        edge(C::RC6p, C::RC6, {}, "the quasi-relative interior condition on the data implies the one on D");
    }
    if (f == Family::Fenchel)
        edge(C::RC6, C::RC8, {"finite-dim", lsc}, "in finite dimensions the quasi-interior condition yields closedness");
    return g;
}

Hypotheses hypotheses(const Instance& inst) {
    Hypotheses h;
    auto flag = [&](const std::string& key, FactStatus fallback) {
        auto it = inst.flags.find(key);
        return it == inst.flags.end() ? fallback : it->second.status;
    };
    auto both = [](FactStatus a, FactStatus b) {
        if (a == FactStatus::Fails || b == FactStatus::Fails) return FactStatus::Fails;
        if (a == FactStatus::Holds && b == FactStatus::Holds) return FactStatus::Holds;
        return FactStatus::Unknown;
    };
    const FactStatus frechet = inst.X.frechet && inst.Y.frechet ? FactStatus::Holds : FactStatus::Unknown;
    h["frechet"] = flag("frechet", frechet);
    h["finite-dim"] = inst.X.finite_dim() && inst.Y.finite_dim() ? FactStatus::Holds : FactStatus::Fails;
    switch (inst.family) {
        case Family::Perturbation:
            h["lsc"] = flag("lsc", inst.numeric() ? FactStatus::Holds : attribute(inst.phi, FnAttr::Lsc).status);
            break;
        case Family::Fenchel:
            h["lsc"] = flag("lsc", both(attribute(inst.f, FnAttr::Lsc).status, attribute(inst.g, FnAttr::Lsc).status));
            break;
        case Family::Lagrange: {
            const FactStatus S = flag("S closed", is_closed(inst.S));
            const FactStatus f = flag("f lsc", attribute(inst.f, FnAttr::Lsc).status);
            // An affine or shift map is continuous, so g is C-epi closed when C is closed.
            FactStatus g = FactStatus::Unknown;
            if (inst.gmap->kind != MapKind::Operator && is_closed(inst.C) == FactStatus::Holds) g = FactStatus::Holds;
            g = flag("g epi-closed", g);
            h["S closed"] = S;
            h["f lsc"] = f;
            h["g epi-closed"] = g;
            h["closed-data"] = both(both(S, f), g);
            break;
        }
    }
    return h;
}

// ------------------------------------------------------------ values

std::optional<ExtendedReal> ValueReport::gap() const {
    if (!primal_known || !dual_known) return std::nullopt;
    if (primal.kind == ExtendedReal::Kind::MinusInf) return std::nullopt;
    if (primal.kind == ExtendedReal::Kind::PlusInf) return std::nullopt;
    if (!dual.is_finite()) return dual.kind == ExtendedReal::Kind::MinusInf ? std::optional(ExtendedReal::plus_inf())
                                                                            : std::nullopt;
    return ExtendedReal::finite(primal.value - dual.value);
}

ValueReport compute_values(const Instance& inst) {
    ValueReport v;
    v.primal_solution = inst.primal_solution;
    v.dual_solution = inst.dual_solution;
    if (inst.numeric()) {
        v.source = "computed";
        PrimalResult p = solve_primal(inst);
        v.primal = p.value;
        v.primal_known = true;
        v.primal_attained = p.attained;
        v.primal_point = p.point;
        DualResult d = solve_dual(inst);
        v.dual = d.value;
        v.dual_known = true;
        v.dual_attained = d.attained;
        v.dual_point = d.point;
        if (v.primal_solution.empty() && p.point) v.primal_solution = to_string(*p.point);
        if (v.dual_solution.empty() && d.point) v.dual_solution = to_string(*d.point);
        return v;
    }
    v.source = "declared";
    if (inst.primal) {
        v.primal = inst.primal->value;
        v.primal_known = true;
        v.primal_attained = inst.primal->attained;
    }
    if (inst.dual) {
        v.dual = inst.dual->value;
        v.dual_known = true;
        v.dual_attained = inst.dual->attained;
    }
    return v;
}

// ------------------------------------------------------------ evaluation

ConditionVerdict check_rc8(const Instance& inst) {
    if (!applicable(inst.family, CondIndex::RC8))
        throw NotApplicable("RC8 is not defined for " + family_name(inst.family) + " problems");
    ConditionVerdict v;
    v.id = {inst.family, CondIndex::RC8};
    Context c(inst, ValueReport{});
    const bool fenchel = inst.family == Family::Fenchel;
    if (fenchel) {
        v.clauses.push_back(hypothesis_clause(c, "lsc", "f and g are lower semicontinuous"));
    } else {
        v.clauses.push_back(hypothesis_clause(c, "S closed", "S is closed"));
        v.clauses.push_back(hypothesis_clause(c, "f lsc", "f is lower semicontinuous"));
        v.clauses.push_back(hypothesis_clause(c, "g epi-closed", "g is C-epi closed"));
    }
    const std::string desc = !fenchel ? "the union over C* of epi (f + <z*, g> + indicator S)* is weak*-closed"
                             : inst.A ? "epi f* + (A* x id)(epi g*) is weak*-closed"
                                      : "epi f* + epi g* is weak*-closed";
    if (c.numeric) {
        v.clauses.push_back(make_clause(desc, FactStatus::Holds, "polyhedral",
                                        fenchel ? "a sum of polyhedral epigraphs is polyhedral, hence closed"
                                                : "the union is the projection of a polyhedral set, hence closed"));
    } else if (inst.rc8) {
        Clause cl = make_clause(desc, inst.rc8->status, inst.rc8->external ? "external" : "declared",
                                inst.rc8->citation, inst.rc8->witness.empty() ? "" : "witness " + inst.rc8->witness);
        v.clauses.push_back(cl);
    } else if (fenchel && !inst.A) {
        FunctionExpr cf = conjugate(inst.f), cg = conjugate(inst.g);
        FactStatus s = FactStatus::Unknown;
        std::string detail;
        if (cf->kind == FnKind::Indicator && cg->kind == FnKind::Indicator) {
            SetExpr sum = normalize(mink_sum(cf->set, cg->set));
            s = is_closed(sum);
            detail = sum->key;
            // Norm and weak* closedness agree only in reflexive spaces.
            if (s == FactStatus::Fails && !inst.X.is_hilbert_l2()) s = FactStatus::Unknown;
        }
        v.clauses.push_back(make_clause(desc, s, s == FactStatus::Unknown ? "unresolved" : "indicator-conjugates",
                                        "both conjugates are indicators, so the epigraph sum is "
                                        "(dom f* + dom g*) x [0, inf)",
                                        detail));
    } else {
        v.clauses.push_back(make_clause(desc, FactStatus::Unknown, "unresolved", "no closedness rule applies"));
    }
    v.status = combine(v.clauses);
    return v;
}

static ConditionVerdict evaluate_in(const ConditionId& id, const Context& c);

ConditionVerdict evaluate_condition(const ConditionId& id, const Instance& inst, const ValueReport& values) {
    if (id.family != inst.family)
        throw NotApplicable(id.name() + " does not apply to a " + family_name(inst.family) + " instance");
    if (!applicable(id.family, id.index)) throw NotApplicable(id.name() + " is not defined for this family");
    if (id.index == CondIndex::RC8) return check_rc8(inst);
    Context c(inst, values);
    return evaluate_in(id, c);
}

static ConditionVerdict evaluate_in(const ConditionId& id, const Context& c) {
    if (id.index == CondIndex::RC8) return check_rc8(c.inst);
    ConditionVerdict v;
    v.id = id;
    switch (id.index) {
        case CondIndex::RC1: v.clauses.push_back(rc1_clause(c)); break;
        case CondIndex::RC2:
        case CondIndex::RC3:
        case CondIndex::RC4:
        case CondIndex::RC5: {
            v.clauses = standing_hypotheses(c);
            if (id.index == CondIndex::RC4) v.clauses.push_back(affine_hull_clause(c));
            const Notion k = interior_notion(id.index);
            v.clauses.push_back(from_inference("0 in " + notion_name(k) + "(D)", c.infer_zero(k, c.D())));
            break;
        }
        case CondIndex::RC6p: v.clauses = rc6p_clauses(c); break;
        case CondIndex::RC6:
            v.clauses.push_back(from_inference("0 in qi(D)", c.infer_zero(Notion::Qi, c.D())));
            v.clauses.push_back(exclusion_clause(c));
            break;
        case CondIndex::RC7:
            v.clauses.push_back(
                from_inference("0 in qi(D - D)", c.infer_zero(Notion::Qi, c.D_minus_D())));
            v.clauses.push_back(from_inference("0 in qri(D)", c.infer_zero(Notion::Qri, c.D())));
            v.clauses.push_back(exclusion_clause(c));
            break;
        case CondIndex::RC8: break;
    }
    v.status = combine(v.clauses);
    return v;
}

ConditionVerdict evaluate_condition(const ConditionId& id, const Instance& inst) {
    const bool needs_value = id.index == CondIndex::RC6 || id.index == CondIndex::RC6p || id.index == CondIndex::RC7;
    return evaluate_condition(id, inst, needs_value ? compute_values(inst) : ValueReport{});
}

// ------------------------------------------------------------ diagnosis

const ConditionVerdict& Diagnosis::at(CondIndex i) const {
    auto it = verdicts.find(ConditionId{family, i});
    if (it == verdicts.end()) throw NotApplicable(condition_label(i) + " is not part of this diagnosis");
    return it->second;
}

namespace {

bool guards_hold(const Edge& e, const Hypotheses& h) {
    return std::all_of(e.requires_.begin(), e.requires_.end(), [&](const std::string& k) {
        auto it = h.find(k);
        return it != h.end() && it->second == FactStatus::Holds;
    });
}

std::string edge_name(const Edge& e) { return condition_label(e.from) + " => " + condition_label(e.to); }

bool gap_certified(const ValueReport& v) { return v.primal_known && v.dual_known && v.dual < v.primal; }

void propagate(Diagnosis& d, const ImplicationGraph& g) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Edge& e : g.edges) {
            if (!guards_hold(e, d.hyps)) continue;
            auto& from = d.verdicts.at({d.family, e.from});
            auto& to = d.verdicts.at({d.family, e.to});
            if (from.status == FactStatus::Holds && to.status == FactStatus::Unknown) {
                for (auto& cl : to.clauses) {
                    if (cl.status != FactStatus::Unknown) continue;
                    cl.status = FactStatus::Holds;
                    cl.provenance.push_back(step("implication", e.citation, cl.description, FactStatus::Holds,
                                                 "implied by " + edge_name(e)));
                }
                to.status = combine(to.clauses);
                changed = true;
            }
            if (to.status == FactStatus::Fails && from.status == FactStatus::Unknown) {
                Clause cl = make_clause("not all clauses can hold", FactStatus::Fails, "contrapositive", e.citation,
                                        condition_label(e.to) + " fails, refuting " + edge_name(e) + " premise");
                from.clauses.push_back(cl);
                from.status = FactStatus::Fails;
                changed = true;
            }
        }
    }
}

}  // namespace

std::vector<std::string> consistency_check(const Diagnosis& d) {
    std::vector<std::string> out;
    Hypotheses h = d.hyps;
    for (const Edge& e : implication_graph(d.family).edges) {
        if (!guards_hold(e, h)) continue;
        auto a = d.verdicts.find({d.family, e.from});
        auto b = d.verdicts.find({d.family, e.to});
        if (a == d.verdicts.end() || b == d.verdicts.end()) continue;
        if (a->second.status == FactStatus::Holds && b->second.status == FactStatus::Fails)
            out.push_back("edge " + edge_name(e) + " violated: " + condition_label(e.from) + " holds but " +
                          condition_label(e.to) + " fails");
    }
    for (const auto& [id, v] : d.verdicts) {
        if (v.status != combine(v.clauses)) out.push_back(id.name() + " status disagrees with its clauses");
        if (gap_certified(d.values) && v.status == FactStatus::Holds)
            out.push_back("duality gap certified while " + id.name() + " holds");
    }
    if (d.verdict == DualityVerdict::GapDetected && !gap_certified(d.values))
        out.push_back("gap reported without certified values");
    return out;
}

Diagnosis diagnose(const Instance& inst) {
    Diagnosis d;
    d.id = inst.id;
    d.family = inst.family;
    d.hyps = hypotheses(inst);
    try {
        d.values = compute_values(inst);
    } catch (const UndecidableValue& e) {
        d.notes.push_back(e.what());
    }
    if (d.values.primal_known && d.values.primal.kind == ExtendedReal::Kind::PlusInf)
        throw InvalidInstance("the primal problem is infeasible; diagnosis needs a feasible instance");
    d.hyps["finite-value"] =
        d.values.primal_known ? (d.values.primal.is_finite() ? FactStatus::Holds : FactStatus::Fails)
                              : FactStatus::Unknown;

    if (inst.numeric()) {
        auto check_declared = [&](const std::optional<DeclaredValue>& declared, const ExtendedReal& computed,
                                  const std::string& which) {
            if (declared && !(declared->value == computed))
                d.violations.push_back("declared " + which + " value " + declared->value.str() +
                                       " disagrees with computed " + computed.str());
        };
        check_declared(inst.primal, d.values.primal, "primal");
        check_declared(inst.dual, d.values.dual, "dual");
    }

    const Context shared(inst, d.values);
    for (CondIndex i : applicable_conditions(inst.family)) {
        ConditionId id{inst.family, i};
        d.verdicts.emplace(id, evaluate_in(id, shared));
    }

    // Direct evaluations are checked before any propagation fills gaps.
    for (auto& s : consistency_check(d)) d.violations.push_back(s);

    const bool gap = gap_certified(d.values);
    if (gap) {
        for (auto& [id, v] : d.verdicts) {
            if (v.status != FactStatus::Unknown) continue;
            v.clauses.push_back(make_clause("not all clauses can hold", FactStatus::Fails, "duality-gap",
                                            "every condition on the list is sufficient for a zero duality gap",
                                            "v(D) = " + d.values.dual.str() + " < v(P) = " + d.values.primal.str()));
            v.status = FactStatus::Fails;
        }
    }
    propagate(d, implication_graph(inst.family));

    if (gap) {
        d.verdict = DualityVerdict::GapDetected;
    } else {
        for (CondIndex i : {CondIndex::RC1, CondIndex::RC2, CondIndex::RC3, CondIndex::RC4, CondIndex::RC5,
                            CondIndex::RC6p, CondIndex::RC6, CondIndex::RC7, CondIndex::RC8}) {
            auto it = d.verdicts.find({inst.family, i});
            if (it != d.verdicts.end() && it->second.status == FactStatus::Holds) {
                d.verdict = DualityVerdict::GuaranteedBy;
                d.guaranteed_by = i;
                break;
            }
        }
        if (!d.guaranteed_by && inst.numeric() && d.values.primal == d.values.dual)
            d.verdict = DualityVerdict::VerifiedNumerically;
    }

    if (inst.numeric() && d.values.primal.is_finite()) {
        const Rational vp = d.values.primal.value;
        if (d.status(CondIndex::RC6) == FactStatus::Holds) {
            try {
                d.separation = recover_dual_via_separation(inst, vp);
                if (!(ExtendedReal::finite(d.separation->dual_value) == d.values.dual))
                    d.violations.push_back("separation recovered dual value " + to_string(d.separation->dual_value) +
                                           " but the dual solver found " + d.values.dual.str());
            } catch (const std::exception& e) {
                d.violations.push_back(std::string("separation failed although RC6 holds: ") + e.what());
            }
        }
        if (d.values.dual == d.values.primal && d.values.dual_attained) {
            if (zero_in(Notion::Qi, shared.hull_E_numeric(vp)))
                d.violations.push_back("zero gap with an attained dual, yet (0, 0) is in qi co(E u {0})");
        }
    }

    for (auto& s : consistency_check(d))
        if (std::find(d.violations.begin(), d.violations.end(), s) == d.violations.end()) d.violations.push_back(s);
    d.consistent = d.violations.empty();
    return d;
}

}  // namespace dualdiag
