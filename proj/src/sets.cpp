#include "dualdiag/sets.hpp"

#include "dualdiag/functions.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <unordered_map>

namespace dualdiag {

std::string rule_kind_name(RuleKind k) {
    switch (k) {
        case RuleKind::Definition: return "definition";
        case RuleKind::Lemma: return "lemma";
        case RuleKind::Catalog: return "catalog";
        case RuleKind::Symmetry: return "symmetry";
        case RuleKind::Numeric: return "numeric";
        case RuleKind::Declared: return "declared";
    }
    return "?";
}

std::string Query::key() const {
    return (notion ? notion_name(*notion) : std::string("member")) + "|" + point.key() + "|" + set->space.key() +
           "|" + set->key;
}

std::string Query::describe() const {
    const std::string p = point.is_any() ? "some point" : point.key();
    if (!notion) return p + " in " + set->key;
    return p + " in " + notion_name(*notion) + "(" + set->key + ")";
}

// ================================================================ normalization

namespace {

bool lp_plus_atom(const SetExpr& s) {
    return s->kind == SetKind::Catalog &&
           (s->atom == CatalogId::LpPlus || s->atom == CatalogId::LpPlusUncountable);
}

SetExpr rebuild(const SetExpr& s, std::vector<SetExpr> args) {
    switch (s->kind) {
        case SetKind::Neg: return neg_set(args[0]);
        case SetKind::Scale: return scale_set(s->scalar, args[0]);
        case SetKind::Translate: return translate_set(args[0], s->point);
        case SetKind::MinkSum: return mink_sum(args[0], args[1]);
        case SetKind::Product: return product_set(args[0], args[1]);
        case SetKind::Intersection: return intersect_set(args[0], args[1]);
        case SetKind::ConeHull: return cone_hull(args[0]);
        case SetKind::HullWithOrigin: return hull_with_origin(args[0]);
        case SetKind::Closure: return closure_set(args[0]);
        case SetKind::PolarCone: return polar_cone(args[0]);
        case SetKind::Image: return image_set(s->map, args[0]);
        case SetKind::Preimage: return preimage_set(s->map, args[0]);
        case SetKind::ConicExt: return conic_ext_node(s->fns[0], args[0], s->map, args[1], s->level);
        default: return s;
    }
}

void flatten(const SetExpr& s, SetKind kind, std::vector<SetExpr>& out) {
    if (s->kind == kind) {
        for (const auto& a : s->args) flatten(a, kind, out);
    } else {
        out.push_back(s);
    }
}

SetExpr left_assoc(std::vector<SetExpr> ops, SetExpr (*join)(SetExpr, SetExpr)) {
    std::sort(ops.begin(), ops.end(), [](const SetExpr& a, const SetExpr& b) { return a->key < b->key; });
    SetExpr acc = ops[0];
    for (std::size_t i = 1; i < ops.size(); ++i) acc = join(acc, ops[i]);
    return acc;
}

bool folds_numerically(const SetExpr& s) {
    return is_numeric(s) && s->kind != SetKind::Poly && s->kind != SetKind::Whole && s->kind != SetKind::Singleton;
}

class Normalizer {
public:
    std::vector<std::string> trace;

    SetExpr run(const SetExpr& s, int depth = 0) {
        if (depth > 200) throw MalformedExpression("normalization of " + s->key + " does not terminate");
        SetExpr cur = s;
        if (!s->args.empty()) {
            std::vector<SetExpr> args;
            bool changed = false;
            for (const auto& a : s->args) {
                args.push_back(run(a, depth + 1));
                changed = changed || args.back()->key != a->key;
            }
            if (changed) cur = rebuild(s, std::move(args));
        }
        auto next = step(cur);
        if (!next || (*next)->key == cur->key) return cur;
        return run(*next, depth + 1);
    }

private:
    std::optional<SetExpr> note(const char* id, SetExpr out) {
        trace.emplace_back(id);
        return out;
    }

    std::optional<SetExpr> step(const SetExpr& s) {
        if (folds_numerically(s)) return note("numeric-fold", poly_set(realize(s).materialize()));
        switch (s->kind) {
            case SetKind::Neg: return neg_rule(s->args[0]);
            case SetKind::Scale: return scale_rule(s->scalar, s->args[0]);
            case SetKind::Translate: return translate_rule(s->args[0], s->point);
            case SetKind::MinkSum: return sum_rule(s);
            case SetKind::Intersection: return intersection_rule(s);
            case SetKind::ConeHull: {
                const SetExpr& x = s->args[0];
                if (x->kind == SetKind::HullWithOrigin) return note("cone-of-hull0", cone_hull(x->args[0]));
                if (x->kind == SetKind::ConeHull) return note("cone-idempotent", x);
                if (is_convex_cone(x) == FactStatus::Holds) return note("cone-of-cone", x);
                return std::nullopt;
            }
            case SetKind::HullWithOrigin: {
                const SetExpr& x = s->args[0];
                if (x->kind == SetKind::HullWithOrigin) return note("hull0-idempotent", x);
                if (is_convex_cone(x) == FactStatus::Holds) return note("hull0-of-cone", x);
                return std::nullopt;
            }
            case SetKind::Closure: {
                const SetExpr& x = s->args[0];
                if (x->kind == SetKind::Catalog && x->atom == CatalogId::GeneralClosedSubspace && x->dense)
                    return note("closure-of-dense", whole_set(x->space));
                if (is_closed(x) == FactStatus::Holds) return note("closure-of-closed", x);
                return std::nullopt;
            }
            case SetKind::PolarCone: return polar_rule(s->args[0]);
            case SetKind::Image:
            case SetKind::Preimage: {
                const bool pre = s->kind == SetKind::Preimage;
                const SetExpr& x = s->args[0];
                switch (s->map->kind) {
                    case MapKind::Identity: return note("map-identity", x);
                    case MapKind::Negation: return note("map-negation", neg_set(x));
                    case MapKind::Shift:
                        return note("map-shift", translate_set(x, pre ? -s->map->shift : s->map->shift));
                    default: return std::nullopt;
                }
            }
            case SetKind::EpiDiff:
                if (s->fns[0]->kind == FnKind::Indicator && s->fns[1]->kind == FnKind::Indicator)
                    return note("epidiff-of-indicators", epi_diff_set(s->fns[0], s->fns[1], s->level).set);
                return std::nullopt;
            case SetKind::DomainOf: {
                SetExpr d = domain_expression(s->fns[0]);
                if (d->kind == SetKind::DomainOf) return std::nullopt;
                return note("domain-rule", d);
            }
            default: return std::nullopt;
        }
    }

    std::optional<SetExpr> neg_rule(const SetExpr& x) {
        switch (x->kind) {
            case SetKind::Neg: return note("neg-neg", x->args[0]);
            case SetKind::Singleton: return note("neg-singleton", singleton(-x->point, x->space));
            case SetKind::Translate: return note("neg-translate", translate_set(neg_set(x->args[0]), -x->point));
            case SetKind::MinkSum: return note("neg-sum", mink_sum(neg_set(x->args[0]), neg_set(x->args[1])));
            case SetKind::Scale: return note("neg-scale", scale_set(x->scalar, neg_set(x->args[0])));
            case SetKind::Product: return note("neg-product", product_set(neg_set(x->args[0]), neg_set(x->args[1])));
            default: break;
        }
        if (is_subspace(x) == FactStatus::Holds) return note("neg-subspace", x);
        return std::nullopt;
    }

    std::optional<SetExpr> scale_rule(const Rational& r, const SetExpr& x) {
        if (r == 1) return note("scale-one", x);
        if (r == -1) return note("scale-minus-one", neg_set(x));
        if (r < 0) return note("scale-negative", scale_set(-r, neg_set(x)));
        if (r == 0) return std::nullopt;
        if (x->kind == SetKind::Scale) return note("scale-scale", scale_set(r * x->scalar, x->args[0]));
        if (x->kind == SetKind::Singleton) return note("scale-singleton", singleton(x->point.scaled(r), x->space));
        if (x->kind == SetKind::Translate)
            return note("scale-translate", translate_set(scale_set(r, x->args[0]), x->point.scaled(r)));
        if (is_convex_cone(x) == FactStatus::Holds) return note("scale-cone", x);
        return std::nullopt;
    }

    std::optional<SetExpr> translate_rule(const SetExpr& x, const Point& a) {
        if (a.is_zero()) return note("translate-zero", x);
        if (x->kind == SetKind::Whole) return note("translate-whole", x);
        try {
            if (x->kind == SetKind::Translate) return note("translate-translate", translate_set(x->args[0], x->point + a));
            if (x->kind == SetKind::Singleton) return note("translate-singleton", singleton(x->point + a, x->space));
        } catch (const MalformedExpression&) {
        }
        return std::nullopt;
    }

    std::optional<SetExpr> sum_rule(const SetExpr& s) {
        std::vector<SetExpr> raw;
        flatten(s, SetKind::MinkSum, raw);
        Point offset = Point::zero();
        std::vector<SetExpr> ops;
        bool mixed = false;
        for (const auto& op : raw) {
            try {
                if (op->kind == SetKind::Singleton) {
                    offset = offset + op->point;
                    continue;
                }
                if (op->kind == SetKind::Translate) {
                    offset = offset + op->point;
                    ops.push_back(op->args[0]);
                    continue;
                }
            } catch (const MalformedExpression&) {
                mixed = true;
            }
            ops.push_back(op);
        }
        if (mixed) return std::nullopt;
        const SpaceTag& X = s->space;
        for (const auto& op : ops)
            if (op->kind == SetKind::Whole) return note("sum-whole", whole_set(X));
        if (ops.empty()) return note("sum-singletons", singleton(offset, X));
        // K + (-K) spans the space for the positive cones of the catalog.
        for (const auto& a : ops)
            for (const auto& b : ops)
                if (lp_plus_atom(a) && b->kind == SetKind::Neg && b->args[0]->key == a->key)
                    return note("sum-generating-cone", whole_set(X));
        // Fold numeric operands together.
        std::vector<SetExpr> numeric, rest;
        for (const auto& op : ops) (is_numeric(op) ? numeric : rest).push_back(op);
        if (numeric.size() > 1) {
            SetExpr acc = numeric[0];
            for (std::size_t i = 1; i < numeric.size(); ++i) acc = mink_sum(acc, numeric[i]);
            rest.push_back(poly_set(realize(acc).materialize()));
            trace.emplace_back("sum-numeric");
        } else {
            rest.insert(rest.end(), numeric.begin(), numeric.end());
        }
        // Repeated operands: cones absorb, convex sets scale.
        std::map<std::string, std::pair<SetExpr, int>> counts;
        for (const auto& op : rest) {
            auto& slot = counts[op->key];
            slot.first = op;
            ++slot.second;
        }
        std::vector<SetExpr> merged;
        for (auto& [key, entry] : counts) {
            if (entry.second == 1) {
                merged.push_back(entry.first);
            } else if (is_convex_cone(entry.first) == FactStatus::Holds) {
                trace.emplace_back("sum-cone-idempotent");
                merged.push_back(entry.first);
            } else {
                trace.emplace_back("sum-convex-multiple");
                merged.push_back(scale_set(entry.second, entry.first));
            }
        }
        SetExpr out = left_assoc(merged, mink_sum);
        if (!offset.is_zero()) out = translate_set(out, offset);
        if (out->key == s->key) return std::nullopt;
        return note("sum-canonical", out);
    }

    std::optional<SetExpr> intersection_rule(const SetExpr& s) {
        std::vector<SetExpr> raw;
        flatten(s, SetKind::Intersection, raw);
        std::map<std::string, SetExpr> uniq;
        for (const auto& op : raw)
            if (op->kind != SetKind::Whole) uniq[op->key] = op;
        if (uniq.empty()) return note("intersect-whole", whole_set(s->space));
        std::vector<SetExpr> ops;
        for (auto& [k, v] : uniq) ops.push_back(v);
        SetExpr out = left_assoc(ops, intersect_set);
        if (out->key == s->key) return std::nullopt;
        return note("intersect-canonical", out);
    }

    std::optional<SetExpr> polar_rule(const SetExpr& x) {
        if (lp_plus_atom(x) && x->space.is_hilbert_l2()) return note("polar-self-dual", neg_set(x));
        if (x->kind == SetKind::Whole) return note("polar-of-whole", singleton(Point::zero(), x->space));
        if (x->kind == SetKind::Singleton && x->point.is_zero()) return note("polar-of-zero", whole_set(x->space));
        if (x->kind == SetKind::Neg) return note("polar-neg", neg_set(polar_cone(x->args[0])));
        if (x->kind == SetKind::PolarCone && is_closed(x->args[0]) == FactStatus::Holds &&
            is_convex_cone(x->args[0]) == FactStatus::Holds)
            return note("bipolar", x->args[0]);
        return std::nullopt;
    }
};

std::unordered_map<std::string, Normalized>& normal_cache() {
    static std::unordered_map<std::string, Normalized> cache;
    return cache;
}

}  // namespace

Normalized normalize_traced(const SetExpr& s) {
    const std::string key = s->space.key() + "|" + s->key;
    auto& cache = normal_cache();
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    Normalizer n;
    SetExpr out = n.run(s);
    Normalized result{out, n.trace};
    cache.emplace(key, result);
    return result;
}

SetExpr normalize(const SetExpr& s) { return normalize_traced(s).set; }

// ================================================================ catalog

FactStatus catalog_fact(const SetExpr& atom, std::optional<Notion> k, const Point& p) {
    if (atom->kind != SetKind::Catalog) return FactStatus::Unknown;
    const bool any = p.is_any();
    const bool zero = p.is_zero();
    switch (atom->atom) {
        case CatalogId::LpPlus:
        case CatalogId::LpPlusUncountable: {
            FactStatus member = FactStatus::Unknown;
            if (any || p.has_tag("nonneg")) member = FactStatus::Holds;
            else if (p.has_tag("nonpos") && p.has_tag("nonzero")) member = FactStatus::Fails;
            if (!k) return member;
            if (*k != Notion::Qi && *k != Notion::Qri) return FactStatus::Fails;
            if (atom->atom == CatalogId::LpPlusUncountable) return FactStatus::Fails;
            if (any || p.has_tag("strictly-positive")) return FactStatus::Holds;
            if (zero || member == FactStatus::Fails) return FactStatus::Fails;
            return FactStatus::Unknown;
        }
        case CatalogId::DualUnitBall:
            if (any || zero) return FactStatus::Holds;
            return FactStatus::Unknown;
        case CatalogId::SubspaceC:
        case CatalogId::SubspaceS:
        case CatalogId::KernelOfFunctional:
        case CatalogId::GeneralClosedSubspace: {
            if (!(any || zero)) return FactStatus::Unknown;
            if (!k) return FactStatus::Holds;
            const bool whole = atom->atom == CatalogId::GeneralClosedSubspace && atom->whole;
            const bool dense = atom->atom == CatalogId::GeneralClosedSubspace && atom->dense;
            if (whole) return FactStatus::Holds;
            switch (*k) {
                case Notion::Qri:
                case Notion::Icr: return FactStatus::Holds;
                case Notion::Sqri: return dense ? FactStatus::Fails : FactStatus::Holds;
                case Notion::Qi: return dense ? FactStatus::Holds : FactStatus::Fails;
                case Notion::Core:
                case Notion::Int: return FactStatus::Fails;
            }
        }
    }
    return FactStatus::Unknown;
}

// ================================================================ rules

namespace {

Query make_query(std::optional<Notion> k, Point p, const SetExpr& s) {
    return Query{k, std::move(p), normalize(s)};
}

Derivation derive(FactStatus conclusion, std::vector<std::pair<Query, FactStatus>> premises, std::string detail = {}) {
    return Derivation{std::move(premises), conclusion, std::move(detail)};
}

std::vector<Point> candidate_points(const SetExpr& s, const InferenceOptions& opt) {
    std::vector<Point> out{Point::zero()};
    for (const auto& f : opt.facts) {
        if (f.point.is_any() || f.point.is_zero()) continue;
        if (normalize(f.set)->key != s->key) continue;
        if (std::none_of(out.begin(), out.end(), [&](const Point& p) { return p == f.point; })) out.push_back(f.point);
    }
    return out;
}

// Distinctness of two points when it can be decided.
std::optional<bool> same_point(const Point& a, const Point& b) {
    if (a == b) return true;
    try {
        Point diff = a - b;
        if (diff.is_zero()) return true;
        if (diff.is_numeric() || diff.has_tag("nonzero")) return false;
    } catch (const MalformedExpression&) {
    }
    return std::nullopt;
}

const std::pair<Notion, Notion> kChain[] = {{Notion::Int, Notion::Core}, {Notion::Core, Notion::Sqri},
                                            {Notion::Sqri, Notion::Icr}, {Notion::Icr, Notion::Qri},
                                            {Notion::Core, Notion::Qi},  {Notion::Qi, Notion::Qri}};

std::vector<Derivation> chain_rule(const Query& q, const InferenceOptions&) {
    std::vector<Derivation> out;
    if (!q.notion) {
        out.push_back(derive(FactStatus::Holds, {{make_query(Notion::Qri, q.point, q.set), FactStatus::Holds}}));
        return out;
    }
    for (const auto& [strong, weak] : kChain) {
        if (weak == *q.notion)
            out.push_back(derive(FactStatus::Holds, {{make_query(strong, q.point, q.set), FactStatus::Holds}}));
        if (strong == *q.notion)
            out.push_back(derive(FactStatus::Fails, {{make_query(weak, q.point, q.set), FactStatus::Fails}}));
    }
    out.push_back(derive(FactStatus::Fails, {{make_query(std::nullopt, q.point, q.set), FactStatus::Fails}}));
    return out;
}

std::vector<Derivation> collapse_rule(const Query& q, const InferenceOptions&) {
    std::vector<Derivation> out;
    if (!q.notion || !q.set->space.finite_dim()) return out;
    const std::vector<Notion> full{Notion::Int, Notion::Core, Notion::Qi};
    const std::vector<Notion> rel{Notion::Sqri, Notion::Icr, Notion::Qri};
    const auto& group = std::count(full.begin(), full.end(), *q.notion) ? full : rel;
    for (Notion other : group) {
        if (other == *q.notion) continue;
        for (FactStatus s : {FactStatus::Holds, FactStatus::Fails})
            out.push_back(derive(s, {{make_query(other, q.point, q.set), s}}));
    }
    return out;
}

std::vector<Derivation> qi_nonempty_rule(const Query& q, const InferenceOptions&) {
    std::vector<Derivation> out;
    if (!q.notion || q.point.is_any()) return out;
    Query some_qi = make_query(Notion::Qi, Point::any(), q.set);
    if (*q.notion == Notion::Qi)
        out.push_back(derive(FactStatus::Holds, {{some_qi, FactStatus::Holds},
                                                 {make_query(Notion::Qri, q.point, q.set), FactStatus::Holds}}));
    if (*q.notion == Notion::Qri)
        out.push_back(derive(FactStatus::Fails, {{some_qi, FactStatus::Holds},
                                                 {make_query(Notion::Qi, q.point, q.set), FactStatus::Fails}}));
    return out;
}

// The operand X when s is X - X after normalization.
std::optional<SetExpr> difference_base(const SetExpr& s) {
    if (s->kind != SetKind::MinkSum) return std::nullopt;
    const SetExpr& a = s->args[0];
    const SetExpr& b = s->args[1];
    if (normalize(neg_set(a))->key == b->key) return a;
    if (normalize(neg_set(b))->key == a->key) return b;
    return std::nullopt;
}

std::vector<Derivation> difference_rule(const Query& q, const InferenceOptions& opt) {
    std::vector<Derivation> out;
    if (q.notion != Notion::Qi) return out;
    Query diff_qi = make_query(Notion::Qi, Point::zero(), mink_diff(q.set, q.set));
    if (q.point.is_any()) {
        out.push_back(derive(FactStatus::Fails, {{diff_qi, FactStatus::Fails}}));
    } else {
        Query qri = make_query(Notion::Qri, q.point, q.set);
        out.push_back(derive(FactStatus::Holds, {{qri, FactStatus::Holds}, {diff_qi, FactStatus::Holds}}));
        out.push_back(derive(FactStatus::Fails, {{qri, FactStatus::Holds}, {diff_qi, FactStatus::Fails}}));
    }
    if (q.point.is_zero()) {
        if (auto base = difference_base(q.set)) {
            out.push_back(derive(FactStatus::Holds, {{make_query(Notion::Qi, Point::any(), *base), FactStatus::Holds}}));
            for (const Point& c : candidate_points(*base, opt))
                out.push_back(derive(FactStatus::Fails, {{make_query(Notion::Qri, c, *base), FactStatus::Holds},
                                                         {make_query(Notion::Qi, c, *base), FactStatus::Fails}}));
        }
    }
    return out;
}

std::vector<Derivation> wildcard_rule(const Query& q, const InferenceOptions& opt) {
    std::vector<Derivation> out;
    if (q.point.is_any()) {
        for (const Point& c : candidate_points(q.set, opt))
            out.push_back(derive(FactStatus::Holds, {{make_query(q.notion, c, q.set), FactStatus::Holds}}));
    } else {
        out.push_back(derive(FactStatus::Fails, {{make_query(q.notion, Point::any(), q.set), FactStatus::Fails}}));
    }
    return out;
}

std::vector<Derivation> equivalent(const Query& target) {
    return {derive(FactStatus::Holds, {{target, FactStatus::Holds}}),
            derive(FactStatus::Fails, {{target, FactStatus::Fails}})};
}

std::vector<Derivation> negation_rule(const Query& q, const InferenceOptions&) {
    if (q.set->kind != SetKind::Neg) return {};
    return equivalent(make_query(q.notion, -q.point, q.set->args[0]));
}

std::vector<Derivation> scaling_rule(const Query& q, const InferenceOptions&) {
    if (q.set->kind != SetKind::Scale || q.set->scalar == 0) return {};
    return equivalent(make_query(q.notion, q.point.scaled(Rational(1) / q.set->scalar), q.set->args[0]));
}

std::vector<Derivation> translation_rule(const Query& q, const InferenceOptions&) {
    if (q.set->kind != SetKind::Translate) return {};
    return equivalent(make_query(q.notion, q.point - q.set->point, q.set->args[0]));
}

std::vector<Derivation> whole_rule(const Query& q, const InferenceOptions&) {
    if (q.set->kind != SetKind::Whole) return {};
    return {derive(FactStatus::Holds, {})};
}

std::vector<Derivation> singleton_rule(const Query& q, const InferenceOptions&) {
    if (q.set->kind != SetKind::Singleton) return {};
    const bool point_space = q.set->space.finite_dim() && q.set->space.total_dim() == 0;
    auto at_point = [&]() {
        if (!q.notion || point_space) return FactStatus::Holds;
        switch (*q.notion) {
            case Notion::Qri:
            case Notion::Icr:
            case Notion::Sqri: return FactStatus::Holds;
            default: return FactStatus::Fails;
        }
    };
    if (q.point.is_any()) return {derive(at_point(), {})};
    auto same = same_point(q.point, q.set->point);
    if (!same) return {};
    return {derive(*same ? at_point() : FactStatus::Fails, {})};
}

std::vector<Derivation> catalog_rule(const Query& q, const InferenceOptions&) {
    FactStatus s = catalog_fact(q.set, q.notion, q.point);
    if (s == FactStatus::Unknown) return {};
    return {derive(s, {})};
}

std::vector<Derivation> subspace_rule(const Query& q, const InferenceOptions&) {
    if (!(q.point.is_zero() || q.point.is_any())) return {};
    if (q.set->kind == SetKind::Catalog || is_numeric(q.set)) return {};
    if (is_subspace(q.set) != FactStatus::Holds) return {};
    if (!q.notion) return {derive(FactStatus::Holds, {})};
    switch (*q.notion) {
        case Notion::Qri:
        case Notion::Icr: return {derive(FactStatus::Holds, {})};
        case Notion::Sqri: {
            FactStatus c = is_closed(q.set);
            if (c == FactStatus::Unknown) return {};
            return {derive(c, {}, "cone of a subspace is the subspace itself")};
        }
        default: return {};
    }
}

std::unordered_map<std::string, Polyhedron>& poly_cache() {
    static std::unordered_map<std::string, Polyhedron> cache;
    return cache;
}

const Polyhedron& materialized(const SetExpr& s) {
    auto& cache = poly_cache();
    auto it = cache.find(s->key);
    if (it == cache.end()) it = cache.emplace(s->key, realize(s).materialize()).first;
    return it->second;
}

std::vector<Derivation> numeric_rule(const Query& q, const InferenceOptions&) {
    if (!is_numeric(q.set)) return {};
    if (!(q.point.is_any() || q.point.is_numeric() || q.point.is_zero())) return {};
    const Polyhedron& P = materialized(q.set);
    const Eigen::Index n = P.n;
    auto verdict = [](bool b) { return b ? FactStatus::Holds : FactStatus::Fails; };
    if (q.point.is_any()) {
        if (is_empty(P)) return {derive(FactStatus::Fails, {}, "empty polyhedron")};
        if (!q.notion) return {derive(FactStatus::Holds, {}, "nonempty polyhedron")};
        switch (*q.notion) {
            case Notion::Int:
            case Notion::Core:
            case Notion::Qi:
                return {derive(verdict(affine_hull(P).dimension() == n), {}, "dimension of the affine hull")};
            default: return {derive(FactStatus::Holds, {}, "nonempty polyhedra have a relative interior")};
        }
    }
    Vector x = to_vector(q.point, n);
    if (!q.notion) return {derive(verdict(P.contains(x)), {}, "direct membership test")};
    return {derive(verdict(zero_in(*q.notion, translate(P, -x))), {}, "LP test on the normal cone")};
}

std::vector<Derivation> declared_rule(const Query& q, const InferenceOptions& opt) {
    std::vector<Derivation> out;
    for (const auto& f : opt.facts) {
        if (f.notion != q.notion || !(f.point == q.point)) continue;
        if (normalize(f.set)->key != q.set->key) continue;
        out.push_back(derive(f.status, {}, (f.external ? "external: " : "") + f.citation));
    }
    return out;
}

bool full_notion(const std::optional<Notion>& k) {
    return k && (*k == Notion::Int || *k == Notion::Core || *k == Notion::Qi);
}

std::vector<Derivation> monotone_rule(const Query& q, const InferenceOptions&) {
    std::vector<Derivation> out;
    const SetExpr& s = q.set;
    const bool grows = s->kind == SetKind::Closure || s->kind == SetKind::ConeHull ||
                       s->kind == SetKind::HullWithOrigin;
    if (grows && (full_notion(q.notion) || !q.notion))
        out.push_back(derive(FactStatus::Holds, {{make_query(q.notion, q.point, s->args[0]), FactStatus::Holds}}));
    if (s->kind == SetKind::Intersection) {
        std::vector<SetExpr> ops;
        flatten(s, SetKind::Intersection, ops);
        if (full_notion(q.notion) || !q.notion)
            for (const auto& a : ops)
                out.push_back(derive(FactStatus::Fails, {{make_query(q.notion, q.point, a), FactStatus::Fails}}));
        if (!q.notion || q.notion == Notion::Int || q.notion == Notion::Core) {
            std::vector<std::pair<Query, FactStatus>> all;
            for (const auto& a : ops) all.emplace_back(make_query(q.notion, q.point, a), FactStatus::Holds);
            out.push_back(derive(FactStatus::Holds, std::move(all)));
        }
    }
    if (s->kind == SetKind::MinkSum && (full_notion(q.notion) || !q.notion)) {
        for (int side = 0; side < 2; ++side)
            out.push_back(derive(FactStatus::Holds,
                                 {{make_query(q.notion, q.point, s->args[side]), FactStatus::Holds},
                                  {make_query(std::nullopt, Point::zero(), s->args[1 - side]), FactStatus::Holds}}));
    }
    return out;
}

std::vector<Derivation> product_rule(const Query& q, const InferenceOptions&) {
    if (q.set->kind != SetKind::Product || !(q.point.is_zero() || q.point.is_any())) return {};
    Query a = make_query(q.notion, q.point, q.set->args[0]);
    Query b = make_query(q.notion, q.point, q.set->args[1]);
    return {derive(FactStatus::Holds, {{a, FactStatus::Holds}, {b, FactStatus::Holds}}),
            derive(FactStatus::Fails, {{a, FactStatus::Fails}}), derive(FactStatus::Fails, {{b, FactStatus::Fails}})};
}

std::vector<Rule> build_rules() {
    return {
        {"notion-chain", RuleKind::Definition,
         "int within core within sqri within icr within qri, core within qi within qri; every notion lies in the set",
         "inclusions among the six interiority notions", chain_rule},
        {"finite-dimensional-collapse", RuleKind::Lemma,
         "in finite dimensions int = core = qi and sqri = icr = qri", "finite-dimensional coincidence of the notions",
         collapse_rule},
        {"qi-nonempty", RuleKind::Lemma, "if qi(U) is nonempty then qi(U) = qri(U)",
         "quasi-interior versus quasi-relative interior", qi_nonempty_rule},
        {"difference-set", RuleKind::Lemma,
         "for x in qri(U): x in qi(U) iff 0 in qi(U - U); qi(U) nonempty iff 0 in qi(U - U)",
         "quasi-interior through the difference set", difference_rule},
        {"wildcard", RuleKind::Definition, "a witness point settles nonemptiness; emptiness refutes every point",
         "existential reading of the wildcard point", wildcard_rule},
        {"negation-symmetry", RuleKind::Symmetry, "p in k(-U) iff -p in k(U)", "linear isomorphism invariance",
         negation_rule},
        {"scaling-symmetry", RuleKind::Symmetry, "p in k(sU) iff p/s in k(U) for s != 0",
         "linear isomorphism invariance", scaling_rule},
        {"translation-symmetry", RuleKind::Symmetry, "p in k(U + a) iff p - a in k(U)", "translation invariance",
         translation_rule},
        {"whole-space", RuleKind::Definition, "every point is interior to the whole space", "definition",
         whole_rule},
        {"singleton", RuleKind::Definition,
         "a single point is its own relative interior and has empty interior unless the space is trivial",
         "definition", singleton_rule},
        {"catalog", RuleKind::Catalog, "tabulated facts for the catalogue sets", "catalogue of standard sets",
         catalog_rule},
        {"subspace", RuleKind::Lemma,
         "0 lies in qri and icr of a linear subspace, and in sqri exactly when the subspace is closed",
         "cones generated by subspaces", subspace_rule},
        {"polyhedral-test", RuleKind::Numeric, "exact LP decision for numeric polyhedra",
         "normal-cone characterization in finite dimensions", numeric_rule},
        {"declared-fact", RuleKind::Declared, "facts declared by the problem file", "problem file", declared_rule},
        {"monotonicity", RuleKind::Lemma,
         "int, core and qi grow with the set; int and core commute with finite intersections; "
         "interior plus a set containing 0 stays interior",
         "inclusion monotonicity", monotone_rule},
        {"product", RuleKind::Lemma, "normal cones of a product split into the product of normal cones",
         "products of convex sets", product_rule},
    };
}

// ================================================================ engine

class Engine {
public:
    explicit Engine(const InferenceOptions& opt) : opt_(opt) {
        for (const auto& r : rule_base()) rules_.push_back(&r);
        if (opt.shuffle_seed) {
            rng_.seed(*opt.shuffle_seed);
            std::shuffle(rules_.begin(), rules_.end(), rng_);
        }
    }

    Inference solve(const Query& root) {
        const std::size_t r = intern(root);
        explore();
        fixpoint();
        return {nodes_[r].status, provenance(r)};
    }

private:
    struct Deriv {
        const Rule* rule;
        Derivation d;
        std::vector<std::size_t> premise_ids;
    };
    struct Node {
        Query q;
        FactStatus status = FactStatus::Unknown;
        std::vector<Deriv> derivs;
        int chosen = -1;
    };

    const InferenceOptions& opt_;
    std::vector<const Rule*> rules_;
    std::mt19937 rng_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<Node> nodes_;
    std::deque<std::size_t> queue_;

    std::size_t intern(const Query& q) {
        const std::string k = q.key();
        if (auto it = index_.find(k); it != index_.end()) return it->second;
        nodes_.push_back(Node{q, FactStatus::Unknown, {}, -1});
        index_.emplace(k, nodes_.size() - 1);
        queue_.push_back(nodes_.size() - 1);
        return nodes_.size() - 1;
    }

    void explore() {
        while (!queue_.empty()) {
            const std::size_t id = queue_.front();
            queue_.pop_front();
            if (nodes_.size() > opt_.max_queries) continue;
            const Query q = nodes_[id].q;
            // The LP test is complete on numeric sets; other rules only add work there.
            const bool decisive = is_numeric(q.set) && (q.point.is_any() || q.point.is_numeric() || q.point.is_zero());
            for (const Rule* rule : rules_) {
                if (decisive && rule->kind != RuleKind::Numeric && rule->kind != RuleKind::Declared) continue;
                std::vector<Derivation> ds;
                try {
                    ds = rule->expand(q, opt_);
                } catch (const MalformedExpression&) {
                    continue;
                } catch (const RegimeError&) {
                    continue;
                }
                for (auto& d : ds) {
                    Deriv entry{rule, std::move(d), {}};
                    for (const auto& [pq, st] : entry.d.premises) entry.premise_ids.push_back(intern(pq));
                    nodes_[id].derivs.push_back(std::move(entry));
                }
            }
        }
    }

    bool applicable(const Deriv& d) const {
        for (std::size_t i = 0; i < d.premise_ids.size(); ++i)
            if (nodes_[d.premise_ids[i]].status != d.d.premises[i].second) return false;
        return true;
    }

    void fixpoint() {
        std::vector<std::size_t> order(nodes_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        if (opt_.shuffle_seed) std::shuffle(order.begin(), order.end(), rng_);
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t id : order) {
                Node& node = nodes_[id];
                for (std::size_t j = 0; j < node.derivs.size(); ++j) {
                    const Deriv& d = node.derivs[j];
                    if (!applicable(d)) continue;
                    if (node.status == FactStatus::Unknown) {
                        node.status = d.d.conclusion;
                        node.chosen = static_cast<int>(j);
                        changed = true;
                    } else if (node.status != d.d.conclusion) {
                        const Deriv& first = node.derivs[static_cast<std::size_t>(node.chosen)];
                        throw InconsistentFacts("'" + node.q.describe() + "' is derived as " +
                                                status_name(first.d.conclusion) + " by " + first.rule->id +
                                                " and as " + status_name(d.d.conclusion) + " by " + d.rule->id);
                    }
                }
            }
        }
    }

    Provenance provenance(std::size_t root) const {
        Provenance out;
        std::vector<bool> seen(nodes_.size(), false);
        visit(root, seen, out);
        return out;
    }

    void visit(std::size_t id, std::vector<bool>& seen, Provenance& out) const {
        if (seen[id]) return;
        seen[id] = true;
        const Node& node = nodes_[id];
        if (node.chosen < 0) return;
        const Deriv& d = node.derivs[static_cast<std::size_t>(node.chosen)];
        for (std::size_t p : d.premise_ids) visit(p, seen, out);
        ProvenanceStep step;
        step.rule = d.rule->id;
        step.citation = d.rule->citation;
        step.conclusion = node.q.key();
        step.status = node.status;
        for (std::size_t p : d.premise_ids) step.premises.push_back(nodes_[p].q.key());
        step.detail = d.d.detail.empty() ? node.q.describe() : node.q.describe() + " (" + d.d.detail + ")";
        step.query = node.q;
        out.push_back(std::move(step));
    }
};

}  // namespace

const std::vector<Rule>& rule_base() {
    static const std::vector<Rule> rules = build_rules();
    return rules;
}

Inference infer_query(const Query& q, const InferenceOptions& opt) {
    Engine e(opt);
    return e.solve(make_query(q.notion, q.point, q.set));
}

Inference infer(Notion k, const Point& p, const SetExpr& s, const InferenceOptions& opt) {
    return infer_query(Query{k, p, s}, opt);
}

Inference membership(const Point& p, const SetExpr& s, const InferenceOptions& opt) {
    return infer_query(Query{std::nullopt, p, s}, opt);
}

bool replay(const Provenance& prov, const InferenceOptions& opt) {
    std::unordered_map<std::string, FactStatus> settled;
    for (const auto& step : prov) {
        if (step.query) {
            const Rule* rule = nullptr;
            for (const auto& r : rule_base())
                if (r.id == step.rule) rule = &r;
            if (!rule || step.query->key() != step.conclusion) return false;
            bool ok = false;
            for (const auto& d : rule->expand(*step.query, opt)) {
                if (d.conclusion != step.status || d.premises.size() != step.premises.size()) continue;
                bool match = true;
                for (std::size_t i = 0; i < d.premises.size() && match; ++i) {
                    const std::string k = d.premises[i].first.key();
                    auto it = settled.find(k);
                    match = k == step.premises[i] && it != settled.end() && it->second == d.premises[i].second;
                }
                if (match) {
                    ok = true;
                    break;
                }
            }
            if (!ok) return false;
        } else {
            for (const auto& p : step.premises)
                if (!settled.count(p)) return false;
        }
        settled[step.conclusion] = step.status;
    }
    return true;
}

// ================================================================ lower-bound certificates

namespace {

std::optional<Rational> safe_lower_bound(const FunctionExpr& f) {
    try {
        return lower_bound(f);
    } catch (const RegimeError&) {
        return std::nullopt;
    } catch (const ImproperFunction&) {
        return std::nullopt;
    }
}

}  // namespace

Inference nonneg_certificate(const FunctionExpr& f, const FunctionExpr& g, const Rational& v) {
    Inference out;
    auto lf = safe_lower_bound(f);
    auto lg = safe_lower_bound(g);
    if (!lf || !lg || *lf + *lg < v) return out;
    out.status = FactStatus::Holds;
    ProvenanceStep step;
    step.rule = "lower-bound-certificate";
    step.citation = "separate lower bounds of the two summands";
    step.conclusion = "inf(f + g) >= " + to_string(v);
    step.status = FactStatus::Holds;
    step.detail = "inf f >= " + to_string(*lf) + " and inf g >= " + to_string(*lg);
    out.provenance.push_back(step);
    return out;
}

Inference lagrange_nonneg_certificate(const FunctionExpr& f, const SetExpr& S, const Rational& v) {
    Inference out;
    auto lb = safe_lower_bound(sum_fn(f, indicator(S)));
    if (!lb || *lb < v) return out;
    out.status = FactStatus::Holds;
    ProvenanceStep step;
    step.rule = "lower-bound-certificate";
    step.citation = "lower bound of the objective on the feasible set";
    step.conclusion = "inf over S of f >= " + to_string(v);
    step.status = FactStatus::Holds;
    step.detail = "inf (f + indicator of S) >= " + to_string(*lb);
    out.provenance.push_back(step);
    return out;
}

}  // namespace dualdiag
