#include "dualdiag/expr.hpp"

#include <algorithm>
#include <sstream>

namespace dualdiag {

std::string status_name(FactStatus s) {
    switch (s) {
        case FactStatus::Holds: return "holds";
        case FactStatus::Fails: return "fails";
        case FactStatus::Unknown: return "unknown";
    }
    return "unknown";
}

FactStatus parse_status(const std::string& s) {
    if (s == "holds") return FactStatus::Holds;
    if (s == "fails") return FactStatus::Fails;
    if (s == "unknown") return FactStatus::Unknown;
    throw ParseError("unknown status '" + s + "'");
}

// ---------------------------------------------------------------- spaces

SpaceTag SpaceTag::finite(Eigen::Index n) {
    SpaceTag t;
    t.kind = Kind::FiniteDim;
    t.dim = n;
    return t;
}

SpaceTag SpaceTag::sequence(Rational p) {
    if (p < 1) throw MalformedExpression("sequence space needs p >= 1");
    SpaceTag t;
    t.kind = Kind::Sequence;
    t.p = std::move(p);
    return t;
}

SpaceTag SpaceTag::uncountable(Rational p) {
    if (p < 1) throw MalformedExpression("sequence space needs p >= 1");
    SpaceTag t;
    t.kind = Kind::UncountableSequence;
    t.p = std::move(p);
    return t;
}

SpaceTag SpaceTag::banach(std::string label, bool frechet) {
    SpaceTag t;
    t.kind = Kind::Banach;
    t.label = std::move(label);
    t.frechet = frechet;
    return t;
}

SpaceTag SpaceTag::product(const SpaceTag& a, const SpaceTag& b) {
    SpaceTag t;
    t.kind = Kind::Product;
    t.factors = {a, b};
    t.frechet = a.frechet && b.frechet;
    return t;
}

bool SpaceTag::finite_dim() const {
    if (kind == Kind::FiniteDim) return true;
    if (kind != Kind::Product) return false;
    return std::all_of(factors.begin(), factors.end(), [](const SpaceTag& f) { return f.finite_dim(); });
}

Eigen::Index SpaceTag::total_dim() const {
    if (kind == Kind::FiniteDim) return dim;
    Eigen::Index n = 0;
    for (const auto& f : factors) n += f.total_dim();
    return n;
}

bool SpaceTag::is_hilbert_l2() const {
    return (kind == Kind::Sequence || kind == Kind::UncountableSequence) && p == 2;
}

std::string SpaceTag::key() const {
    switch (kind) {
        case Kind::FiniteDim: return "R^" + std::to_string(dim);
        case Kind::Sequence: return "l^" + to_string(p) + "(N)";
        case Kind::UncountableSequence: return "l^" + to_string(p) + "(R)";
        case Kind::Banach: return "banach(" + label + (frechet ? "" : ", nonfrechet") + ")";
        case Kind::Product: return "product(" + factors[0].key() + ", " + factors[1].key() + ")";
    }
    return "?";
}

// ---------------------------------------------------------------- points

Point Point::zero() { return Point{}; }

Point Point::any() {
    Point p;
    p.kind = Kind::Any;
    return p;
}

Point Point::numeric(Vector v) {
    Point p;
    p.kind = Kind::Numeric;
    p.coords = std::move(v);
    return p;
}

Point Point::atom(const std::string& name, std::set<std::string> tags) {
    Point p;
    p.terms[name] = Term{1, std::move(tags)};
    return p;
}

bool Point::is_zero() const {
    if (kind == Kind::Any) return false;
    if (kind == Kind::Numeric) return dualdiag::is_zero(coords);
    return terms.empty();
}

namespace {

std::set<std::string> close_tags(std::set<std::string> t) {
    if (t.count("strictly-positive")) t.insert({"nonneg", "nonzero"});
    if (t.count("strictly-negative")) t.insert({"nonpos", "nonzero"});
    if (t.count("zero")) t.insert({"nonneg", "nonpos"});
    return t;
}

std::set<std::string> flip_tags(const std::set<std::string>& t) {
    std::set<std::string> out;
    for (const auto& s : t) {
        if (s == "strictly-positive") out.insert("strictly-negative");
        else if (s == "strictly-negative") out.insert("strictly-positive");
        else if (s == "nonneg") out.insert("nonpos");
        else if (s == "nonpos") out.insert("nonneg");
        else out.insert(s);
    }
    return out;
}

}  // namespace

std::set<std::string> Point::tags() const {
    if (kind == Kind::Any) return {};
    if (is_zero()) return close_tags({"zero"});
    if (kind == Kind::Numeric) {
        bool pos = true, neg = true, nonneg = true, nonpos = true;
        for (Eigen::Index i = 0; i < coords.size(); ++i) {
            pos = pos && coords[i] > 0;
            neg = neg && coords[i] < 0;
            nonneg = nonneg && coords[i] >= 0;
            nonpos = nonpos && coords[i] <= 0;
        }
        std::set<std::string> t{"nonzero"};
        if (pos) t.insert("strictly-positive");
        if (neg) t.insert("strictly-negative");
        if (nonneg) t.insert("nonneg");
        if (nonpos) t.insert("nonpos");
        return close_tags(t);
    }
    if (terms.size() != 1) return {};
    const Term& only = terms.begin()->second;
    std::set<std::string> base = close_tags(only.tags);
    return only.coef < 0 ? flip_tags(base) : base;
}

Point Point::operator-() const { return scaled(-1); }

Point Point::scaled(const Rational& s) const {
    if (kind == Kind::Any) return *this;
    if (s == 0) return zero();
    Point out = *this;
    if (kind == Kind::Numeric) {
        out.coords = coords * s;
        return out;
    }
    for (auto& [name, term] : out.terms) term.coef *= s;
    return out;
}

Point Point::operator+(const Point& o) const {
    if (kind == Kind::Any || o.kind == Kind::Any) return any();
    if (is_zero() && kind != Kind::Numeric) return o;
    if (o.is_zero() && o.kind != Kind::Numeric) return *this;
    if (kind == Kind::Numeric && o.kind == Kind::Numeric) {
        if (coords.size() != o.coords.size()) throw MalformedExpression("point dimension mismatch");
        return numeric(coords + o.coords);
    }
    if (kind == Kind::Numeric && is_zero()) return o;
    if (o.kind == Kind::Numeric && o.is_zero()) return *this;
    if (kind == Kind::Numeric || o.kind == Kind::Numeric)
        throw MalformedExpression("cannot add numeric and symbolic points");
    Point out = *this;
    for (const auto& [name, term] : o.terms) {
        auto it = out.terms.find(name);
        if (it == out.terms.end()) {
            out.terms[name] = term;
        } else {
            it->second.coef += term.coef;
            if (it->second.coef == 0) out.terms.erase(it);
        }
    }
    return out;
}

std::string Point::key() const {
    if (kind == Kind::Any) return "any";
    if (kind == Kind::Numeric) return to_string(coords);
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [name, term] : terms) {
        Rational c = term.coef;
        if (first) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        Rational mag = c < 0 ? Rational(-c) : c;
        if (mag != 1) out += to_string(mag) + "*";
        out += name;
        first = false;
    }
    return out;
}

// ---------------------------------------------------------------- extended reals

ExtendedReal ExtendedReal::operator+(const ExtendedReal& o) const {
    if (kind == Kind::PlusInf || o.kind == Kind::PlusInf) return plus_inf();
    if (kind == Kind::MinusInf || o.kind == Kind::MinusInf) return minus_inf();
    return finite(value + o.value);
}

ExtendedReal ExtendedReal::operator-() const {
    if (kind == Kind::PlusInf) return minus_inf();
    if (kind == Kind::MinusInf) return plus_inf();
    return finite(-value);
}

bool ExtendedReal::operator<(const ExtendedReal& o) const {
    auto rank = [](Kind k) { return k == Kind::MinusInf ? 0 : k == Kind::Finite ? 1 : 2; };
    if (rank(kind) != rank(o.kind)) return rank(kind) < rank(o.kind);
    return kind == Kind::Finite && value < o.value;
}

bool ExtendedReal::operator==(const ExtendedReal& o) const {
    return kind == o.kind && (kind != Kind::Finite || value == o.value);
}

std::string ExtendedReal::str() const {
    if (kind == Kind::PlusInf) return "+inf";
    if (kind == Kind::MinusInf) return "-inf";
    return to_string(value);
}

ExtendedReal ExtendedReal::parse(const std::string& s) {
    if (s == "+inf" || s == "inf") return plus_inf();
    if (s == "-inf") return minus_inf();
    return finite(parse_rational(s));
}

// ---------------------------------------------------------------- key helpers

namespace {

std::string poly_key(const Polyhedron& P) {
    std::ostringstream os;
    os << "poly(" << P.n;
    auto row = [&](const auto& r, const char* rel, const Rational& rhs) {
        os << ";";
        for (Eigen::Index j = 0; j < P.n; ++j) os << " " << to_string(r(j));
        os << " " << rel << " " << to_string(rhs);
    };
    for (Eigen::Index i = 0; i < P.A.rows(); ++i) row(P.A.row(i), "<=", P.b[i]);
    for (Eigen::Index i = 0; i < P.E.rows(); ++i) row(P.E.row(i), "=", P.d[i]);
    os << ")";
    return os.str();
}

std::string matrix_key(const Matrix& M) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        if (i) out += ", ";
        out += "[";
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j) out += ", ";
            out += to_string(M(i, j));
        }
        out += "]";
    }
    return out + "]";
}

void require_same_space(const SpaceTag& a, const SpaceTag& b, const char* what) {
    if (!(a == b))
        throw MalformedExpression(std::string(what) + ": space mismatch between " + a.key() + " and " +
                                  b.key());
}

std::shared_ptr<SetNode> set_node(SetKind k, SpaceTag space) {
    auto n = std::make_shared<SetNode>();
    n->kind = k;
    n->space = std::move(space);
    return n;
}

std::shared_ptr<FnNode> fn_node(FnKind k, SpaceTag space) {
    auto n = std::make_shared<FnNode>();
    n->kind = k;
    n->space = std::move(space);
    n->convex = {FactStatus::Holds, "every constructor preserves convexity"};
    return n;
}

Attribute holds(std::string why) { return {FactStatus::Holds, std::move(why)}; }

FactStatus both(FactStatus a, FactStatus b) {
    if (a == FactStatus::Holds && b == FactStatus::Holds) return FactStatus::Holds;
    return FactStatus::Unknown;
}

void check_point_space(const Point& p, const SpaceTag& s) {
    if (p.is_numeric()) {
        if (!s.finite_dim() || p.coords.size() != s.total_dim())
            throw MalformedExpression("point " + p.key() + " does not live in " + s.key());
    }
}

}  // namespace

std::string catalog_name(CatalogId id) {
    switch (id) {
        case CatalogId::LpPlus: return "lp-plus";
        case CatalogId::LpPlusUncountable: return "lp-plus-r";
        case CatalogId::SubspaceC: return "subspace-c";
        case CatalogId::SubspaceS: return "subspace-s";
        case CatalogId::KernelOfFunctional: return "kernel";
        case CatalogId::DualUnitBall: return "dual-ball";
        case CatalogId::GeneralClosedSubspace: return "closed-subspace";
    }
    return "?";
}

// ---------------------------------------------------------------- set factories

SetExpr poly_set(Polyhedron P) {
    auto n = set_node(SetKind::Poly, SpaceTag::finite(P.n));
    n->key = poly_key(P);
    n->poly = std::move(P);
    return n;
}

SetExpr catalog_set(CatalogId id, SpaceTag space, bool dense, bool whole) {
    switch (id) {
        case CatalogId::LpPlus:
        case CatalogId::SubspaceC:
        case CatalogId::SubspaceS:
            if (space.kind != SpaceTag::Kind::Sequence)
                throw MalformedExpression(catalog_name(id) + " lives in a sequence space l^p(N)");
            break;
        case CatalogId::LpPlusUncountable:
            if (space.kind != SpaceTag::Kind::UncountableSequence)
                throw MalformedExpression("lp-plus-r lives in l^p(R)");
            break;
        default:
            if (space.finite_dim()) throw MalformedExpression(catalog_name(id) + " needs an infinite-dimensional space");
    }
    if (whole && !dense) throw MalformedExpression("a whole subspace is dense");
    auto n = set_node(SetKind::Catalog, std::move(space));
    n->atom = id;
    n->dense = dense;
    n->whole = whole;
    n->key = catalog_name(id);
    if (id == CatalogId::GeneralClosedSubspace)
        n->key += std::string("(") + (dense ? "dense" : "nondense") + ", " + (whole ? "whole" : "proper") + ")";
    return n;
}

SetExpr abstract_set(std::string label, SpaceTag space, bool closed) {
    auto n = set_node(SetKind::Abstract, std::move(space));
    n->label = label;
    n->closed_flag = closed;
    n->key = "abstract(" + label + (closed ? ", closed" : "") + ")";
    return n;
}

SetExpr whole_set(SpaceTag space) {
    auto n = set_node(SetKind::Whole, std::move(space));
    n->key = "whole";
    return n;
}

SetExpr singleton(Point p, SpaceTag space) {
    check_point_space(p, space);
    if (p.is_any()) throw MalformedExpression("singleton of the wildcard point");
    auto n = set_node(SetKind::Singleton, std::move(space));
    n->key = "{" + p.key() + "}";
    n->point = std::move(p);
    return n;
}

SetExpr neg_set(SetExpr s) {
    auto n = set_node(SetKind::Neg, s->space);
    n->key = "neg(" + s->key + ")";
    n->args = {std::move(s)};
    return n;
}

SetExpr scale_set(Rational r, SetExpr s) {
    auto n = set_node(SetKind::Scale, s->space);
    n->key = "scale(" + to_string(r) + ", " + s->key + ")";
    n->scalar = std::move(r);
    n->args = {std::move(s)};
    return n;
}

SetExpr translate_set(SetExpr s, Point a) {
    check_point_space(a, s->space);
    if (a.is_any()) throw MalformedExpression("translation by the wildcard point");
    auto n = set_node(SetKind::Translate, s->space);
    n->key = "translate(" + s->key + ", " + a.key() + ")";
    n->point = std::move(a);
    n->args = {std::move(s)};
    return n;
}

SetExpr mink_sum(SetExpr a, SetExpr b) {
    require_same_space(a->space, b->space, "sum");
    auto n = set_node(SetKind::MinkSum, a->space);
    n->key = "sum(" + a->key + ", " + b->key + ")";
    n->args = {std::move(a), std::move(b)};
    return n;
}

SetExpr mink_diff(SetExpr a, SetExpr b) { return mink_sum(std::move(a), neg_set(std::move(b))); }

SetExpr product_set(SetExpr a, SetExpr b) {
    auto n = set_node(SetKind::Product, SpaceTag::product(a->space, b->space));
    n->key = "product(" + a->key + ", " + b->key + ")";
    n->args = {std::move(a), std::move(b)};
    return n;
}

SetExpr intersect_set(SetExpr a, SetExpr b) {
    require_same_space(a->space, b->space, "intersect");
    auto n = set_node(SetKind::Intersection, a->space);
    n->key = "intersect(" + a->key + ", " + b->key + ")";
    n->args = {std::move(a), std::move(b)};
    return n;
}

namespace {
SetExpr unary(SetKind k, const char* name, SetExpr s) {
    auto n = set_node(k, s->space);
    n->key = std::string(name) + "(" + s->key + ")";
    n->args = {std::move(s)};
    return n;
}
}  // namespace

SetExpr cone_hull(SetExpr s) { return unary(SetKind::ConeHull, "cone", std::move(s)); }
SetExpr hull_with_origin(SetExpr s) { return unary(SetKind::HullWithOrigin, "hull0", std::move(s)); }
SetExpr closure_set(SetExpr s) { return unary(SetKind::Closure, "closure", std::move(s)); }
SetExpr polar_cone(SetExpr s) { return unary(SetKind::PolarCone, "polar", std::move(s)); }

SetExpr image_set(MapExpr m, SetExpr s) {
    require_same_space(m->from, s->space, "image");
    auto n = set_node(SetKind::Image, m->to);
    n->key = "image(" + m->key + ", " + s->key + ")";
    n->map = std::move(m);
    n->args = {std::move(s)};
    return n;
}

SetExpr preimage_set(MapExpr m, SetExpr s) {
    require_same_space(m->to, s->space, "preimage");
    auto n = set_node(SetKind::Preimage, m->from);
    n->key = "preimage(" + m->key + ", " + s->key + ")";
    n->map = std::move(m);
    n->args = {std::move(s)};
    return n;
}

SetExpr epi_diff_node(FunctionExpr f, FunctionExpr g, Rational v) {
    require_same_space(f->space, g->space, "epidiff");
    auto n = set_node(SetKind::EpiDiff, SpaceTag::product(f->space, SpaceTag::finite(1)));
    n->key = "epidiff(" + f->key + ", " + g->key + ", " + to_string(v) + ")";
    n->level = std::move(v);
    n->fns = {std::move(f), std::move(g)};
    return n;
}

SetExpr conic_ext_node(FunctionExpr f, SetExpr S, MapExpr g, SetExpr C, Rational v) {
    require_same_space(f->space, S->space, "conicext");
    require_same_space(f->space, g->from, "conicext");
    require_same_space(g->to, C->space, "conicext");
    auto n = set_node(SetKind::ConicExt, SpaceTag::product(g->to, SpaceTag::finite(1)));
    n->key = "conicext(" + f->key + ", " + S->key + ", " + g->key + ", " + C->key + ", " + to_string(v) + ")";
    n->level = std::move(v);
    n->fns = {std::move(f)};
    n->args = {std::move(S), std::move(C)};
    n->map = std::move(g);
    return n;
}

SetExpr domain_of(FunctionExpr f) {
    auto n = set_node(SetKind::DomainOf, f->space);
    n->key = "dom(" + f->key + ")";
    n->fns = {std::move(f)};
    return n;
}

// ---------------------------------------------------------------- function factories

bool finite_everywhere(const FunctionExpr& f) {
    switch (f->kind) {
        case FnKind::Affine:
        case FnKind::Norm:
        case FnKind::SupOfAffine: return true;
        case FnKind::PlusConst:
        case FnKind::ArgTranslate: return finite_everywhere(f->args[0]);
        case FnKind::Sum: return finite_everywhere(f->args[0]) && finite_everywhere(f->args[1]);
        default: return false;
    }
}

FunctionExpr affine_fn(Point c, Rational alpha, SpaceTag space) {
    check_point_space(c, space);
    if (c.is_any()) throw MalformedExpression("affine slope cannot be the wildcard point");
    auto n = fn_node(FnKind::Affine, std::move(space));
    n->key = "affine(" + c.key() + ", " + to_string(alpha) + ")";
    n->coeff = std::move(c);
    n->constant = std::move(alpha);
    n->proper = holds("affine functions are finite");
    n->lsc = holds("continuous linear part");
    return n;
}

FunctionExpr indicator(SetExpr s) {
    auto n = fn_node(FnKind::Indicator, s->space);
    n->key = "indicator(" + s->key + ")";
    FactStatus c = is_closed(s);
    n->lsc = {c, c == FactStatus::Holds ? "indicator of a closed set" : "closedness of the set not established"};
    switch (s->kind) {
        case SetKind::Catalog:
        case SetKind::Abstract:
        case SetKind::Whole:
        case SetKind::Singleton: n->proper = holds("indicator of a nonempty set"); break;
        case SetKind::Poly:
            n->proper = is_empty(s->poly) ? Attribute{FactStatus::Fails, "indicator of the empty set"}
                                          : holds("indicator of a nonempty polyhedron");
            break;
        default: break;
    }
    n->set = std::move(s);
    return n;
}

FunctionExpr norm_fn(NormKind k, SpaceTag space) {
    auto n = fn_node(FnKind::Norm, std::move(space));
    n->norm = k;
    n->key = k == NormKind::L1 ? "norm1" : k == NormKind::L2 ? "norm2" : "norminf";
    n->proper = holds("norms are finite");
    n->lsc = holds("norms are continuous");
    return n;
}

FunctionExpr sup_of_affine(std::vector<std::pair<Vector, Rational>> pieces) {
    if (pieces.empty()) throw MalformedExpression("maxaffine needs at least one piece");
    const Eigen::Index dim = pieces.front().first.size();
    auto n = fn_node(FnKind::SupOfAffine, SpaceTag::finite(dim));
    n->key = "maxaffine(";
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (pieces[i].first.size() != dim) throw MalformedExpression("maxaffine pieces differ in dimension");
        if (i) n->key += ", ";
        n->key += "[" + to_string(pieces[i].first) + ", " + to_string(pieces[i].second) + "]";
    }
    n->key += ")";
    n->pieces = std::move(pieces);
    n->proper = holds("finite maximum of affine functions");
    n->lsc = holds("finite maximum of affine functions");
    return n;
}

FunctionExpr sum_fn(FunctionExpr a, FunctionExpr b) {
    require_same_space(a->space, b->space, "sum");
    auto n = fn_node(FnKind::Sum, a->space);
    n->key = "sum(" + a->key + ", " + b->key + ")";
    n->lsc = {both(a->lsc.status, b->lsc.status), "sum of lower semicontinuous functions"};
    if (a->proper.status == FactStatus::Holds && b->proper.status == FactStatus::Holds &&
        (finite_everywhere(a) || finite_everywhere(b)))
        n->proper = holds("proper plus a finite function");
    n->args = {std::move(a), std::move(b)};
    return n;
}

FunctionExpr inf_conv(FunctionExpr a, FunctionExpr b, bool exact) {
    require_same_space(a->space, b->space, "infconv");
    auto n = fn_node(FnKind::InfConv, a->space);
    n->key = "infconv(" + a->key + ", " + b->key + (exact ? ", exact" : "") + ")";
    n->exact = exact;
    if (is_numeric(a) && is_numeric(b)) n->lsc = holds("polyhedral infimal convolution");
    n->args = {std::move(a), std::move(b)};
    return n;
}

FunctionExpr arg_translate(FunctionExpr f, Point a) {
    check_point_space(a, f->space);
    auto n = fn_node(FnKind::ArgTranslate, f->space);
    n->key = "shift(" + f->key + ", " + a.key() + ")";
    n->proper = f->proper;
    n->lsc = f->lsc;
    n->shift = std::move(a);
    n->args = {std::move(f)};
    return n;
}

FunctionExpr precompose(MapExpr m, FunctionExpr f) {
    require_same_space(m->to, f->space, "compose");
    auto n = fn_node(FnKind::PrecomposeLinear, m->from);
    n->key = "compose(" + m->key + ", " + f->key + ")";
    n->lsc = f->lsc;
    if (finite_everywhere(f)) n->proper = f->proper;
    n->map = std::move(m);
    n->args = {std::move(f)};
    return n;
}

FunctionExpr plus_const(FunctionExpr f, Rational k) {
    auto n = fn_node(FnKind::PlusConst, f->space);
    n->key = "plus(" + f->key + ", " + to_string(k) + ")";
    n->proper = f->proper;
    n->lsc = f->lsc;
    n->constant = std::move(k);
    n->args = {std::move(f)};
    return n;
}

FunctionExpr conjugate_of(FunctionExpr f) {
    auto n = fn_node(FnKind::Conjugate, f->space);
    n->key = "conj(" + f->key + ")";
    n->lsc = holds("conjugates are lower semicontinuous");
    if (f->proper.status == FactStatus::Holds && f->convex.status == FactStatus::Holds &&
        f->lsc.status == FactStatus::Holds)
        n->proper = holds("conjugate of a proper convex lsc function");
    n->args = {std::move(f)};
    return n;
}

FunctionExpr support_fn(SetExpr s) {
    auto n = fn_node(FnKind::Support, s->space);
    n->key = "support(" + s->key + ")";
    n->lsc = holds("support functions are lower semicontinuous");
    FunctionExpr ind = indicator(s);
    if (ind->proper.status == FactStatus::Holds) n->proper = holds("support function of a nonempty set");
    n->set = std::move(s);
    return n;
}

std::string attr_name(FnAttr a) {
    switch (a) {
        case FnAttr::Proper: return "proper";
        case FnAttr::Convex: return "convex";
        case FnAttr::Lsc: return "lsc";
    }
    return "?";
}

FunctionExpr declare_attribute(FunctionExpr f, FnAttr which, FactStatus s, std::string reason) {
    auto n = std::make_shared<FnNode>(*f);
    Attribute a{s, "declared: " + reason};
    if (which == FnAttr::Proper) n->proper = a;
    if (which == FnAttr::Convex) n->convex = a;
    if (which == FnAttr::Lsc) n->lsc = a;
    return n;
}

const Attribute& attribute(const FunctionExpr& f, FnAttr which) {
    if (which == FnAttr::Proper) return f->proper;
    if (which == FnAttr::Convex) return f->convex;
    return f->lsc;
}

// ---------------------------------------------------------------- maps

MapExpr affine_map(Matrix M, Vector t) {
    if (t.size() != M.rows()) throw MalformedExpression("affine map offset has the wrong length");
    auto n = std::make_shared<MapNode>();
    n->kind = MapKind::Affine;
    n->from = SpaceTag::finite(M.cols());
    n->to = SpaceTag::finite(M.rows());
    n->key = "linear(" + matrix_key(M) + ", " + to_string(t) + ")";
    n->M = std::move(M);
    n->t = std::move(t);
    return n;
}

MapExpr identity_map(SpaceTag space) {
    auto n = std::make_shared<MapNode>();
    n->kind = MapKind::Identity;
    n->from = n->to = std::move(space);
    n->key = "identity";
    return n;
}

MapExpr negation_map(SpaceTag space) {
    auto n = std::make_shared<MapNode>();
    n->kind = MapKind::Negation;
    n->from = n->to = std::move(space);
    n->key = "negation";
    return n;
}

MapExpr shift_map(Point a, SpaceTag space) {
    check_point_space(a, space);
    auto n = std::make_shared<MapNode>();
    n->kind = MapKind::Shift;
    n->from = n->to = std::move(space);
    n->key = "shift(" + a.key() + ")";
    n->shift = std::move(a);
    return n;
}

MapExpr operator_map(std::string label, SpaceTag from, SpaceTag to) {
    auto n = std::make_shared<MapNode>();
    n->kind = MapKind::Operator;
    n->from = std::move(from);
    n->to = std::move(to);
    n->key = "operator(" + label + ")";
    n->label = std::move(label);
    return n;
}

std::optional<Point> apply_map(const MapExpr& m, const Point& p) {
    if (p.is_any()) return Point::any();
    switch (m->kind) {
        case MapKind::Identity: return p;
        case MapKind::Negation: return -p;
        case MapKind::Shift: return p + m->shift;
        case MapKind::Operator:
            if (p.is_zero()) return Point::zero();
            return std::nullopt;
        case MapKind::Affine:
            if (p.is_numeric()) return Point::numeric(m->M * p.coords + m->t);
            if (p.is_zero()) return Point::numeric(m->t);
            return std::nullopt;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- predicates

bool is_numeric(const MapExpr& m) {
    switch (m->kind) {
        case MapKind::Affine: return true;
        case MapKind::Identity:
        case MapKind::Negation: return m->from.finite_dim();
        case MapKind::Shift: return m->from.finite_dim() && (m->shift.is_numeric() || m->shift.is_zero());
        case MapKind::Operator: return false;
    }
    return false;
}

namespace {
bool numeric_point(const Point& p) { return p.is_numeric() || p.is_zero(); }
}  // namespace

bool is_numeric(const SetExpr& s) {
    if (!s->space.finite_dim()) return false;
    switch (s->kind) {
        case SetKind::Poly:
        case SetKind::Whole: return true;
        case SetKind::Catalog:
        case SetKind::Abstract: return false;
        case SetKind::Singleton:
        case SetKind::Translate:
            if (!numeric_point(s->point)) return false;
            break;
        default: break;
    }
    if (s->map && !is_numeric(s->map)) return false;
    for (const auto& a : s->args)
        if (!is_numeric(a)) return false;
    for (const auto& f : s->fns)
        if (!is_numeric(f)) return false;
    return true;
}

bool is_numeric(const FunctionExpr& f) {
    if (!f->space.finite_dim()) return false;
    switch (f->kind) {
        case FnKind::Affine: return numeric_point(f->coeff);
        case FnKind::Indicator:
        case FnKind::Support: return is_numeric(f->set);
        case FnKind::Norm: return f->norm != NormKind::L2;
        case FnKind::SupOfAffine: return true;
        case FnKind::ArgTranslate:
            if (!numeric_point(f->shift)) return false;
            break;
        case FnKind::PrecomposeLinear:
            if (!is_numeric(f->map)) return false;
            break;
        default: break;
    }
    for (const auto& a : f->args)
        if (!is_numeric(a)) return false;
    return true;
}

namespace {

FactStatus all_hold(const std::vector<SetExpr>& xs, FactStatus (*pred)(const SetExpr&)) {
    for (const auto& x : xs)
        if (pred(x) != FactStatus::Holds) return FactStatus::Unknown;
    return FactStatus::Holds;
}

bool linear_map(const MapExpr& m) {
    return m->kind == MapKind::Identity || m->kind == MapKind::Negation || m->kind == MapKind::Operator ||
           (m->kind == MapKind::Affine && is_zero(m->t)) || (m->kind == MapKind::Shift && m->shift.is_zero());
}

Polyhedron affine_hull_polyhedron(const Polyhedron& P) {
    AffineSubspace h = affine_hull(P);
    Polyhedron H(P.n);
    for (Eigen::Index i = 0; i < h.E.rows(); ++i) H.add_eq(h.E.row(i).transpose(), h.d[i]);
    return H;
}

}  // namespace

namespace {
// Cone hulls and hulls with the origin of a polyhedron need not be closed.
bool has_hull(const SetExpr& s) {
    if (s->kind == SetKind::ConeHull || s->kind == SetKind::HullWithOrigin) return true;
    return std::any_of(s->args.begin(), s->args.end(), has_hull);
}
}  // namespace

FactStatus is_closed(const SetExpr& s) {
    if (is_numeric(s) && !has_hull(s)) return FactStatus::Holds;
    switch (s->kind) {
        case SetKind::Poly:
        case SetKind::Whole:
        case SetKind::Singleton:
        case SetKind::Closure:
        case SetKind::PolarCone: return FactStatus::Holds;
        case SetKind::Catalog:
            if (s->atom == CatalogId::GeneralClosedSubspace && s->dense && !s->whole) return FactStatus::Fails;
            return FactStatus::Holds;
        case SetKind::Abstract: return s->closed_flag ? FactStatus::Holds : FactStatus::Unknown;
        case SetKind::Neg:
        case SetKind::Translate: return is_closed(s->args[0]);
        case SetKind::Scale: return s->scalar == 0 ? FactStatus::Holds : is_closed(s->args[0]);
        case SetKind::Product:
        case SetKind::Intersection: return all_hold(s->args, is_closed);
        case SetKind::MinkSum: {
            const auto& a = s->args[0];
            const auto& b = s->args[1];
            // compact + closed is closed (weak* compactness for the dual ball).
            if ((is_compact(a) == FactStatus::Holds && is_closed(b) == FactStatus::Holds) ||
                (is_compact(b) == FactStatus::Holds && is_closed(a) == FactStatus::Holds))
                return FactStatus::Holds;
            return FactStatus::Unknown;
        }
        default: return FactStatus::Unknown;
    }
}

FactStatus is_subspace(const SetExpr& s) {
    if (s->kind == SetKind::Poly || (is_numeric(s) && s->kind == SetKind::Whole)) {
        if (s->kind == SetKind::Whole) return FactStatus::Holds;
        const Polyhedron& P = s->poly;
        if (!P.contains(zeros(P.n))) return FactStatus::Fails;
        return same_set(P, affine_hull_polyhedron(P)) ? FactStatus::Holds : FactStatus::Fails;
    }
    switch (s->kind) {
        case SetKind::Catalog:
            return (s->atom == CatalogId::LpPlus || s->atom == CatalogId::LpPlusUncountable ||
                    s->atom == CatalogId::DualUnitBall)
                       ? FactStatus::Fails
                       : FactStatus::Holds;
        case SetKind::Whole: return FactStatus::Holds;
        case SetKind::Singleton:
            if (s->point.is_zero()) return FactStatus::Holds;
            return s->point.is_numeric() ? FactStatus::Fails : FactStatus::Unknown;
        case SetKind::Neg:
        case SetKind::Closure:
        case SetKind::ConeHull:
        case SetKind::PolarCone: return is_subspace(s->args[0]) == FactStatus::Holds ? FactStatus::Holds : FactStatus::Unknown;
        case SetKind::Scale:
            if (s->scalar == 0) return FactStatus::Holds;
            return is_subspace(s->args[0]);
        case SetKind::MinkSum:
        case SetKind::Intersection:
        case SetKind::Product: return all_hold(s->args, is_subspace);
        case SetKind::Image:
        case SetKind::Preimage:
            if (linear_map(s->map) && is_subspace(s->args[0]) == FactStatus::Holds) return FactStatus::Holds;
            return FactStatus::Unknown;
        default: return FactStatus::Unknown;
    }
}

FactStatus is_convex_cone(const SetExpr& s) {
    if (s->kind == SetKind::Poly) {
        const Polyhedron& P = s->poly;
        if (!P.contains(zeros(P.n))) return FactStatus::Fails;
        return same_set(P, closed_cone_hull(P)) ? FactStatus::Holds : FactStatus::Fails;
    }
    switch (s->kind) {
        case SetKind::Catalog: return s->atom == CatalogId::DualUnitBall ? FactStatus::Fails : FactStatus::Holds;
        case SetKind::Whole:
        case SetKind::ConeHull:
        case SetKind::PolarCone: return FactStatus::Holds;
        case SetKind::Singleton: return s->point.is_zero() ? FactStatus::Holds : FactStatus::Unknown;
        case SetKind::Neg:
        case SetKind::Closure:
        case SetKind::HullWithOrigin: return is_convex_cone(s->args[0]) == FactStatus::Holds ? FactStatus::Holds : FactStatus::Unknown;
        case SetKind::Scale:
            if (s->scalar == 0) return FactStatus::Holds;
            return is_convex_cone(s->args[0]);
        case SetKind::MinkSum:
        case SetKind::Intersection:
        case SetKind::Product: return all_hold(s->args, is_convex_cone);
        case SetKind::Image:
        case SetKind::Preimage:
            if (linear_map(s->map) && is_convex_cone(s->args[0]) == FactStatus::Holds) return FactStatus::Holds;
            return FactStatus::Unknown;
        default: return FactStatus::Unknown;
    }
}

FactStatus is_compact(const SetExpr& s) {
    switch (s->kind) {
        case SetKind::Catalog:
            return s->atom == CatalogId::DualUnitBall ? FactStatus::Holds : FactStatus::Fails;
        case SetKind::Singleton: return FactStatus::Holds;
        case SetKind::Poly: {
            const Polyhedron& P = s->poly;
            if (is_empty(P)) return FactStatus::Holds;
            for (Eigen::Index j = 0; j < P.n; ++j)
                for (Sense sense : {Sense::Minimize, Sense::Maximize})
                    if (is_unbounded(optimize(P, unit_vector(P.n, j), sense))) return FactStatus::Fails;
            return FactStatus::Holds;
        }
        case SetKind::Whole: return s->space.finite_dim() && s->space.total_dim() == 0 ? FactStatus::Holds : FactStatus::Fails;
        case SetKind::Neg:
        case SetKind::Translate:
        case SetKind::Scale: return is_compact(s->args[0]);
        default: return FactStatus::Unknown;
    }
}

}  // namespace dualdiag
