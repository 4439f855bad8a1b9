#include "dualdiag/problem.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace dualdiag {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '^' || c == '.';
}

// Recursive-descent reader over one expression string.
class Reader {
public:
    Reader(const std::string& text, const ParseScope& scope) : s_(text), scope_(scope) {}

    void finish() {
        skip();
        if (pos_ != s_.size()) fail("unexpected trailing text");
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what + " at column " + std::to_string(pos_ + 1) + " in '" + s_ + "'");
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool accept(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    bool accept_word(const std::string& w) {
        skip();
        if (s_.compare(pos_, w.size(), w) != 0) return false;
        const std::size_t end = pos_ + w.size();
        if (end < s_.size() && (ident_char(s_[end]) || s_[end] == '-')) return false;
        pos_ = end;
        return true;
    }

    // Names may contain inner hyphens ("lp-plus") but not a leading one.
    std::string ident() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (ident_char(c)) {
                ++pos_;
            } else if (c == '-' && pos_ > start && pos_ + 1 < s_.size() &&
                       std::isalpha(static_cast<unsigned char>(s_[pos_ + 1]))) {
                ++pos_;
            } else {
                break;
            }
        }
        if (pos_ == start) fail("expected a name");
        return s_.substr(start, pos_ - start);
    }

    Rational rational() {
        skip();
        std::size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/')) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') fail("decimal numbers are not accepted; write p/q");
        try {
            return parse_rational(s_.substr(start, pos_ - start));
        } catch (const std::exception&) {
            pos_ = start;
            fail("expected a rational");
        }
    }

    bool at_number() {
        skip();
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) return true;
        return (c == '-' || c == '+') && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]));
    }

    Vector vector() {
        expect('(');
        std::vector<Rational> xs;
        if (!accept(')')) {
            do xs.push_back(rational());
            while (accept(','));
            expect(')');
        }
        Vector v(static_cast<Eigen::Index>(xs.size()));
        for (std::size_t i = 0; i < xs.size(); ++i) v[static_cast<Eigen::Index>(i)] = xs[i];
        return v;
    }

    Matrix matrix() {
        expect('[');
        std::vector<std::vector<Rational>> rows;
        do {
            expect('[');
            rows.emplace_back();
            if (!accept(']')) {
                do rows.back().push_back(rational());
                while (accept(','));
                expect(']');
            }
        } while (accept(','));
        expect(']');
        const std::size_t cols = rows.front().size();
        Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) fail("ragged matrix");
            for (std::size_t j = 0; j < cols; ++j)
                M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
        return M;
    }

    Point point(const SpaceTag& space) {
        skip();
        if (peek('(')) {
            Point p = Point::numeric(vector());
            if (!space.finite_dim() || p.coords.size() != space.total_dim())
                fail("numeric point does not live in " + space.key());
            return p;
        }
        if (accept_word("any")) return Point::any();
        Point out = Point::zero();
        bool first = true;
        while (true) {
            skip();
            Rational sign = 1;
            if (!first) {
                if (accept('+')) {
                } else if (peek('-')) {
                    ++pos_;
                    sign = -1;
                } else {
                    break;
                }
            } else if (peek('-') && !at_number()) {
                ++pos_;
                sign = -1;
            }
            Rational coef = 1;
            bool has_atom = true;
            if (at_number()) {
                coef = rational();
                if (!accept('*')) has_atom = false;
            }
            if (has_atom) {
                std::string name = ident();
                auto it = scope_.atoms.find(name);
                if (it == scope_.atoms.end()) fail("undeclared point '" + name + "'");
                out = out + Point::atom(name, it->second).scaled(sign * coef);
            } else if (coef != 0) {
                fail("a bare number is not a point; write 0 or a vector (a, b)");
            }
            first = false;
        }
        return out;
    }

    SetExpr set(const SpaceTag& space) {
        skip();
        if (accept('{')) {
            Point p = point(space);
            expect('}');
            return singleton(p, space);
        }
        if (accept('@')) {
            std::string name = ident();
            auto it = scope_.refs.find(name);
            if (it == scope_.refs.end()) fail("unknown reference @" + name);
            return it->second;
        }
        const std::string name = ident();
        static const std::map<std::string, CatalogId> catalog{
            {"lp-plus", CatalogId::LpPlus},       {"lp-plus-r", CatalogId::LpPlusUncountable},
            {"subspace-c", CatalogId::SubspaceC}, {"subspace-s", CatalogId::SubspaceS},
            {"kernel", CatalogId::KernelOfFunctional}, {"dual-ball", CatalogId::DualUnitBall}};
        if (auto it = catalog.find(name); it != catalog.end()) return catalog_set(it->second, space);
        if (name == "whole") return whole_set(space);
        expect('(');
        SetExpr out;
        if (name == "poly") {
            out = poly_set(polyhedron(space));
        } else if (name == "closed-subspace") {
            std::string d = ident();
            expect(',');
            std::string w = ident();
            if ((d != "dense" && d != "nondense") || (w != "whole" && w != "proper"))
                fail("closed-subspace takes (dense|nondense, whole|proper)");
            out = catalog_set(CatalogId::GeneralClosedSubspace, space, d == "dense", w == "whole");
        } else if (name == "abstract") {
            std::string label = ident();
            bool closed = false;
            if (accept(',')) {
                if (ident() != "closed") fail("expected 'closed'");
                closed = true;
            }
            out = abstract_set(label, space, closed);
        } else if (name == "neg") {
            out = neg_set(set(space));
        } else if (name == "scale") {
            Rational r = rational();
            expect(',');
            out = scale_set(r, set(space));
        } else if (name == "translate") {
            SetExpr a = set(space);
            expect(',');
            out = translate_set(a, point(space));
        } else if (name == "sum" || name == "diff" || name == "intersect") {
            SetExpr a = set(space);
            expect(',');
            SetExpr b = set(space);
            out = name == "sum" ? mink_sum(a, b) : name == "diff" ? mink_diff(a, b) : intersect_set(a, b);
        } else if (name == "cone") {
            out = cone_hull(set(space));
        } else if (name == "hull0") {
            out = hull_with_origin(set(space));
        } else if (name == "closure") {
            out = closure_set(set(space));
        } else if (name == "polar") {
            out = polar_cone(set(space));
        } else if (name == "image") {
            MapExpr m = map(space, space);
            expect(',');
            out = image_set(m, set(m->from));
        } else if (name == "preimage") {
            MapExpr m = map(space, space);
            expect(',');
            out = preimage_set(m, set(m->to));
        } else if (name == "dom") {
            out = domain_of(function(space));
        } else {
            fail("unknown set form '" + name + "'");
        }
        expect(')');
        return out;
    }

    Polyhedron polyhedron(const SpaceTag& space) {
        Rational dim = rational();
        if (dim < 0 || denominator(dim) != 1) fail("poly dimension must be a natural number");
        const auto n = static_cast<Eigen::Index>(numerator(dim).convert_to<long>());
        if (space.finite_dim() && space.total_dim() != n) fail("poly dimension differs from the space " + space.key());
        Polyhedron P(n);
        while (accept(';')) {
            Vector a(n);
            for (Eigen::Index j = 0; j < n; ++j) a[j] = rational();
            skip();
            if (s_.compare(pos_, 2, "<=") == 0) {
                pos_ += 2;
                P.add_ineq(a, rational());
            } else if (accept('=')) {
                P.add_eq(a, rational());
            } else {
                fail("expected '<=' or '='");
            }
        }
        return P;
    }

    FunctionExpr function(const SpaceTag& space) {
        const std::string name = ident();
        if (name == "norm1") return norm_fn(NormKind::L1, space);
        if (name == "norm2") return norm_fn(NormKind::L2, space);
        if (name == "norminf") return norm_fn(NormKind::Linf, space);
        expect('(');
        FunctionExpr out;
        if (name == "affine") {
            Point c = point(space);
            expect(',');
            out = affine_fn(c, rational(), space);
        } else if (name == "indicator") {
            out = indicator(set(space));
        } else if (name == "support") {
            out = support_fn(set(space));
        } else if (name == "maxaffine") {
            std::vector<std::pair<Vector, Rational>> pieces;
            do {
                expect('[');
                Vector c = vector();
                expect(',');
                Rational a = rational();
                expect(']');
                pieces.emplace_back(std::move(c), std::move(a));
            } while (accept(','));
            out = sup_of_affine(std::move(pieces));
            if (!(out->space == space)) fail("maxaffine pieces do not live in " + space.key());
        } else if (name == "sum") {
            FunctionExpr a = function(space);
            expect(',');
            out = sum_fn(a, function(space));
        } else if (name == "infconv") {
            FunctionExpr a = function(space);
            expect(',');
            FunctionExpr b = function(space);
            bool exact = false;
            if (accept(',')) {
                if (ident() != "exact") fail("expected 'exact'");
                exact = true;
            }
            out = inf_conv(a, b, exact);
        } else if (name == "shift") {
            FunctionExpr f = function(space);
            expect(',');
            out = arg_translate(f, point(space));
        } else if (name == "compose") {
            MapExpr m = map(space, space);
            expect(',');
            out = precompose(m, function(m->to));
        } else if (name == "plus") {
            FunctionExpr f = function(space);
            expect(',');
            out = plus_const(f, rational());
        } else if (name == "conj") {
            out = conjugate_of(function(space));
        } else {
            fail("unknown function form '" + name + "'");
        }
        expect(')');
        return out;
    }

    MapExpr map(const SpaceTag& from, const SpaceTag& to) {
        const std::string name = ident();
        if (name == "identity") return identity_map(from);
        if (name == "negation") return negation_map(from);
        expect('(');
        MapExpr out;
        if (name == "linear") {
            Matrix M = matrix();
            expect(',');
            Vector t = vector();
            out = affine_map(M, t);
        } else if (name == "shift") {
            out = shift_map(point(from), from);
        } else if (name == "operator") {
            out = operator_map(ident(), from, to);
        } else {
            fail("unknown map form '" + name + "'");
        }
        expect(')');
        return out;
    }

private:
    std::string s_;
    const ParseScope& scope_;
    std::size_t pos_ = 0;
};

template <class T, class F>
T parse_whole(const std::string& text, const ParseScope& scope, F&& body) {
    Reader r(text, scope);
    try {
        T out = body(r);
        r.finish();
        return out;
    } catch (const MalformedExpression& e) {
        throw ParseError(std::string(e.what()) + " in '" + text + "'");
    }
}

// ------------------------------------------------------------ lines

struct Line {
    std::size_t number = 0;
    std::string key, value, citation;
};

[[noreturn]] void fail_at(const Line& l, const std::string& what) {
    throw ParseError("line " + std::to_string(l.number) + " (" + l.key + "): " + what);
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

std::optional<Notion> parse_notion_word(const std::string& w) {
    if (w == "member") return std::nullopt;
    return parse_notion(w);
}

std::string notion_word(const std::optional<Notion>& k) { return k ? notion_name(*k) : "member"; }

// "<notion|member> <point> in <set> <rest>" with the set ending at the last
// balanced parenthesis; returns the trailing words.
struct MembershipText {
    std::optional<Notion> notion;
    std::string point, set;
    std::vector<std::string> rest;
};

MembershipText split_membership(const Line& l, const std::string& text) {
    MembershipText m;
    std::istringstream is(text);
    std::string head;
    is >> head;
    try {
        m.notion = parse_notion_word(head);
    } catch (const std::exception&) {
        fail_at(l, "unknown notion '" + head + "'");
    }
    std::string remainder;
    std::getline(is, remainder);
    const std::size_t in = remainder.find(" in ");
    if (in == std::string::npos) fail_at(l, "expected '<point> in <set>'");
    m.point = trim(remainder.substr(0, in));
    std::string tail = trim(remainder.substr(in + 4));
    // The set expression is balanced; the trailing words follow it.
    int depth = 0;
    std::size_t end = 0;
    for (; end < tail.size(); ++end) {
        char c = tail[end];
        if (c == '(' || c == '{' || c == '[') ++depth;
        if (c == ')' || c == '}' || c == ']') --depth;
        if (depth == 0 && std::isspace(static_cast<unsigned char>(c))) break;
    }
    m.set = tail.substr(0, end);
    m.rest = words(tail.substr(end));
    return m;
}

const std::vector<std::string> kKeys{
    "id", "title", "kind", "regime", "space", "second-space", "point", "f", "g", "A", "S", "C", "phi", "x-dim",
    "flag", "attr", "primal", "dual", "primal-solution", "dual-solution", "fact", "rc8", "query", "expect",
    "expect-primal", "expect-dual", "expect-gap", "expect-verdict", "expect-primal-solution",
    "expect-dual-solution", "note"};

DeclaredValue parse_value(const Line& l) {
    auto w = words(l.value);
    if (w.empty() || w.size() > 2 || (w.size() == 2 && w[1] != "attained")) fail_at(l, "expected '<value> [attained]'");
    DeclaredValue v;
    try {
        v.value = ExtendedReal::parse(w[0]);
    } catch (const std::exception&) {
        fail_at(l, "bad extended real '" + w[0] + "'");
    }
    v.attained = w.size() == 2;
    v.citation = l.citation;
    return v;
}

std::string value_text(const DeclaredValue& v) { return v.value.str() + (v.attained ? " attained" : ""); }

FactStatus status_word(const Line& l, const std::string& w) {
    try {
        return parse_status(w);
    } catch (const std::exception&) {
        fail_at(l, "unknown status '" + w + "'");
    }
}

}  // namespace

SpaceTag parse_space(const std::string& text) {
    const std::string t = trim(text);
    auto bad = [&]() -> SpaceTag { throw ParseError("unknown space '" + t + "'"); };
    if (t.rfind("R^", 0) == 0) {
        try {
            return SpaceTag::finite(std::stol(t.substr(2)));
        } catch (const std::exception&) {
            return bad();
        }
    }
    if (t.rfind("l^", 0) == 0) {
        const std::size_t open = t.find('(');
        if (open == std::string::npos) return bad();
        Rational p = parse_rational(t.substr(2, open - 2));
        const std::string index = t.substr(open);
        if (index == "(N)") return SpaceTag::sequence(p);
        if (index == "(R)") return SpaceTag::uncountable(p);
        return bad();
    }
    if (t.rfind("banach(", 0) == 0 && t.back() == ')') {
        std::string inner = t.substr(7, t.size() - 8);
        const std::size_t comma = inner.find(',');
        if (comma == std::string::npos) return SpaceTag::banach(trim(inner));
        if (trim(inner.substr(comma + 1)) != "nonfrechet") return bad();
        return SpaceTag::banach(trim(inner.substr(0, comma)), false);
    }
    return bad();
}

Point parse_point(const std::string& text, const SpaceTag& space, const ParseScope& scope) {
    return parse_whole<Point>(text, scope, [&](Reader& r) { return r.point(space); });
}

SetExpr parse_set(const std::string& text, const SpaceTag& space, const ParseScope& scope) {
    return parse_whole<SetExpr>(text, scope, [&](Reader& r) { return r.set(space); });
}

FunctionExpr parse_function(const std::string& text, const SpaceTag& space, const ParseScope& scope) {
    return parse_whole<FunctionExpr>(text, scope, [&](Reader& r) { return r.function(space); });
}

MapExpr parse_map(const std::string& text, const SpaceTag& from, const SpaceTag& to, const ParseScope& scope) {
    return parse_whole<MapExpr>(text, scope, [&](Reader& r) { return r.map(from, to); });
}

ProblemFile parse_problem(const std::string& text) {
    std::vector<Line> lines;
    {
        std::istringstream is(text);
        std::string raw;
        std::size_t number = 0;
        while (std::getline(is, raw)) {
            ++number;
            std::string t = trim(raw);
            if (t.empty() || t[0] == '#') continue;
            const std::size_t colon = t.find(':');
            if (colon == std::string::npos) throw ParseError("line " + std::to_string(number) + ": expected 'key: value'");
            Line l;
            l.number = number;
            l.key = trim(t.substr(0, colon));
            std::string rest = t.substr(colon + 1);
            const std::size_t bar = rest.find(" | ");
            if (bar != std::string::npos) {
                l.citation = trim(rest.substr(bar + 3));
                rest = rest.substr(0, bar);
            }
            l.value = trim(rest);
            if (std::find(kKeys.begin(), kKeys.end(), l.key) == kKeys.end()) fail_at(l, "unknown key");
            lines.push_back(std::move(l));
        }
    }
    auto all = [&](const std::string& key) {
        std::vector<const Line*> out;
        for (const auto& l : lines)
            if (l.key == key) out.push_back(&l);
        return out;
    };
    auto one = [&](const std::string& key) -> const Line* {
        auto v = all(key);
        if (v.size() > 1) fail_at(*v[1], "duplicate key");
        return v.empty() ? nullptr : v.front();
    };
    auto need = [&](const std::string& key) -> const Line& {
        const Line* l = one(key);
        if (!l) throw ParseError("missing required key '" + key + "'");
        return *l;
    };

    ProblemFile p;
    p.id = need("id").value;
    if (const Line* l = one("title")) p.title = l->value;
    p.kind = need("kind").value;
    if (p.kind != "fenchel" && p.kind != "lagrange" && p.kind != "perturbation" && p.kind != "sets")
        fail_at(need("kind"), "kind must be fenchel, lagrange, perturbation or sets");
    p.regime = need("regime").value;
    if (p.regime != "numeric" && p.regime != "symbolic") fail_at(need("regime"), "regime must be numeric or symbolic");
    try {
        p.space = parse_space(need("space").value);
        if (const Line* l = one("second-space")) p.second_space = parse_space(l->value);
    } catch (const ParseError& e) {
        throw ParseError(std::string("space: ") + e.what());
    }

    ParseScope scope;
    for (const Line* l : all("point")) {
        auto w = words(l->value);
        if (w.empty()) fail_at(*l, "expected a point name");
        std::set<std::string> tags(w.begin() + 1, w.end());
        for (const auto& t : tags)
            if (t != "strictly-positive" && t != "strictly-negative" && t != "nonneg" && t != "nonpos" &&
                t != "nonzero")
                fail_at(*l, "unknown tag '" + t + "'");
        if (scope.atoms.count(w[0])) fail_at(*l, "point declared twice");
        scope.atoms[w[0]] = tags;
        p.atoms.emplace_back(w[0], tags);
    }

    auto wrap = [&](const Line& l, auto&& body) {
        try {
            return body();
        } catch (const ParseError& e) {
            fail_at(l, e.what());
        } catch (const MalformedExpression& e) {
            fail_at(l, e.what());
        }
    };

    const SpaceTag X = p.space;
    const SpaceTag Y = p.second_space.value_or(X);
    std::vector<std::string> instance_keys{"f", "g", "A", "S", "C", "phi", "x-dim", "primal", "dual",
                                           "primal-solution", "dual-solution", "rc8", "attr", "flag"};
    if (p.kind == "sets") {
        for (const auto& k : instance_keys)
            if (const Line* l = one(k)) fail_at(*l, "not allowed in a sets file");
        for (const Line* l : all("expect")) fail_at(*l, "sets files state expectations on query lines");
    } else {
        for (const Line* l : all("query")) fail_at(*l, "queries belong to sets files");
    }

    if (p.kind == "fenchel") {
        FunctionExpr f = wrap(need("f"), [&] { return parse_function(need("f").value, X, scope); });
        MapExpr A;
        if (const Line* l = one("A")) A = wrap(*l, [&] { return parse_map(l->value, X, Y, scope); });
        FunctionExpr g = wrap(need("g"), [&] { return parse_function(need("g").value, A ? A->to : X, scope); });
        p.instance = wrap(need("f"), [&] { return fenchel_instance(p.id, f, g, A); });
    } else if (p.kind == "lagrange") {
        FunctionExpr f = wrap(need("f"), [&] { return parse_function(need("f").value, X, scope); });
        SetExpr S = wrap(need("S"), [&] { return parse_set(need("S").value, X, scope); });
        MapExpr g = wrap(need("g"), [&] { return parse_map(need("g").value, X, Y, scope); });
        SetExpr C = wrap(need("C"), [&] { return parse_set(need("C").value, g->to, scope); });
        p.instance = wrap(need("f"), [&] { return lagrange_instance(p.id, f, S, g, C); });
    } else if (p.kind == "perturbation") {
        const Line& xd = need("x-dim");
        if (!X.finite_dim() || !Y.finite_dim()) fail_at(need("space"), "perturbation problems are numeric");
        const Eigen::Index n = X.total_dim();
        if (xd.value != std::to_string(n)) fail_at(xd, "x-dim must equal the dimension of space");
        FunctionExpr phi = wrap(need("phi"), [&] {
            return parse_function(need("phi").value, SpaceTag::finite(n + Y.total_dim()), scope);
        });
        p.instance = wrap(need("phi"), [&] { return perturbation_instance(p.id, phi, n); });
    }

    if (p.instance) {
        Instance& inst = *p.instance;
        for (const Line* l : all("attr")) {
            auto w = words(l->value);
            if (w.size() != 4 || w[2] != "=") fail_at(*l, "expected '<f|g|phi> <proper|convex|lsc> = <status>'");
            AttributeDeclaration a;
            a.target = w[0];
            if (w[1] == "proper") a.attr = FnAttr::Proper;
            else if (w[1] == "convex") a.attr = FnAttr::Convex;
            else if (w[1] == "lsc") a.attr = FnAttr::Lsc;
            else fail_at(*l, "unknown attribute '" + w[1] + "'");
            a.status = status_word(*l, w[3]);
            a.reason = l->citation;
            FunctionExpr* target = a.target == "f" ? &inst.f : a.target == "g" ? &inst.g : a.target == "phi" ? &inst.phi : nullptr;
            if (!target || !*target) fail_at(*l, "no function '" + a.target + "' in this problem");
            *target = declare_attribute(*target, a.attr, a.status, a.reason);
            p.attributes.push_back(a);
        }
        for (const Line* l : all("flag")) {
            const std::size_t eq = l->value.rfind('=');
            if (eq == std::string::npos) fail_at(*l, "expected '<name> = <status>'");
            const std::string name = trim(l->value.substr(0, eq));
            inst.flags[name] = Attribute{status_word(*l, trim(l->value.substr(eq + 1))), l->citation};
        }
        if (const Line* l = one("primal")) inst.primal = parse_value(*l);
        if (const Line* l = one("dual")) inst.dual = parse_value(*l);
        if (const Line* l = one("primal-solution")) inst.primal_solution = l->value;
        if (const Line* l = one("dual-solution")) inst.dual_solution = l->value;
        if (const Line* l = one("rc8")) {
            auto w = words(l->value);
            Rc8Certificate c;
            if (w.empty()) fail_at(*l, "expected a status");
            c.status = status_word(*l, w[0]);
            for (std::size_t i = 1; i < w.size(); ++i) {
                if (w[i] == "external") c.external = true;
                else if (w[i] == "witness" && i + 1 < w.size()) c.witness = w[++i];
                else fail_at(*l, "unexpected '" + w[i] + "'");
            }
            c.citation = l->citation;
            inst.rc8 = c;
        }
        if (p.regime == "numeric" && !inst.numeric()) fail_at(need("regime"), "the data are not numeric");
        if (p.regime == "symbolic" && inst.numeric()) fail_at(need("regime"), "the data are numeric");
        // @D and @E name the projected domain and the value set at the declared primal value.
        wrap(need("kind"), [&] {
            try {
                scope.refs["D"] = projected_domain(inst);
            } catch (const RegimeError&) {
            }
            if (inst.primal && inst.primal->value.is_finite()) {
                try {
                    scope.refs["E"] = value_set(inst, inst.primal->value.value);
                } catch (const RegimeError&) {
                }
            }
            return 0;
        });
    }

    const SpaceTag fact_space = p.kind == "lagrange" ? Y : X;
    auto read_fact = [&](const Line& l) {
        MembershipText m = split_membership(l, l.value);
        DeclaredFact f;
        f.notion = m.notion;
        f.set = wrap(l, [&] { return parse_set(m.set, fact_space, scope); });
        f.point = wrap(l, [&] { return parse_point(m.point, f.set->space, scope); });
        if (m.rest.empty()) fail_at(l, "expected a status after the set");
        f.status = status_word(l, m.rest[0]);
        for (std::size_t i = 1; i < m.rest.size(); ++i) {
            if (m.rest[i] == "external") f.external = true;
            else fail_at(l, "unexpected '" + m.rest[i] + "'");
        }
        f.citation = l.citation;
        p.fact_texts.push_back(notion_word(m.notion) + " " + m.point + " in " + m.set);
        return f;
    };
    for (const Line* l : all("fact")) {
        DeclaredFact f = read_fact(*l);
        if (p.instance) p.instance->facts.push_back(f);
        else p.set_facts.push_back(f);
    }

    for (const Line* l : all("query")) {
        std::string body = l->value;
        const std::size_t arrow = body.find("=>");
        std::optional<FactStatus> expected;
        if (arrow != std::string::npos) {
            expected = status_word(*l, trim(body.substr(arrow + 2)));
            body = trim(body.substr(0, arrow));
        }
        MembershipText m = split_membership(*l, body);
        if (!m.rest.empty()) fail_at(*l, "unexpected text after the set");
        SetQuery q;
        q.notion = m.notion;
        q.set = wrap(*l, [&] { return parse_set(m.set, X, scope); });
        q.set_text = m.set;
        q.point = wrap(*l, [&] { return parse_point(m.point, X, scope); });
        q.expected = expected;
        q.citation = l->citation;
        p.queries.push_back(q);
    }
    if (p.kind == "sets" && p.queries.empty()) throw ParseError("a sets file needs at least one query");

    for (const Line* l : all("expect")) {
        auto w = words(l->value);
        if (w.size() != 2) fail_at(*l, "expected '<condition> <status>'");
        ExpectedStatus e;
        try {
            e.index = parse_condition(w[0]);
        } catch (const std::exception&) {
            fail_at(*l, "unknown condition '" + w[0] + "'");
        }
        if (p.instance && !applicable(p.instance->family, e.index))
            fail_at(*l, condition_label(e.index) + " does not apply to this kind");
        e.status = status_word(*l, w[1]);
        e.citation = l->citation;
        p.expected.push_back(e);
    }
    if (const Line* l = one("expect-primal")) p.expect_primal = parse_value(*l);
    if (const Line* l = one("expect-dual")) p.expect_dual = parse_value(*l);
    if (const Line* l = one("expect-gap")) {
        if (l->value != "n/a") {
            try {
                ExtendedReal::parse(l->value);
            } catch (const std::exception&) {
                fail_at(*l, "expected an extended real or n/a");
            }
        }
        p.expect_gap = l->value;
    }
    if (const Line* l = one("expect-verdict")) p.expect_verdict = l->value;
    if (const Line* l = one("expect-primal-solution")) p.expect_primal_solution = l->value;
    if (const Line* l = one("expect-dual-solution")) p.expect_dual_solution = l->value;
    for (const Line* l : all("note")) p.notes.push_back(l->value);
    if (const Line* l = one("x-dim"); l && p.kind != "perturbation") fail_at(*l, "only perturbation files take x-dim");
    return p;
}

ProblemFile read_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_problem(os.str());
}

std::string serialize_problem(const ProblemFile& p) {
    std::ostringstream os;
    auto line = [&](const std::string& key, const std::string& value, const std::string& citation = {}) {
        os << key << ": " << value;
        if (!citation.empty()) os << " | " << citation;
        os << "\n";
    };
    line("id", p.id);
    if (!p.title.empty()) line("title", p.title);
    line("kind", p.kind);
    line("regime", p.regime);
    line("space", p.space.key());
    if (p.second_space) line("second-space", p.second_space->key());
    for (const auto& [name, tags] : p.atoms) {
        std::string v = name;
        for (const auto& t : tags) v += " " + t;
        line("point", v);
    }
    // Attribute declarations are re-applied on parse, so the undeclared
    // expressions are written.
    if (p.instance) {
        const Instance& I = *p.instance;
        switch (I.family) {
            case Family::Fenchel:
                line("f", I.f->key);
                if (I.A) line("A", I.A->key);
                line("g", I.g->key);
                break;
            case Family::Lagrange:
                line("f", I.f->key);
                line("S", I.S->key);
                line("g", I.gmap->key);
                line("C", I.C->key);
                break;
            case Family::Perturbation:
                line("x-dim", std::to_string(I.X.total_dim()));
                line("phi", I.phi->key);
                break;
        }
        for (const auto& a : p.attributes)
            line("attr", a.target + " " + attr_name(a.attr) + " = " + status_name(a.status), a.reason);
        for (const auto& [name, a] : I.flags) line("flag", name + " = " + status_name(a.status), a.reason);
        if (I.primal) line("primal", value_text(*I.primal), I.primal->citation);
        if (I.dual) line("dual", value_text(*I.dual), I.dual->citation);
        if (!I.primal_solution.empty()) line("primal-solution", I.primal_solution);
        if (!I.dual_solution.empty()) line("dual-solution", I.dual_solution);
        if (I.rc8) {
            std::string v = status_name(I.rc8->status);
            if (!I.rc8->witness.empty()) v += " witness " + I.rc8->witness;
            if (I.rc8->external) v += " external";
            line("rc8", v, I.rc8->citation);
        }
    }
    const std::vector<DeclaredFact>& facts = p.instance ? p.instance->facts : p.set_facts;
    for (std::size_t i = 0; i < facts.size(); ++i) {
        const DeclaredFact& f = facts[i];
        std::string text = i < p.fact_texts.size()
                               ? p.fact_texts[i]
                               : notion_word(f.notion) + " " + f.point.key() + " in " + f.set->key;
        text += " " + status_name(f.status);
        if (f.external) text += " external";
        line("fact", text, f.citation);
    }
    for (const auto& q : p.queries) {
        std::string v = notion_word(q.notion) + " " + q.point.key() + " in " + q.set_text;
        if (q.expected) v += " => " + status_name(*q.expected);
        line("query", v, q.citation);
    }
    for (const auto& e : p.expected) line("expect", condition_label(e.index) + " " + status_name(e.status), e.citation);
    if (p.expect_primal) line("expect-primal", value_text(*p.expect_primal), p.expect_primal->citation);
    if (p.expect_dual) line("expect-dual", value_text(*p.expect_dual), p.expect_dual->citation);
    if (p.expect_gap) line("expect-gap", *p.expect_gap);
    if (p.expect_verdict) line("expect-verdict", *p.expect_verdict);
    if (p.expect_primal_solution) line("expect-primal-solution", *p.expect_primal_solution);
    if (p.expect_dual_solution) line("expect-dual-solution", *p.expect_dual_solution);
    for (const auto& n : p.notes) line("note", n);
    return os.str();
}

}  // namespace dualdiag
