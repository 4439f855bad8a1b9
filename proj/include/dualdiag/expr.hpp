#pragma once
// Symbolic vocabulary shared by every layer above the polyhedral core:
// spaces, points, set / function / map expressions, three-valued facts and
// extended reals.
//
// Expression nodes are immutable and shared. Each node carries a canonical
// key written in the problem-file expression grammar, so printing a node and
// parsing it back reproduces it.

#include "dualdiag/polyhedron.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace dualdiag {

enum class FactStatus { Holds, Fails, Unknown };
std::string status_name(FactStatus s);
FactStatus parse_status(const std::string& s);

class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MalformedExpression : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- spaces

struct SpaceTag {
    enum class Kind { FiniteDim, Sequence, UncountableSequence, Banach, Product };
    Kind kind = Kind::FiniteDim;
    Eigen::Index dim = 0;
    Rational p = 2;
    std::string label;
    std::vector<SpaceTag> factors;
    bool frechet = true;

    static SpaceTag finite(Eigen::Index n);
    static SpaceTag sequence(Rational p);
    static SpaceTag uncountable(Rational p);
    static SpaceTag banach(std::string label, bool frechet = true);
    static SpaceTag product(const SpaceTag& a, const SpaceTag& b);

    bool finite_dim() const;
    // Sum of factor dimensions; only meaningful when finite_dim().
    Eigen::Index total_dim() const;
    bool is_hilbert_l2() const;
    std::string key() const;
    bool operator==(const SpaceTag& o) const { return key() == o.key(); }
};

// ---------------------------------------------------------------- points

// A point is numeric coordinates, a linear combination of named symbolic
// atoms (each atom carrying sign tags such as "strictly-positive"), or the
// wildcard ANY used for nonemptiness questions.
struct Point {
    enum class Kind { Numeric, Symbolic, Any };
    struct Term {
        Rational coef;
        std::set<std::string> tags;
    };

    Kind kind = Kind::Symbolic;
    Vector coords;
    std::map<std::string, Term> terms;

    static Point zero();
    static Point any();
    static Point numeric(Vector v);
    static Point atom(const std::string& name, std::set<std::string> tags = {});

    bool is_any() const { return kind == Kind::Any; }
    bool is_numeric() const { return kind == Kind::Numeric; }
    bool is_zero() const;
    // Sign tags of the point itself. Zero carries zero/nonneg/nonpos; a single
    // scaled atom inherits its atom tags, flipped for negative scale.
    std::set<std::string> tags() const;
    bool has_tag(const std::string& t) const { return tags().count(t) > 0; }

    Point operator-() const;
    Point operator+(const Point& o) const;
    Point operator-(const Point& o) const { return *this + (-o); }
    Point scaled(const Rational& s) const;

    std::string key() const;
    bool operator==(const Point& o) const { return key() == o.key(); }
};

// ---------------------------------------------------------------- extended reals

struct ExtendedReal {
    enum class Kind { Finite, PlusInf, MinusInf };
    Kind kind = Kind::Finite;
    Rational value;

    static ExtendedReal finite(Rational r) { return {Kind::Finite, std::move(r)}; }
    static ExtendedReal plus_inf() { return {Kind::PlusInf, 0}; }
    static ExtendedReal minus_inf() { return {Kind::MinusInf, 0}; }

    bool is_finite() const { return kind == Kind::Finite; }
    // (+inf) + (-inf) = +inf.
    ExtendedReal operator+(const ExtendedReal& o) const;
    ExtendedReal operator-() const;
    bool operator<(const ExtendedReal& o) const;
    bool operator==(const ExtendedReal& o) const;
    bool operator<=(const ExtendedReal& o) const { return *this < o || *this == o; }
    std::string str() const;
    static ExtendedReal parse(const std::string& s);
};

// ---------------------------------------------------------------- expressions

struct SetNode;
struct FnNode;
struct MapNode;
using SetExpr = std::shared_ptr<const SetNode>;
using FunctionExpr = std::shared_ptr<const FnNode>;
using MapExpr = std::shared_ptr<const MapNode>;

enum class CatalogId {
    LpPlus,
    LpPlusUncountable,
    SubspaceC,
    SubspaceS,
    KernelOfFunctional,
    DualUnitBall,
    GeneralClosedSubspace
};
std::string catalog_name(CatalogId id);

enum class SetKind {
    Poly,
    Catalog,
    Abstract,
    Whole,
    Singleton,
    Neg,
    Scale,
    Translate,
    MinkSum,
    Product,
    Intersection,
    ConeHull,
    HullWithOrigin,
    Closure,
    PolarCone,
    Image,
    Preimage,
    EpiDiff,
    ConicExt,
    DomainOf
};

struct SetNode {
    SetKind kind = SetKind::Whole;
    SpaceTag space;
    Polyhedron poly;
    CatalogId atom = CatalogId::LpPlus;
    bool dense = false;  // GeneralClosedSubspace flags
    bool whole = false;
    std::string label;          // Abstract atoms
    bool closed_flag = false;   // Abstract atoms
    Point point;                // Singleton, Translate
    Rational scalar = 1;        // Scale
    Rational level = 0;         // EpiDiff / ConicExt value v
    std::vector<SetExpr> args;
    std::vector<FunctionExpr> fns;
    MapExpr map;
    std::string key;
};

enum class FnKind {
    Affine,
    Indicator,
    Norm,
    SupOfAffine,
    Sum,
    InfConv,
    ArgTranslate,
    PrecomposeLinear,
    PlusConst,
    Conjugate,
    Support
};
enum class NormKind { L1, L2, Linf };

struct Attribute {
    FactStatus status = FactStatus::Unknown;
    std::string reason;
};

struct FnNode {
    FnKind kind = FnKind::Affine;
    SpaceTag space;
    Point coeff;                 // Affine slope
    Rational constant = 0;       // Affine offset, PlusConst
    SetExpr set;                 // Indicator, Support
    NormKind norm = NormKind::L1;
    std::vector<std::pair<Vector, Rational>> pieces;  // SupOfAffine
    std::vector<FunctionExpr> args;
    Point shift;                 // ArgTranslate: x -> f(x - shift)
    MapExpr map;                 // PrecomposeLinear
    bool exact = false;          // InfConv produced by the sum rule
    Attribute proper, convex, lsc;
    std::string key;
};

enum class MapKind { Affine, Identity, Negation, Shift, Operator };

struct MapNode {
    MapKind kind = MapKind::Identity;
    SpaceTag from, to;
    Matrix M;     // Affine: x -> M x + t
    Vector t;
    Point shift;  // Shift: x -> x + shift
    std::string label;
    std::string key;
};

// ---- set factories
SetExpr poly_set(Polyhedron P);
SetExpr catalog_set(CatalogId id, SpaceTag space, bool dense = false, bool whole = false);
SetExpr abstract_set(std::string label, SpaceTag space, bool closed);
SetExpr whole_set(SpaceTag space);
SetExpr singleton(Point p, SpaceTag space);
SetExpr neg_set(SetExpr s);
SetExpr scale_set(Rational r, SetExpr s);
SetExpr translate_set(SetExpr s, Point a);
SetExpr mink_sum(SetExpr a, SetExpr b);
SetExpr mink_diff(SetExpr a, SetExpr b);
SetExpr product_set(SetExpr a, SetExpr b);
SetExpr intersect_set(SetExpr a, SetExpr b);
SetExpr cone_hull(SetExpr s);
SetExpr hull_with_origin(SetExpr s);
SetExpr closure_set(SetExpr s);
SetExpr polar_cone(SetExpr s);
SetExpr image_set(MapExpr m, SetExpr s);
SetExpr preimage_set(MapExpr m, SetExpr s);
SetExpr epi_diff_node(FunctionExpr f, FunctionExpr g, Rational v);
SetExpr conic_ext_node(FunctionExpr f, SetExpr S, MapExpr g, SetExpr C, Rational v);
SetExpr domain_of(FunctionExpr f);

// ---- function factories (attributes derived conservatively)
FunctionExpr affine_fn(Point c, Rational alpha, SpaceTag space);
FunctionExpr indicator(SetExpr s);
FunctionExpr norm_fn(NormKind k, SpaceTag space);
FunctionExpr sup_of_affine(std::vector<std::pair<Vector, Rational>> pieces);
FunctionExpr sum_fn(FunctionExpr a, FunctionExpr b);
FunctionExpr inf_conv(FunctionExpr a, FunctionExpr b, bool exact = false);
FunctionExpr arg_translate(FunctionExpr f, Point a);
FunctionExpr precompose(MapExpr m, FunctionExpr f);
FunctionExpr plus_const(FunctionExpr f, Rational k);
FunctionExpr conjugate_of(FunctionExpr f);
FunctionExpr support_fn(SetExpr s);

enum class FnAttr { Proper, Convex, Lsc };
std::string attr_name(FnAttr a);
// Returns a copy with the attribute overridden by a user declaration.
FunctionExpr declare_attribute(FunctionExpr f, FnAttr which, FactStatus s, std::string reason);
const Attribute& attribute(const FunctionExpr& f, FnAttr which);

// ---- map factories
MapExpr affine_map(Matrix M, Vector t);
MapExpr identity_map(SpaceTag space);
MapExpr negation_map(SpaceTag space);
MapExpr shift_map(Point a, SpaceTag space);
MapExpr operator_map(std::string label, SpaceTag from, SpaceTag to);

// Image of a point under a map; nullopt when not symbolically decidable.
std::optional<Point> apply_map(const MapExpr& m, const Point& p);

// ---- structural predicates
// Finite on the whole space, hence continuous there.
bool finite_everywhere(const FunctionExpr& f);

// Numeric regime: finite-dimensional and built only from polyhedral pieces.
bool is_numeric(const SetExpr& s);
bool is_numeric(const FunctionExpr& f);
bool is_numeric(const MapExpr& m);

FactStatus is_closed(const SetExpr& s);
FactStatus is_subspace(const SetExpr& s);
FactStatus is_convex_cone(const SetExpr& s);
// Weak* compactness; only the dual unit ball and bounded polyhedra qualify.
FactStatus is_compact(const SetExpr& s);

}  // namespace dualdiag
