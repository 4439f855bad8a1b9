#pragma once
// Function calculus: polyhedral realizations of numeric sets and epigraphs,
// evaluation, conjugation rules, effective domains and the epigraph
// difference / conic extension sets.

#include "dualdiag/expr.hpp"

#include <optional>

namespace dualdiag {

class ImproperFunction : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UndecidableValue : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A polyhedron in (visible, auxiliary) coordinates whose projection onto the
// first `visible` coordinates is the set of interest. Keeping auxiliaries
// avoids Fourier-Motzkin blow-up until a closed form is really needed.
struct Lifted {
    Eigen::Index visible = 0;
    Polyhedron sys;

    Eigen::Index aux() const { return sys.n - visible; }
    bool empty() const { return is_empty(sys); }
    Polyhedron materialize() const;
};

// Incremental construction of a lifted system. Rows are stored against the
// variable count at insertion time and zero-padded on build().
class LiftedBuilder {
public:
    Eigen::Index add_vars(Eigen::Index k);
    Eigen::Index vars() const { return nvars_; }
    void ineq(Vector a, Rational rhs);
    void eq(Vector a, Rational rhs);
    // Adds the rows of `part` with its visible coordinates set to T z + t0
    // (z = the current variables) and fresh columns for its auxiliaries.
    void attach(const Lifted& part, const Matrix& T, const Vector& t0);
    // Selection matrix picking `count` consecutive variables from `start`, scaled.
    Matrix pick(Eigen::Index start, Eigen::Index count, const Rational& scale = 1) const;
    Lifted build(Eigen::Index visible) const;

private:
    Eigen::Index nvars_ = 0;
    std::vector<std::pair<Vector, Rational>> ineqs_, eqs_;
};

// Reorders the coordinates of a lifted system so that `front` come first and
// become the visible block.
Lifted with_visible(const Lifted& L, const std::vector<Eigen::Index>& front);

// {(y, s) : sup over the visible part of <y, v> <= s}, with some visible dual
// coordinates fixed to constants and dropped from the output. Requires L
// nonempty; the support of an empty set is identically -inf.
Lifted support_epigraph(const Lifted& L, const std::vector<std::optional<Rational>>& fixed);

Lifted realize(const SetExpr& s);
// Visible coordinates (x, t).
Lifted epigraph(const FunctionExpr& f);

// x -> M x + t for maps that have a numeric form.
std::pair<Matrix, Vector> numeric_map(const MapExpr& m);
Vector to_vector(const Point& p, Eigen::Index n);

ExtendedReal evaluate(const FunctionExpr& f, const Point& x);

// Rule-based conjugate. `qualified` marks that a regularity condition for the
// pair inside a sum has been established, which makes the infimal convolution
// of the conjugates exact.
FunctionExpr conjugate(const FunctionExpr& f, bool qualified = false);
SetExpr domain(const FunctionExpr& f);
// The domain before normalization; DomainOf when no rule applies.
SetExpr domain_expression(const FunctionExpr& f);

struct EpiDiff {
    FunctionExpr f, g;
    Rational level;
    SetExpr set;  // normalized form
};
// {(x - y, r) : x in dom f, y in dom g, f(x) + g(y) <= r + level}, in the
// shifted form used by the exclusion clause.
EpiDiff epi_diff_set(const FunctionExpr& f, const FunctionExpr& g, const Rational& level);

// f** = f and f(x) + f*(y) >= <x, y> on the given samples.
bool biconjugate_check(const FunctionExpr& f, const std::vector<Vector>& xs, const std::vector<Vector>& ys);

// Numeric properness: the epigraph is nonempty and f is finite somewhere.
FactStatus numeric_proper(const FunctionExpr& f);

// Infimum over the whole space, when a certificate for a lower bound exists.
std::optional<Rational> lower_bound(const FunctionExpr& f);

}  // namespace dualdiag
