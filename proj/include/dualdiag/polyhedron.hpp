#pragma once
// H-representation polyhedra and the finite-dimensional interiority tests.

#include "dualdiag/lp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dualdiag {

// The six interiority notions. In finite dimensions Int = Core = Qi and
// Sqri = Icr = Qri = relative interior.
enum class Notion { Int, Core, Qi, Sqri, Icr, Qri };

inline constexpr Notion kAllNotions[] = {Notion::Int, Notion::Core, Notion::Qi,
                                         Notion::Sqri, Notion::Icr, Notion::Qri};

std::string notion_name(Notion k);
Notion parse_notion(const std::string& s);

class EmptyPolyhedron : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotAMember : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// {x : A x <= b, E x = d}
struct Polyhedron {
    Eigen::Index n = 0;
    Matrix A;
    Vector b;
    Matrix E;
    Vector d;

    Polyhedron() : Polyhedron(0) {}
    explicit Polyhedron(Eigen::Index dim);

    static Polyhedron whole(Eigen::Index dim) { return Polyhedron(dim); }
    static Polyhedron empty(Eigen::Index dim);
    static Polyhedron point(const Vector& x);
    static Polyhedron box(const Vector& lo, const Vector& hi);
    static Polyhedron orthant(Eigen::Index dim);

    Eigen::Index num_ineqs() const { return A.rows(); }
    Eigen::Index num_eqs() const { return E.rows(); }

    void add_ineq(const Vector& a, const Rational& rhs);
    void add_eq(const Vector& e, const Rational& rhs);

    bool contains(const Vector& x) const;
    std::string describe() const;
};

struct AffineSubspace {
    Eigen::Index n = 0;
    Matrix E;
    Vector d;
    Eigen::Index dimension() const;
};

// {sum l_i g_i + sum m_j h_j : l >= 0, m free}
struct FinitelyGeneratedCone {
    Eigen::Index n = 0;
    std::vector<Vector> generators;
    std::vector<Vector> lineality;
};

Eigen::Index rank(const Matrix& M);

// LP on {x in P} with the given objective.
LpOutcome optimize(const Polyhedron& P, const Vector& c, Sense sense);

std::optional<Vector> feasible_point(const Polyhedron& P);
bool is_empty(const Polyhedron& P);

// Per inequality row: true when every point of P satisfies it with equality.
std::vector<bool> implicit_equalities(const Polyhedron& P);

AffineSubspace affine_hull(const Polyhedron& P);
std::optional<Vector> relative_interior_point(const Polyhedron& P);

// Membership of the origin in the given notion of P.
bool zero_in(Notion k, const Polyhedron& P);

FinitelyGeneratedCone normal_cone(const Polyhedron& P, const Vector& x);
bool cone_contains(const FinitelyGeneratedCone& K, const Vector& v);
bool is_linear_subspace(const FinitelyGeneratedCone& K);
bool is_trivial(const FinitelyGeneratedCone& K);
Polyhedron dual_cone(const FinitelyGeneratedCone& K);

// Fourier-Motzkin elimination of every coordinate outside `keep`; output
// coordinates follow the order of `keep`.
Polyhedron project(const Polyhedron& P, const std::vector<Eigen::Index>& keep);
Polyhedron minkowski_sum(const Polyhedron& P, const Polyhedron& Q);

Polyhedron intersect(const Polyhedron& P, const Polyhedron& Q);
Polyhedron translate(const Polyhedron& P, const Vector& t);
Polyhedron negate(const Polyhedron& P);
Polyhedron scale(const Polyhedron& P, const Rational& s);
Polyhedron product(const Polyhedron& P, const Polyhedron& Q);
// {M x + t : x in P}
Polyhedron affine_image(const Matrix& M, const Vector& t, const Polyhedron& P);
// {x : M x + t in P}
Polyhedron affine_preimage(const Matrix& M, const Vector& t, const Polyhedron& P);
// Closure of cone(P) and of conv(P u {0}).
Polyhedron closed_cone_hull(const Polyhedron& P);
Polyhedron closed_hull_with_origin(const Polyhedron& P);

// Drops rows implied by the others (one LP per row) and duplicate rows.
Polyhedron remove_redundancy(const Polyhedron& P);

// Semantic equality by mutual containment, one LP per row.
bool contains_polyhedron(const Polyhedron& outer, const Polyhedron& inner);
bool same_set(const Polyhedron& P, const Polyhedron& Q);

}  // namespace dualdiag
