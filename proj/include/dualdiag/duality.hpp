#pragma once
// Optimization instances, their perturbation functions and the numeric
// primal / dual solvers.
//
// Every instance is read through a perturbation function Phi(x, y) with the
// primal inf_x Phi(x, 0). Fenchel problems use Phi(x, y) = f(x) + g(Ax - y),
// Lagrange problems Phi(x, z) = f(x) + indicator_S(x) + indicator{z in g(x) + C}.
// Fenchel and Lagrange dual points are reported in their own convention,
// which is the negative of the Phi dual point.

#include "dualdiag/functions.hpp"
#include "dualdiag/sets.hpp"

namespace dualdiag {

enum class Family { Perturbation, Fenchel, Lagrange };
std::string family_name(Family f);
Family parse_family(const std::string& s);

class DegenerateSeparation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QriMembership : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DeclaredValue {
    ExtendedReal value;
    bool attained = false;
    std::string citation;
};

// A published verdict on the closedness-type condition, with the witness
// that refutes it when it fails.
struct Rc8Certificate {
    FactStatus status = FactStatus::Unknown;
    std::string witness;
    std::string citation;
    bool external = false;
};

struct Instance {
    std::string id;
    Family family = Family::Fenchel;
    SpaceTag X;  // decision space
    SpaceTag Y;  // perturbation space (the constraint space Z for Lagrange)

    // Fenchel: inf f(x) + g(Ax); A null means the identity.
    // Lagrange: inf f(x) over x in S with g(x) in -C.
    // Perturbation: inf phi(x, 0) with phi on X x Y, numeric only.
    FunctionExpr f, g, phi;
    MapExpr A, gmap;
    SetExpr S, C;

    // Named hypotheses such as "S closed" or "g epi-closed".
    std::map<std::string, Attribute> flags;
    std::optional<DeclaredValue> primal, dual;
    std::string primal_solution, dual_solution;
    std::vector<DeclaredFact> facts;
    std::optional<Rc8Certificate> rc8;

    bool numeric() const;
};

Instance fenchel_instance(std::string id, FunctionExpr f, FunctionExpr g, MapExpr A = nullptr);
Instance lagrange_instance(std::string id, FunctionExpr f, SetExpr S, MapExpr g, SetExpr C);
Instance perturbation_instance(std::string id, FunctionExpr phi, Eigen::Index x_dim);

// Phi as an explicit function on X x Y (numeric instances).
FunctionExpr perturbation_function(const Instance& inst);
Instance to_perturbation(const Instance& inst);

// pr_Y(dom Phi), normalized.
SetExpr projected_domain(const Instance& inst);
// E_v = {(y, Phi(x, y) - v + eps) : eps >= 0}, normalized.
SetExpr value_set(const Instance& inst, const Rational& v);

struct PrimalResult {
    ExtendedReal value;
    std::optional<Vector> point;
    bool attained = false;
};

struct DualResult {
    ExtendedReal value;
    std::optional<Vector> point;  // in the family's convention
    bool attained = false;
};

PrimalResult solve_primal(const Instance& inst);
// Fenchel duals go through the conjugates of f and g; others through Phi*.
DualResult solve_dual(const Instance& inst);
DualResult solve_dual_via_perturbation(const Instance& inst);

struct SeparationResult {
    Vector separator;        // y-part of the separating functional
    Rational separator_r;    // its epigraph component, negative
    Vector dual_point;       // family convention
    Rational dual_value;     // equals the primal value
};
// Separates (0, 0) from E at v = primal value and reads off a dual solution.
SeparationResult recover_dual_via_separation(const Instance& inst, const Rational& primal_value);

// x -> <w, g(x)> for a multiplier w in the dual cone of C.
FunctionExpr scalarize(const Vector& w, const MapExpr& g, const SetExpr& C);

}  // namespace dualdiag
