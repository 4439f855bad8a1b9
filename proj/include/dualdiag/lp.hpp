#pragma once
// Exact dense simplex with certificates.

#include "dualdiag/rational.hpp"

#include <optional>
#include <variant>

namespace dualdiag {

enum class Sense { Minimize, Maximize };
enum class Relation { LessEq, Equal, GreaterEq };

struct LpRow {
    Vector coeffs;
    Relation rel;
    Rational rhs;
};

struct LinearProgram {
    Eigen::Index n = 0;
    Vector objective;
    Sense sense = Sense::Minimize;
    std::vector<LpRow> rows;
    // Either empty or of length n.
    std::vector<std::optional<Rational>> lower;
    std::vector<std::optional<Rational>> upper;

    LinearProgram() = default;
    explicit LinearProgram(Eigen::Index dim);

    void add_row(Vector coeffs, Relation rel, Rational rhs);
    void set_lower(Eigen::Index j, Rational v);
    void set_upper(Eigen::Index j, Rational v);
};

// Rows followed by one row per finite lower bound (x_j >= l_j) and then one
// per finite upper bound (x_j <= u_j), both in variable order. Multiplier and
// Farkas vectors index into this list.
std::vector<LpRow> expanded_rows(const LinearProgram& lp);

// Multipliers satisfy sum_r y_r a_r = objective and sum_r y_r b_r = value.
// Sign: for Minimize, y_r >= 0 on >= rows and y_r <= 0 on <= rows; reversed
// for Maximize; free on equalities.
struct Optimal {
    Vector point;
    Rational value;
    Vector duals;
};

// y_r >= 0 on <= rows, y_r <= 0 on >= rows, sum y_r a_r = 0, sum y_r b_r < 0.
struct Infeasible {
    Vector farkas;
};

struct Unbounded {
    Vector point;
    Vector ray;
};

using LpOutcome = std::variant<Optimal, Infeasible, Unbounded>;

class MalformedInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LpIterationLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Pivot cap read from DUALDIAG_MAX_PIVOTS (default 100000).
long max_pivots();

// Two-phase tableau simplex, Bland's smallest-index rule in both phases.
LpOutcome solve_lp(const LinearProgram& lp);

bool verify_certificate(const LinearProgram& lp, const LpOutcome& out);

inline bool is_optimal(const LpOutcome& o) { return std::holds_alternative<Optimal>(o); }
inline bool is_infeasible(const LpOutcome& o) { return std::holds_alternative<Infeasible>(o); }
inline bool is_unbounded(const LpOutcome& o) { return std::holds_alternative<Unbounded>(o); }

}  // namespace dualdiag
