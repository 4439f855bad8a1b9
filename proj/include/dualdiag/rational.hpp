#pragma once
// Exact rational scalar and the dense Eigen types built on it.

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace dualdiag {

// Expression templates are switched off so that Eigen's own expression
// machinery is the only lazy layer.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

using Vector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using Matrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Canonical rendering: "p/q" in lowest terms, or "p" when q == 1.
std::string to_string(const Rational& r);
std::string to_string(const Vector& v);

// Accepts "p", "p/q", "-p/q". Decimal points are rejected.
Rational parse_rational(const std::string& text);

Vector make_vector(std::initializer_list<Rational> xs);
Vector zeros(Eigen::Index n);
Vector unit_vector(Eigen::Index n, Eigen::Index i);
Matrix identity(Eigen::Index n);

// Vertical concatenation helpers for growing row blocks.
Matrix vstack(const Matrix& top, const Matrix& bottom);
Vector vcat(const Vector& top, const Vector& bottom);

bool is_zero(const Vector& v);

}  // namespace dualdiag
