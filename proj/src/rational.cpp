#include "dualdiag/rational.hpp"

#include <cctype>

namespace dualdiag {

std::string to_string(const Rational& r) {
    return r.str();
}

std::string to_string(const Vector& v) {
    std::string out = "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += to_string(v[i]);
    }
    return out + ")";
}

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty rational");
    auto slash = s.find('/');
    auto valid_int = [](const std::string& t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    auto strip_plus = [](std::string t) { return (!t.empty() && t[0] == '+') ? t.substr(1) : t; };
    if (slash == std::string::npos) {
        if (!valid_int(s)) throw ParseError("not a rational: '" + text + "'");
        return Rational(strip_plus(s));
    }
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!valid_int(num) || den.empty() || !valid_int(den) || den[0] == '-' || den[0] == '+')
        throw ParseError("not a rational: '" + text + "'");
    Rational d(den);
    if (d == 0) throw ParseError("zero denominator in '" + text + "'");
    return Rational(strip_plus(num)) / d;
}

Vector make_vector(std::initializer_list<Rational> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (const auto& x : xs) v[i++] = x;
    return v;
}

Vector zeros(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = 0;
    return v;
}

Vector unit_vector(Eigen::Index n, Eigen::Index i) {
    Vector v = zeros(n);
    v[i] = 1;
    return v;
}

Matrix identity(Eigen::Index n) {
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = (i == j) ? 1 : 0;
    return m;
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
    if (top.rows() == 0) return bottom;
    if (bottom.rows() == 0) return top;
    Matrix m(top.rows() + bottom.rows(), top.cols());
    m << top, bottom;
    return m;
}

Vector vcat(const Vector& top, const Vector& bottom) {
    Vector v(top.size() + bottom.size());
    for (Eigen::Index i = 0; i < top.size(); ++i) v[i] = top[i];
    for (Eigen::Index i = 0; i < bottom.size(); ++i) v[top.size() + i] = bottom[i];
    return v;
}

bool is_zero(const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v[i] != 0) return false;
    return true;
}

}  // namespace dualdiag
