#pragma once
// Seeded generators shared by the property tests.

#include "dualdiag/rational.hpp"

#include <cstdlib>
#include <random>

namespace testsupport {

using dualdiag::Rational;
using dualdiag::Vector;

inline unsigned seed_from_env(unsigned fallback = 20240611u) {
    if (const char* s = std::getenv("DUALDIAG_SEED")) return static_cast<unsigned>(std::strtoul(s, nullptr, 10));
    return fallback;
}

struct Gen {
    std::mt19937 rng;
    explicit Gen(unsigned seed) : rng(seed) {}
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
    Rational rational(int lo, int hi, int max_den = 3) {
        int den = integer(1, max_den);
        return Rational(integer(lo * den, hi * den)) / den;
    }
    Vector vec(Eigen::Index n, int lo, int hi, int max_den = 1) {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = rational(lo, hi, max_den);
        return v;
    }
    Vector nonzero_vec(Eigen::Index n, int lo, int hi) {
        for (;;) {
            Vector v = vec(n, lo, hi);
            if (!dualdiag::is_zero(v)) return v;
        }
    }
    bool coin(int percent = 50) { return integer(1, 100) <= percent; }
};

}  // namespace testsupport
