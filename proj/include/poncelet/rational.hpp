#pragma once

// Exact rational layer. All exact-arithmetic code paths in the library run on
// GMP rationals; floats are a separate code path with stated tolerances.

#include <gmpxx.h>

#include <string>
#include <vector>

#include "poncelet/errors.hpp"

namespace poncelet {

using Rational = mpq_class;
using QMatrix = std::vector<std::vector<Rational>>;
using QVector = std::vector<Rational>;

inline double to_double(const Rational& q) { return q.get_d(); }

inline Rational rational_of(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "p", "-p", "p/q"; anything else is BadParameter.
Rational parse_rational(const std::string& text);

// "p" or "p/q", canonical form.
std::string to_string(const Rational& q);

// True if the text is an exact rational literal (integer or p/q).
bool is_rational_literal(const std::string& text);

// Exact rank over Q: rows are cleared to integers, then fraction-free
// Bareiss elimination with full pivoting.
int rank_exact(const QMatrix& m);

// Exact reduced row echelon nullspace basis of m (columns = unknowns).
std::vector<QVector> nullspace_exact(const QMatrix& m);

// Solve m x = rhs exactly; throws Internal if the system is inconsistent or
// underdetermined.
QVector solve_exact(QMatrix m, QVector rhs);

}  // namespace poncelet
