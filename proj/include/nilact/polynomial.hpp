#pragma once

#include "nilact/intlin.hpp"

#include <complex>
#include <vector>

namespace nilact {

// Integer polynomial, coefficients ascending: p(t) = c[0] + c[1] t + ...
// Trailing zero coefficients are trimmed; the zero polynomial is {}.
struct IntPoly {
    std::vector<std::int64_t> c;

    IntPoly() = default;
    explicit IntPoly(std::vector<std::int64_t> coeffs);

    int degree() const { return static_cast<int>(c.size()) - 1; }
    std::int64_t leading() const { return c.empty() ? 0 : c.back(); }
    bool monic() const { return leading() == 1; }
    std::int64_t eval_int(std::int64_t x) const; // throws on 64-bit overflow
    double eval(double x) const;

    bool operator==(const IntPoly& o) const { return c == o.c; }
};

IntPoly operator*(const IntPoly& a, const IntPoly& b);

// Exact division; returns false if b does not divide a over Z.
bool divide_exact(const IntPoly& a, const IntPoly& b, IntPoly* quotient);

// Monic irreducible factors over Q with multiplicities (Kronecker divisor
// search through interpolation points 0, ±1, ±2, ...). Requires monic input
// and degree <= 8.
std::vector<std::pair<IntPoly, int>> factor_monic(const IntPoly& p);

bool is_irreducible(const IntPoly& p);

// Roots via companion-matrix eigensolve.
std::vector<std::complex<double>> poly_roots(const IntPoly& p);

IntMat companion_matrix(const IntPoly& p);

struct RootClassification {
    int r1 = 0;                // real roots
    int r2 = 0;                // complex-conjugate pairs
    bool hyperbolic = false;   // no root with | log|lambda| | <= tolerance
    bool irreducible = false;  // over Q; only valid when irreducible_known
    bool irreducible_known = false; // degree <= 8
    std::vector<std::complex<double>> roots;
};

// Unit-circle tolerance 1e-9 on |log|lambda||; irreducibility by exact
// factorization for degree <= 8 (left unknown above that).
RootClassification classify_roots(const IntPoly& p);
RootClassification classify_matrix(const IntMat& m);

// Product of max(1, |root|). Requires monic with constant term +-1.
double mahler_measure(const IntPoly& p);

} // namespace nilact
