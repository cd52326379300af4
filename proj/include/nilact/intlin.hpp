#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace nilact {

using IntMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Exact determinant (Bareiss, fraction-free). Throws on 128-bit overflow.
std::int64_t det_exact(const IntMat& m);

// Exact characteristic polynomial, coefficients ascending (c0, c1, ..., 1).
// Faddeev-LeVerrier over 128-bit integers; monic by construction.
std::vector<std::int64_t> char_poly(const IntMat& m);

// Basis of the kernel lattice {x in Z^c : Mx = 0}, returned as columns.
// Saturated: every integer kernel vector is an integer combination of the
// basis. Computed by unimodular column reduction.
IntMat kernel_lattice(const IntMat& m);

// Standard symplectic form J on R^d (d even): J = [[0, I], [-I, 0]].
IntMat symplectic_form(int d);

bool is_symplectic(const IntMat& m);

// First entry (i, j) where m^T J m differs from J, for error reporting.
// Returns {-1, -1} when symplectic.
std::pair<int, int> symplectic_defect_entry(const IntMat& m);

IntMat block_diag(const IntMat& a, const IntMat& b);

// Rank of a set of real vectors as a lattice / linear span, by greedy
// Gram-Schmidt at the given tolerance. Deterministic in input order.
int span_rank(const std::vector<Vec>& vecs, double tol = 1e-9);

} // namespace nilact
