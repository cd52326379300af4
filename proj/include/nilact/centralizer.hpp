#pragma once

#include "nilact/polynomial.hpp"
#include "nilact/spectral.hpp"

#include <optional>

namespace nilact {

struct CentralizerReport {
    IntMat matrix;
    RootClassification classification;
    int rank_gl = 0;
    std::optional<int> rank_sp;   // present iff the matrix is symplectic
    std::optional<int> r0;        // = rank_sp
    bool r0_exceeds_one = false;  // guaranteed for d >= 6
    std::optional<int> oracle_rank_gl;
    std::optional<int> oracle_rank_sp;
};

// rank of Z_GL(d,Z)(A) = r1 + r2 - 1; requires hyperbolic + irreducible.
int rank_centralizer_gl(const IntMat& a);

// rank of Z_Sp(d,Z)(A) = r1/2 + r2/2; requires symplectic, hyperbolic,
// irreducible.
int rank_centralizer_sp(const SymplecticMatrix& a);

CentralizerReport centralizer_report(const IntMat& a, bool run_oracle = false,
                                     std::int64_t oracle_bound = 50);

// Restriction of the wedge square to the 1-eigenspace W of A^A: the map
// Psi(B) = (B^B)|_W in an integer basis of W cap Lambda^2(Z^d). ker Psi
// (over the commutant) is exactly the symplectic centralizer.
struct WedgeRestriction {
    IntMat w_basis;   // C(d,2) x (d/2), columns span W cap Lambda^2(Z^d)
    IntMat wedge;     // A^A on the standard e_i ^ e_j (i<j) basis

    // Psi(B) for B commuting with A; exact integer arithmetic. Throws if
    // (B^B)W does not lie in W over Z.
    IntMat psi(const IntMat& b) const;
};

WedgeRestriction wedge_restriction(const SymplecticMatrix& a);

// A^A on 2-vectors for any square integer matrix (basis e_i ^ e_j, i < j).
IntMat wedge_square(const IntMat& a);

struct BruteForceResult {
    std::vector<IntMat> units;       // all bounded commuting matrices with |det| = 1
    std::vector<IntMat> generators;  // log-independent subset, deterministic order
    int rank = 0;
    long long candidates_checked = 0;
};

// Enumerates the bounded points of the commutant lattice of A (solved
// exactly as an integer kernel), keeps |det| = 1 (and B^T J B = J when
// symplectic_only), and measures the multiplicative rank of the group they
// generate via log-modulus eigenvalue vectors.
BruteForceResult brute_force_centralizer(const IntMat& a, std::int64_t entry_bound,
                                         bool symplectic_only);

struct RankBoundReport {
    bool satisfied = false;
    int action_rank = 0;       // rank of the log-vector lattice of the acting group
    int exponent_span = 0;     // independent Lyapunov functionals on R^k
};

// Lemma-style sanity bound rank(A) <= N. Precondition: no nonzero generator
// combination with |n|_inf <= 3 has all eigenvalues on the unit circle.
RankBoundReport rank_bound_check(const ActionSpec& a, std::uint64_t seed = 12345);

} // namespace nilact
