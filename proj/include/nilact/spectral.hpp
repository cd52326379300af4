#pragma once

#include "nilact/intlin.hpp"
#include "nilact/polynomial.hpp"

#include <complex>
#include <random>
#include <string>
#include <vector>

namespace nilact {

// Linearization of a Z^k action: k pairwise-commuting integer matrices on
// the base R^d (symplectic blocks, abelian blocks, or plain GL(d,Z) for the
// torus case).
struct ActionSpec {
    int k = 0;
    int d = 0;
    std::vector<IntMat> generators;

    ActionSpec() = default;
    explicit ActionSpec(std::vector<IntMat> gens); // validates commutation

    IntMat power(const IntVec& n) const; // rho^n (negative entries allowed)
};

// chi(n) = coeffs . n with Lyapunov space of dimension space_dim.
struct ExponentFunctional {
    Vec coeffs;                    // length k
    int space_dim = 0;
    Mat space_basis;               // d x space_dim, real form
    std::vector<std::complex<double>> combo_eigenvalues; // of the generic combination
};

struct LyapunovData {
    std::vector<ExponentFunctional> exponents; // nonzero functionals
    int center_dim = 0;
    Mat center_basis;
    IntVec combo_coeffs;           // the generic combination used
    IntPoly combo_char_poly;
};

struct CoarseExponent {
    std::vector<int> members;      // indices into LyapunovData::exponents
    Vec direction;                 // unit representative
    int space_dim = 0;
};

struct Chamber {
    std::vector<int> signs;        // +-1 per wall
    IntVec witness;
};

struct ChamberComplex {
    std::vector<Vec> walls;        // unit normals, one per +- pair of coarse exponents
    std::vector<Chamber> chambers; // empty for k > 3 (walls still reported)
    bool enumerated = false;
};

// Joint eigenstructure by diagonalizing a generic integer combination of the
// generators (retried on eigenvalue collision); each generator's eigenvalue
// is then read off on each joint eigenvector.
LyapunovData lyapunov_exponents(const ActionSpec& a, std::uint64_t seed = 12345);

// Partition by positive proportionality after unit normalization (1e-9);
// negatively proportional classes stay distinct.
std::vector<CoarseExponent> coarse_exponents(const std::vector<ExponentFunctional>& exps);

// Wall/chamber enumeration; for k <= 3 chambers are enumerated by dense
// direction sampling, each with an integer witness re-checked against every
// wall sign. shards > 1 splits the sampling; the result is shard-independent.
ChamberComplex weyl_chambers(const std::vector<CoarseExponent>& coarse,
                             const std::vector<ExponentFunctional>& exps, int k,
                             int shards = 1);

// Brute-force chamber count: classify `samples` random unit directions by
// wall sign vector.
int chamber_count_sampling(const ChamberComplex& complex, int k, int samples,
                           std::uint64_t seed = 12345);

struct RankOneFactorReport {
    bool has_rank_one_factor = false;
    IntMat witness_subspace;      // columns span the invariant W with rank-<=1 quotient
    int quotient_dim = 0;
    int quotient_exponent_rank = 0;
    std::string note;
};

// Enumerates rational invariant subspaces from the Q-irreducible factors of
// the generic combination's characteristic polynomial and checks the
// exponent span of every positive-dimensional quotient.
RankOneFactorReport has_rank_one_factor(const ActionSpec& a, std::uint64_t seed = 12345);

struct HigherRankReport {
    bool higher_rank = false;
    int independent_coarse_count = 0; // number of +- dependence classes
    RankOneFactorReport factor;
};

HigherRankReport is_higher_rank(const ActionSpec& a, std::uint64_t seed = 12345);

// Rational closure of V = sum of E_0^[eta] over [eta] != +-[chi]; true iff
// the closure is all of R^d (the minimal-translation criterion). Pass
// exclude < 0 to exclude nothing.
bool rational_closure_minimality(int exclude_coarse_index, const ActionSpec& a,
                                 std::uint64_t seed = 12345);

} // namespace nilact
