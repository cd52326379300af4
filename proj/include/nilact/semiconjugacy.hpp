#pragma once

#include "nilact/affine.hpp"

#include <string>
#include <vector>

namespace nilact {

// Gamma-invariant perturbation field v: X_Gamma -> g as a finite trig sum.
// Terms are evaluated against the fundamental-domain coordinates of the
// reduced point, which makes v(gamma x) = v(x) exact by construction;
// integer base frequencies (and center frequency divisible by r) keep the
// evaluation continuous across the domain seams.
struct CocycleTerm {
    IntVec freq;      // length 2n + 1 + m, ordered (q, p, z, t)
    LieElement amp;
    bool use_sin = true; // sin(2 pi f.x) or cos(2 pi f.x)
};

struct CocycleField {
    LatticeSpec lattice;
    std::vector<CocycleTerm> terms;

    LieElement eval(const GroupElement& x) const; // reduces x first
    bool empty() const { return terms.empty(); }
    // sum over terms of |amp| (1 + |freq|_1): the smallness statistic used
    // by the solver gate
    double c1_size() const;
};

// Perturbed map f x = L(x) e^{-v(x)}. Affine translations enter as the
// constant Fourier term of v (e^{-v} with v = log g0 is the right
// translation by g0^{-1}).
struct PerturbedMap {
    NilAutomorphism automorphism;
    CocycleField v;

    GroupElement apply(const GroupElement& x) const;
    // solves f(y) = x by Picard iteration from the automorphism inverse
    GroupElement apply_inverse(const GroupElement& x) const;
    Mat base_matrix() const { return automorphism.base_full().cast<double>(); }
};

struct SolverOptions {
    std::vector<int> grid;  // points per fundamental-domain coordinate (q,p,z,t)
    int depth = 60;
    int threads = 1;
};

struct SemiconjugacyField {
    LatticeSpec lattice;
    std::vector<int> grid;
    int depth = 0;
    Mat a_matrix;              // hyperbolic base matrix A = L_su (+ abelian block)
    std::vector<double> phi;   // grid-major samples, d doubles per point
    double residual_max = 0.0;
    double residual_mean = 0.0;
    std::vector<double> residual_field; // one double per grid point
    std::vector<std::string> warnings;

    int base_dim() const { return static_cast<int>(a_matrix.rows()); }
    long long points() const;
    // phi at a grid multi-index
    Vec phi_at(const std::vector<int>& idx) const;
    // multilinear interpolation over the periodic grid
    Vec phi_interp(const GroupElement& x) const;
    // Phi(x) = pi~(x) + phi(x); equivariant: Phi(gamma x) = Phi(x) + pi(gamma)
    Vec phi_map(const GroupElement& x) const;
    // series evaluation at an arbitrary point (no interpolation)
    Vec phi_series(const GroupElement& x, const PerturbedMap& f) const;
};

// Unique bounded solution of v_su(x) = phi(f x) - A phi(x) by truncated
// geometric series along exact orbits of the perturbed map:
//   phi_s(x) =  sum_{j=0..depth} A_s^j    v_s(f^{-j-1} x)
//   phi_u(x) = -sum_{j=0..depth} A_u^{-j-1} v_u(f^j x)
// Per-point series are summed deepest-first, so the output is identical for
// any thread count.
SemiconjugacyField solve_franks_manning(const PerturbedMap& f, const SolverOptions& opt);

// || Phi(f x) - A Phi(x) || over the grid, both sides evaluated by series.
std::pair<double, double> conjugacy_residual(const SemiconjugacyField& s, const PerturbedMap& f);

struct FiberProbeReport {
    int base_points = 0;
    int monotone_passes = 0;     // points where t -> <Phi(x exp(t e_sigma)), e_sigma> is strictly monotone
    int fiber_points = 0;
    int fiber_converged = 0;
    double fiber_max_spread = 0.0;  // max |(q,p,t)(z) - y| along the solved fiber
    double fiber_max_gap = 0.0;     // max jump between consecutive fiber samples
};

// Samples the preimage Phi^{-1}(y) along the center coordinate and checks
// the leaf-coordinate monotonicity proxy. Gated on c1_size(v) <= 0.2 * gap.
FiberProbeReport fiber_probe(const SemiconjugacyField& s, const PerturbedMap& f, const Vec& y,
                             int base_samples, std::uint64_t seed = 12345);

// min | log |lambda| | over the eigenvalues of the base matrix off the unit
// circle; 0 when the matrix is not hyperbolic.
double spectral_gap(const Mat& a);

// perturbation gate: c1_size(v) <= 0.2 * (lambda_max - 1), with lambda_max
// the largest eigenvalue modulus.
bool perturbation_gate(const PerturbedMap& f, std::string* message = nullptr);

void save_field(const SemiconjugacyField& s, const std::string& path);
SemiconjugacyField load_field(const std::string& path);
void export_residual_csv(const SemiconjugacyField& s, const std::string& path);

} // namespace nilact
