#pragma once

#include "nilact/group.hpp"
#include "nilact/polynomial.hpp"

#include <optional>

namespace nilact {

// Integer matrix with M^T J M = J checked on construction.
struct SymplecticMatrix {
    IntMat m;

    explicit SymplecticMatrix(IntMat mat);
    int dim() const { return static_cast<int>(m.rows()); }
};

// Automorphism of G = H^n x R^m: base symplectic block on (q,p), integer
// block on t, and the quadratic center correction
//   L(q,p,z,t) = (M(q,p), z + B(v,v)/2, N t),   B(v,w) = (Mv)_q.(Mw)_p - v_q.w_p,
// which is the unique symmetric normalization making L a homomorphism.
struct NilAutomorphism {
    IntMat base;          // 2n x 2n, symplectic
    IntMat abelian;       // m x m, |det| = 1
    IntMat center_form;   // B, symmetric 2n x 2n integer matrix
    int n = 0;
    int m = 0;

    // Smallest center denominator r such that L preserves the (q,p,t,z/r)
    // lattice: 1 when B has even diagonal, otherwise 2.
    int required_center_denominator() const;

    GroupElement apply(const GroupElement& x) const;
    LieElement apply_lie(const LieElement& x) const;
    NilAutomorphism inverse() const;

    // full linear map on the base R^{2n+m}
    IntMat base_full() const { return block_diag(base, abelian); }
};

// B(v,w) = (Mv)_q.(Mw)_p - v_q.w_p for an arbitrary integer matrix; the
// matrix is symmetric exactly when m is symplectic.
IntMat center_bilinear_form(const IntMat& m);

NilAutomorphism automorphism_from_symplectic(const SymplecticMatrix& m, const IntMat& abelian);
NilAutomorphism identity_automorphism(const LatticeSpec& g);
NilAutomorphism compose(const NilAutomorphism& f, const NilAutomorphism& g);

// f(x) = L(x) g0^{-1}
struct AffineMap {
    NilAutomorphism automorphism;
    GroupElement translation;

    GroupElement apply(const GroupElement& x) const;
    AffineMap inverse() const;
};

AffineMap compose(const AffineMap& f, const AffineMap& g);

struct SplittingDims {
    bool partially_hyperbolic = false;
    int stable = 0;
    int center = 0;
    int unstable = 0;
};

// True iff the base (with abelian block) is hyperbolic; then the center is
// the 1-dimensional derived subgroup [G,G]. For the torus case (n = 0) an
// explicit rational center direction must be an eigenvector with eigenvalue
// +-1 of the abelian block; the splitting is computed on the quotient.
SplittingDims is_partially_hyperbolic_1d_center(const AffineMap& f,
                                                std::optional<IntVec> torus_center = {});

} // namespace nilact
