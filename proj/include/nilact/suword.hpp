#pragma once

#include "nilact/affine.hpp"

#include <vector>

namespace nilact {

enum class Slot { Stable, Unstable };

struct SuLetter {
    Slot slot;
    Vec vec; // element of E_0^s or E_0^u inside R^d
};

// Word in the free product E_0^s * E_0^u, kept in canonical alternating
// form: adjacent letters in the same slot are merged, zero letters dropped.
struct SuWord {
    std::vector<SuLetter> letters;

    static SuWord from_letters(std::vector<SuLetter> raw); // canonicalizes
    SuWord concat(const SuWord& other) const;              // this then other
    SuWord inverse() const;
    Vec pi(int d) const;                                   // sum of all letters
    bool is_center(int d, double tol = 1e-12) const {      // w in P^c
        return letters.empty() || pi(d).cwiseAbs().maxCoeff() <= tol;
    }
};

// Stable/unstable splitting data of an affine partially hyperbolic model.
struct SuModel {
    NilAutomorphism automorphism;
    LatticeSpec lattice;
    Mat stable_basis;    // d x dim E_0^s
    Mat unstable_basis;  // d x dim E_0^u

    // checked projection of an arbitrary vector into the slot subspace
    Vec into_slot(Slot slot, const Vec& v, double tol = 1e-9) const;
};

SuModel su_model(const NilAutomorphism& l, const LatticeSpec& lattice);

// Lemma-style normal form w = (commutators) v u. The commutator part lists
// genuine commutator words of the free product; recomposing everything
// reproduces the input word after reduction.
struct NormalForm {
    std::vector<SuWord> commutators;
    Vec stable;   // v in E_0^s
    Vec unstable; // u in E_0^u
};

NormalForm word_normal_form(const SuWord& w, int d);
SuWord recompose(const NormalForm& nf);

// Exact action on the affine model: letters apply right to left, each as the
// right translation x . exp((t, 0)). Satisfies Phi(eta^w x) = Phi(x) + Pi(w)
// with Phi the base projection.
GroupElement apply_su_word_affine(const SuWord& w, const GroupElement& x, const SuModel& model);

// z-displacement of a Pi(w) = 0 word; equals the signed omega-area of the
// polygon traced by the letters in application order (right to left).
double center_drift(const SuWord& w, const SuModel& model);

// Shoelace omega-area oracle over the application-order polygon.
double polygon_omega_area(const SuWord& w, const SuModel& model);

} // namespace nilact
