#pragma once

#include "nilact/intlin.hpp"

#include <utility>

namespace nilact {

// Dimensions of G = H^n x R^m and the lattice Gamma with q, p, t integral
// and z in (1/r) Z. The associated nilmanifold has base torus T^{2n+m} and a
// circle fiber in the center coordinate (when n >= 1).
struct LatticeSpec {
    int n = 1;
    int m = 0;
    int r = 1;

    int base_dim() const { return 2 * n + m; }
    bool operator==(const LatticeSpec& o) const { return n == o.n && m == o.m && r == o.r; }
};

// Point of G: multiplication (q,p,z,t)(q',p',z',t') = (q+q', p+p', z+z'+q.p', t+t').
struct GroupElement {
    Vec q, p, t;
    double z = 0.0;

    GroupElement() = default;
    GroupElement(Vec q_, Vec p_, double z_, Vec t_)
        : q(std::move(q_)), p(std::move(p_)), t(std::move(t_)), z(z_) {}

    static GroupElement identity(const LatticeSpec& g);
    int n() const { return static_cast<int>(q.size()); }
    int m() const { return static_cast<int>(t.size()); }

    // base coordinates (q, p, t) as a vector in R^{2n+m}
    Vec base() const;
};

// Lie algebra element (a, b, c, s); bracket [(X,Z),(X',Z')] = (0, omega(X,X')).
struct LieElement {
    Vec a, b, s;
    double c = 0.0;

    LieElement() = default;
    LieElement(Vec a_, Vec b_, double c_, Vec s_)
        : a(std::move(a_)), b(std::move(b_)), s(std::move(s_)), c(c_) {}

    static LieElement zero(const LatticeSpec& g);
    Vec base() const;
};

GroupElement group_mul(const GroupElement& g, const GroupElement& h);
GroupElement group_inv(const GroupElement& g);

// omega((a,b),(a',b')) = a.b' - b.a'
double omega(const LieElement& x, const LieElement& y);
LieElement bracket(const LieElement& x, const LieElement& y);

// exp(a,b,c,s) = (a, b, c + a.b/2, s); log is the exact inverse.
GroupElement exp_map(const LieElement& x);
LieElement log_map(const GroupElement& g);

// || log(exp(X) exp(Y)) - (X + Y + [X,Y]/2) ||, contract <= 1e-12
double bch_check(const LieElement& x, const LieElement& y);

GroupElement commutator(const GroupElement& g, const GroupElement& h);

// Fundamental-domain representative: returns (gamma, g0) with g in Gamma,
// g = gamma * g0 and g0 with q,p,t in [0,1)^*, z in [0, 1/r). Idempotent on
// reduced input.
std::pair<GroupElement, GroupElement> lattice_reduce(const GroupElement& g,
                                                     const LatticeSpec& gamma);

bool in_lattice(const GroupElement& g, const LatticeSpec& gamma, double tol = 1e-9);

// Homogeneous quasi-norm max(|(q,p,t)|_2, sqrt|z|); scales linearly under
// the dilation (q,p,z,t) -> (Lq, Lp, L^2 z, Lt).
double quasi_norm(const GroupElement& g);
GroupElement dilate(const GroupElement& g, double lambda);

// Quasi-norm of exp(0,0,Z,0); the left-invariant bound d(e, g_c) <= 4 sqrt|Z|
// holds with room to spare in this gauge.
double center_distance_bound(double z);

double group_dist(const GroupElement& g, const GroupElement& h); // quasi_norm(g^-1 h)

} // namespace nilact
