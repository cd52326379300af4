#include "nilact/affine.hpp"

#include <cmath>
#include <sstream>

namespace nilact {

SymplecticMatrix::SymplecticMatrix(IntMat mat) : m(std::move(mat)) {
    if (m.rows() != m.cols()) throw std::invalid_argument("symplectic matrix must be square");
    if (m.rows() % 2 != 0) throw std::invalid_argument("symplectic matrix must have even dimension");
    auto bad = symplectic_defect_entry(m);
    if (bad.first >= 0) {
        std::ostringstream os;
        os << "matrix is not symplectic: (M^T J M - J)(" << bad.first << "," << bad.second
           << ") != 0";
        throw std::invalid_argument(os.str());
    }
}

namespace {

} // namespace

// B(v, w) = (Mv)_q . (Mw)_p - v_q . w_p; symmetric as a matrix exactly when
// m is symplectic (the antisymmetric part is M^T J M - J).
IntMat center_bilinear_form(const IntMat& m) {
    const int d = static_cast<int>(m.rows());
    const int n = d / 2;
    IntMat s = IntMat::Zero(d, d); // sigma(v, w) = v_q . w_p
    for (int i = 0; i < n; ++i) s(i, n + i) = 1;
    return m.transpose() * s * m - s;
}

int NilAutomorphism::required_center_denominator() const {
    // beta(v) = v^T center_form v / 2 with center_form = B; integral on Z^d
    // iff every diagonal entry of B is even.
    for (int i = 0; i < center_form.rows(); ++i)
        if (center_form(i, i) % 2 != 0) return 2;
    return 1;
}

GroupElement NilAutomorphism::apply(const GroupElement& x) const {
    if (x.n() != n || x.m() != m)
        throw std::invalid_argument("automorphism applied to element of wrong dimensions");
    Vec v(2 * n);
    v << x.q, x.p;
    Vec w = base.cast<double>() * v;
    double beta = 0.5 * v.dot(center_form.cast<double>() * v);
    return GroupElement(w.head(n), w.tail(n), x.z + beta, abelian.cast<double>() * x.t);
}

LieElement NilAutomorphism::apply_lie(const LieElement& x) const {
    // derivative at the identity: block diag(base, 1, abelian)
    Vec v(2 * n);
    v << x.a, x.b;
    Vec w = base.cast<double>() * v;
    return LieElement(w.head(n), w.tail(n), x.c, abelian.cast<double>() * x.s);
}

NilAutomorphism NilAutomorphism::inverse() const {
    IntMat binv = IntMat::Zero(base.rows(), base.cols());
    if (n > 0) {
        // M^{-1} = J^{-1} M^T J for symplectic M
        IntMat j = symplectic_form(2 * n);
        binv = -j * base.transpose() * j; // J^{-1} = -J
    }
    IntMat ainv = IntMat::Zero(m, m);
    if (m > 0) {
        // |det| = 1 so the adjugate is the exact inverse up to sign
        Mat inv = abelian.cast<double>().inverse();
        for (int i = 0; i < m; ++i)
            for (int jx = 0; jx < m; ++jx) ainv(i, jx) = std::llround(inv(i, jx));
        if ((ainv * abelian - IntMat::Identity(m, m)).cwiseAbs().maxCoeff() != 0)
            throw std::invalid_argument("abelian block is not invertible over Z");
    }
    NilAutomorphism out;
    out.n = n;
    out.m = m;
    out.base = binv;
    out.abelian = ainv;
    out.center_form = n > 0 ? center_bilinear_form(binv) : IntMat::Zero(0, 0);
    return out;
}

NilAutomorphism automorphism_from_symplectic(const SymplecticMatrix& m, const IntMat& abelian) {
    if (abelian.rows() != abelian.cols())
        throw std::invalid_argument("abelian block must be square");
    if (abelian.rows() > 0) {
        std::int64_t d = det_exact(abelian);
        if (d != 1 && d != -1)
            throw std::invalid_argument("abelian block must have determinant +-1");
    }
    NilAutomorphism out;
    out.n = static_cast<int>(m.m.rows()) / 2;
    out.m = static_cast<int>(abelian.rows());
    out.base = m.m;
    out.abelian = abelian;
    out.center_form = out.n > 0 ? center_bilinear_form(m.m) : IntMat::Zero(0, 0);
    return out;
}

NilAutomorphism identity_automorphism(const LatticeSpec& g) {
    NilAutomorphism out;
    out.n = g.n;
    out.m = g.m;
    out.base = IntMat::Identity(2 * g.n, 2 * g.n);
    out.abelian = IntMat::Identity(g.m, g.m);
    out.center_form = IntMat::Zero(2 * g.n, 2 * g.n);
    return out;
}

NilAutomorphism compose(const NilAutomorphism& f, const NilAutomorphism& g) {
    if (f.n != g.n || f.m != g.m) throw std::invalid_argument("automorphism dimension mismatch");
    NilAutomorphism out;
    out.n = f.n;
    out.m = f.m;
    out.base = f.base * g.base;
    out.abelian = f.abelian * g.abelian;
    out.center_form = out.n > 0 ? center_bilinear_form(out.base) : IntMat::Zero(0, 0);
    return out;
}

GroupElement AffineMap::apply(const GroupElement& x) const {
    return group_mul(automorphism.apply(x), group_inv(translation));
}

AffineMap AffineMap::inverse() const {
    // y = L(x) g^{-1}  =>  x = L^{-1}(y g)
    NilAutomorphism linv = automorphism.inverse();
    return AffineMap{linv, group_inv(linv.apply(translation))};
}

AffineMap compose(const AffineMap& f, const AffineMap& g) {
    // f(g(x)) = Lf(Lg(x) b^{-1}) a^{-1} = (Lf Lg)(x) (a Lf(b))^{-1}
    return AffineMap{compose(f.automorphism, g.automorphism),
                     group_mul(f.translation, f.automorphism.apply(g.translation))};
}

SplittingDims is_partially_hyperbolic_1d_center(const AffineMap& f,
                                                std::optional<IntVec> torus_center) {
    SplittingDims out;
    const NilAutomorphism& l = f.automorphism;
    IntMat full = l.base_full();
    if (l.n == 0) {
        if (!torus_center)
            throw std::invalid_argument(
                "torus case needs an explicit center direction (no Heisenberg factor)");
        IntVec c = *torus_center;
        IntVec img = full * c;
        if ((img - c).cwiseAbs().maxCoeff() != 0 && (img + c).cwiseAbs().maxCoeff() != 0)
            throw std::invalid_argument("given center direction is not fixed up to sign");
    }
    const double tol = 1e-9;
    Eigen::EigenSolver<Mat> es(full.cast<double>());
    int stable = 0, unstable = 0, neutral = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        double a = std::abs(es.eigenvalues()[i]);
        if (a <= 0 || std::abs(std::log(a)) <= tol) ++neutral;
        else if (a < 1) ++stable;
        else ++unstable;
    }
    if (l.n == 0) neutral -= 1; // the declared center direction itself
    out.stable = stable;
    out.unstable = unstable;
    out.center = 1;
    out.partially_hyperbolic = (neutral == 0 && stable > 0 && unstable > 0);
    if (!out.partially_hyperbolic) {
        out.center = neutral + 1;
    }
    return out;
}

} // namespace nilact
