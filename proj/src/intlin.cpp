#include "nilact/intlin.hpp"

#include <numeric>

namespace nilact {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
    if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
        throw std::overflow_error("integer linear algebra: 64-bit overflow");
    return static_cast<std::int64_t>(v);
}

using Mat128 = std::vector<std::vector<i128>>;

Mat128 to128(const IntMat& m) {
    Mat128 a(m.rows(), std::vector<i128>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
    return a;
}

} // namespace

std::int64_t det_exact(const IntMat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det: square matrix required");
    const int n = static_cast<int>(m.rows());
    if (n == 0) return 1;
    Mat128 a = to128(m);
    i128 prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) { piv = i; break; }
            if (piv < 0) return 0;
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return narrow(sign * a[n - 1][n - 1]);
}

std::vector<std::int64_t> char_poly(const IntMat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("char_poly: square matrix required");
    const int n = static_cast<int>(m.rows());
    // Faddeev-LeVerrier: M_1 = A, c_k = -tr(M_k)/k, M_{k+1} = A (M_k + c_k I).
    Mat128 a = to128(m);
    Mat128 mk = a;
    std::vector<i128> c(n + 1, 0);
    c[n] = 1;
    for (int k = 1; k <= n; ++k) {
        i128 tr = 0;
        for (int i = 0; i < n; ++i) tr += mk[i][i];
        if (tr % k != 0) throw std::logic_error("char_poly: non-integer trace step");
        c[n - k] = -tr / k;
        if (k == n) break;
        Mat128 tmp(n, std::vector<i128>(n, 0));
        for (int i = 0; i < n; ++i) mk[i][i] += c[n - k];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                i128 s = 0;
                for (int l = 0; l < n; ++l) s += a[i][l] * mk[l][j];
                tmp[i][j] = s;
            }
        mk = std::move(tmp);
    }
    std::vector<std::int64_t> out(n + 1);
    for (int i = 0; i <= n; ++i) out[i] = narrow(c[i]);
    return out;
}

IntMat kernel_lattice(const IntMat& m) {
    const int r = static_cast<int>(m.rows());
    const int c = static_cast<int>(m.cols());
    Mat128 a = to128(m);
    Mat128 u(c, std::vector<i128>(c, 0));
    for (int i = 0; i < c; ++i) u[i][i] = 1;

    auto col_swap = [&](int x, int y) {
        for (int i = 0; i < r; ++i) std::swap(a[i][x], a[i][y]);
        for (int i = 0; i < c; ++i) std::swap(u[i][x], u[i][y]);
    };
    auto col_axpy = [&](int dst, int src, i128 f) { // col_dst -= f * col_src
        for (int i = 0; i < r; ++i) a[i][dst] -= f * a[i][src];
        for (int i = 0; i < c; ++i) u[i][dst] -= f * u[i][src];
    };
    auto col_neg = [&](int x) {
        for (int i = 0; i < r; ++i) a[i][x] = -a[i][x];
        for (int i = 0; i < c; ++i) u[i][x] = -u[i][x];
    };

    int lead = 0;
    for (int row = 0; row < r && lead < c; ++row) {
        // Euclidean reduction across columns lead..c-1 on this row.
        while (true) {
            int piv = -1;
            i128 best = 0;
            for (int j = lead; j < c; ++j) {
                i128 v = a[row][j] < 0 ? -a[row][j] : a[row][j];
                if (v != 0 && (piv < 0 || v < best)) { piv = j; best = v; }
            }
            if (piv < 0) break; // row is zero on remaining columns
            col_swap(lead, piv);
            if (a[row][lead] < 0) col_neg(lead);
            bool clean = true;
            for (int j = lead + 1; j < c; ++j) {
                if (a[row][j] == 0) continue;
                i128 q = a[row][j] / a[row][lead];
                // round toward floor so the remainder is in [0, pivot)
                if (a[row][j] % a[row][lead] < 0) q -= 1;
                col_axpy(j, lead, q);
                if (a[row][j] != 0) clean = false;
            }
            if (clean) { ++lead; break; }
        }
    }
    // Columns lead..c-1 of a are zero; corresponding u columns span the kernel.
    IntMat out(c, c - lead);
    for (int j = lead; j < c; ++j)
        for (int i = 0; i < c; ++i) out(i, j - lead) = narrow(u[i][j]);
    return out;
}

IntMat symplectic_form(int d) {
    if (d <= 0 || d % 2 != 0) throw std::invalid_argument("symplectic form needs even dimension");
    const int n = d / 2;
    IntMat j = IntMat::Zero(d, d);
    for (int i = 0; i < n; ++i) {
        j(i, n + i) = 1;
        j(n + i, i) = -1;
    }
    return j;
}

bool is_symplectic(const IntMat& m) { return symplectic_defect_entry(m).first < 0; }

std::pair<int, int> symplectic_defect_entry(const IntMat& m) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0) return {0, 0};
    IntMat j = symplectic_form(static_cast<int>(m.rows()));
    IntMat g = m.transpose() * j * m - j;
    for (int i = 0; i < g.rows(); ++i)
        for (int k = 0; k < g.cols(); ++k)
            if (g(i, k) != 0) return {i, k};
    return {-1, -1};
}

IntMat block_diag(const IntMat& a, const IntMat& b) {
    IntMat out = IntMat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

int span_rank(const std::vector<Vec>& vecs, double tol) {
    std::vector<Vec> basis;
    for (const Vec& v : vecs) {
        Vec r = v;
        for (const Vec& b : basis) r -= (r.dot(b) / b.squaredNorm()) * b;
        if (r.norm() > tol * (1.0 + v.norm())) basis.push_back(r);
    }
    return static_cast<int>(basis.size());
}

} // namespace nilact
