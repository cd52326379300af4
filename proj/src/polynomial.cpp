#include "nilact/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace nilact {

namespace {
using i128 = __int128;

std::int64_t narrow(i128 v) {
    if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
        throw std::overflow_error("polynomial arithmetic: 64-bit overflow");
    return static_cast<std::int64_t>(v);
}

std::vector<std::int64_t> divisors_signed(std::int64_t v) {
    // all divisors of |v|, both signs, ascending by absolute value
    std::vector<std::int64_t> out;
    std::int64_t a = v < 0 ? -v : v;
    for (std::int64_t d = 1; d * d <= a; ++d) {
        if (a % d != 0) continue;
        out.push_back(d);
        if (d != a / d) out.push_back(a / d);
    }
    std::sort(out.begin(), out.end());
    std::vector<std::int64_t> full;
    for (std::int64_t d : out) {
        full.push_back(d);
        full.push_back(-d);
    }
    return full;
}

} // namespace

IntPoly::IntPoly(std::vector<std::int64_t> coeffs) : c(std::move(coeffs)) {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

std::int64_t IntPoly::eval_int(std::int64_t x) const {
    i128 acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * x + *it;
        if (acc > i128(INT64_MAX) * 1024 || acc < i128(INT64_MIN) * 1024)
            throw std::overflow_error("poly eval overflow");
    }
    return narrow(acc);
}

double IntPoly::eval(double x) const {
    double acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + static_cast<double>(*it);
    return acc;
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.c.empty() || b.c.empty()) return IntPoly{};
    std::vector<i128> acc(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) acc[i + j] += i128(a.c[i]) * b.c[j];
    std::vector<std::int64_t> out(acc.size());
    for (size_t i = 0; i < acc.size(); ++i) out[i] = narrow(acc[i]);
    return IntPoly(std::move(out));
}

bool divide_exact(const IntPoly& a, const IntPoly& b, IntPoly* quotient) {
    if (b.c.empty()) throw std::invalid_argument("division by zero polynomial");
    if (a.degree() < b.degree()) return false;
    std::vector<i128> rem(a.c.begin(), a.c.end());
    const int db = b.degree();
    const i128 lead = b.c.back();
    std::vector<std::int64_t> q(a.degree() - db + 1, 0);
    for (int k = a.degree() - db; k >= 0; --k) {
        i128 top = rem[k + db];
        if (top % lead != 0) return false;
        i128 f = top / lead;
        q[k] = narrow(f);
        for (int j = 0; j <= db; ++j) rem[k + j] -= f * b.c[j];
    }
    for (i128 v : rem)
        if (v != 0) return false;
    if (quotient) *quotient = IntPoly(std::move(q));
    return true;
}

IntMat companion_matrix(const IntPoly& p) {
    if (!p.monic()) throw std::invalid_argument("companion matrix needs a monic polynomial");
    const int n = p.degree();
    IntMat m = IntMat::Zero(n, n);
    for (int i = 1; i < n; ++i) m(i, i - 1) = 1;
    for (int i = 0; i < n; ++i) m(i, n - 1) = -p.c[i];
    return m;
}

std::vector<std::complex<double>> poly_roots(const IntPoly& p) {
    const int n = p.degree();
    if (n <= 0) return {};
    Mat comp = Mat::Zero(n, n);
    const double lead = static_cast<double>(p.c.back());
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -static_cast<double>(p.c[i]) / lead;
    Eigen::EigenSolver<Mat> es(comp);
    std::vector<std::complex<double>> roots(n);
    for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()[i];
    std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

namespace {

// Search for one monic factor of degree deg via Kronecker interpolation.
bool find_factor(const IntPoly& p, int deg, IntPoly* out) {
    // interpolation nodes 0, 1, -1, 2, -2, ...
    std::vector<std::int64_t> nodes;
    for (int i = 0; static_cast<int>(nodes.size()) < deg + 1; ++i) {
        if (i == 0) nodes.push_back(0);
        else {
            nodes.push_back(i);
            if (static_cast<int>(nodes.size()) < deg + 1) nodes.push_back(-i);
        }
    }
    std::vector<std::vector<std::int64_t>> choices(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) {
        std::int64_t v = p.eval_int(nodes[i]);
        if (v == 0) { // linear factor (t - node) splits off; caller retries
            *out = IntPoly({-nodes[i], 1});
            return true;
        }
        choices[i] = divisors_signed(v);
    }
    // Mignotte-style coefficient cap for a monic factor of p.
    double norm2 = 0;
    for (auto v : p.c) norm2 += static_cast<double>(v) * static_cast<double>(v);
    const double coeff_cap = std::ldexp(std::sqrt(norm2), deg) + 1.0;

    std::vector<size_t> idx(nodes.size(), 0);
    long long tried = 0;
    const long long cap = 4'000'000;
    while (true) {
        if (++tried > cap) throw std::runtime_error("factorization: divisor search too large");
        // Lagrange interpolation of candidate values over the nodes.
        // Build with rational accumulation: scale by common denominator.
        // For our node sets the denominators are small; use doubles to
        // screen, then verify exactly by division.
        bool plausible = true;
        std::vector<double> coeff(deg + 1, 0.0);
        for (size_t i = 0; i < nodes.size() && plausible; ++i) {
            double li = 1.0;
            std::vector<double> num(1, 1.0);
            for (size_t j = 0; j < nodes.size(); ++j) {
                if (j == i) continue;
                li *= static_cast<double>(nodes[i] - nodes[j]);
                num.insert(num.begin(), 0.0);
                for (size_t k = 0; k + 1 < num.size(); ++k)
                    num[k] += -static_cast<double>(nodes[j]) * num[k + 1];
            }
            const double w = static_cast<double>(choices[i][idx[i]]) / li;
            for (size_t k = 0; k < num.size() && k < coeff.size(); ++k) coeff[k] += w * num[k];
        }
        if (std::abs(coeff[deg] - 1.0) < 1e-6) { // monic candidates only
            std::vector<std::int64_t> ic(deg + 1);
            bool integral = true;
            for (int k = 0; k <= deg && integral; ++k) {
                double r = std::round(coeff[k]);
                if (std::abs(coeff[k] - r) > 1e-6 || std::abs(r) > coeff_cap) integral = false;
                else ic[k] = static_cast<std::int64_t>(r);
            }
            if (integral) {
                IntPoly g(std::move(ic));
                if (g.degree() == deg && divide_exact(p, g, nullptr)) {
                    *out = g;
                    return true;
                }
            }
        }
        // next divisor tuple
        size_t pos = 0;
        while (pos < idx.size()) {
            if (++idx[pos] < choices[pos].size()) break;
            idx[pos] = 0;
            ++pos;
        }
        if (pos == idx.size()) return false;
    }
}

} // namespace

std::vector<std::pair<IntPoly, int>> factor_monic(const IntPoly& p) {
    if (!p.monic()) throw std::invalid_argument("factor_monic: monic polynomial required");
    if (p.degree() > 8) throw std::invalid_argument("factorization unsupported above degree 8");
    std::vector<std::pair<IntPoly, int>> factors;
    IntPoly rest = p;
    while (rest.degree() > 0) {
        IntPoly g;
        bool split = false;
        for (int deg = 1; deg <= rest.degree() / 2; ++deg) {
            if (find_factor(rest, deg, &g)) { split = true; break; }
        }
        if (!split) g = rest; // rest itself is irreducible
        int mult = 0;
        IntPoly q;
        while (divide_exact(rest, g, &q)) {
            rest = q;
            ++mult;
        }
        auto it = std::find_if(factors.begin(), factors.end(),
                               [&](const auto& f) { return f.first == g; });
        if (it != factors.end()) it->second += mult;
        else factors.emplace_back(g, mult);
    }
    return factors;
}

bool is_irreducible(const IntPoly& p) {
    auto f = factor_monic(p);
    return f.size() == 1 && f[0].second == 1;
}

RootClassification classify_roots(const IntPoly& p) {
    if (p.leading() == 0) throw std::invalid_argument("classify_roots: zero leading coefficient");
    RootClassification rc;
    rc.roots = poly_roots(p);
    const double tol = 1e-9;
    bool on_circle = false;
    int complex_count = 0;
    for (auto z : rc.roots) {
        // companion eigensolve reports conjugate pairs with matching |Im|
        if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z))) ++complex_count;
        else ++rc.r1;
        const double a = std::abs(z);
        if (a == 0.0 || std::abs(std::log(a)) <= tol) on_circle = true;
    }
    rc.r2 = complex_count / 2;
    rc.hyperbolic = !on_circle;
    if (p.degree() <= 8 && p.monic()) {
        rc.irreducible_known = true;
        rc.irreducible = is_irreducible(p);
    }
    return rc;
}

RootClassification classify_matrix(const IntMat& m) {
    return classify_roots(IntPoly(char_poly(m)));
}

double mahler_measure(const IntPoly& p) {
    if (!p.monic()) throw std::invalid_argument("mahler_measure: monic polynomial required");
    if (p.c.empty() || (p.c.front() != 1 && p.c.front() != -1))
        throw std::invalid_argument("mahler_measure: constant term must be +-1");
    double m = 1.0;
    for (auto z : poly_roots(p)) m *= std::max(1.0, std::abs(z));
    return m;
}

} // namespace nilact
