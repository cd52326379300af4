#include "nilact/centralizer.hpp"
#include <functional>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nilact {

namespace {

void require_admissible(const RootClassification& rc, const char* who) {
    if (!rc.irreducible_known || !rc.irreducible) {
        std::ostringstream os;
        os << who << ": characteristic polynomial must be irreducible";
        throw std::invalid_argument(os.str());
    }
    if (!rc.hyperbolic) {
        // name the offending root for the error report
        double closest = 1e300;
        std::complex<double> bad;
        for (auto z : rc.roots) {
            double g = std::abs(std::log(std::max(1e-300, std::abs(z))));
            if (g < closest) {
                closest = g;
                bad = z;
            }
        }
        std::ostringstream os;
        os << who << ": matrix is not hyperbolic (root " << bad.real();
        if (bad.imag() >= 0) os << "+" << bad.imag() << "i";
        else os << bad.imag() << "i";
        os << " lies on the unit circle)";
        throw std::invalid_argument(os.str());
    }
}

} // namespace

int rank_centralizer_gl(const IntMat& a) {
    RootClassification rc = classify_matrix(a);
    require_admissible(rc, "rank_centralizer_gl");
    return rc.r1 + rc.r2 - 1;
}

int rank_centralizer_sp(const SymplecticMatrix& a) {
    RootClassification rc = classify_matrix(a.m);
    require_admissible(rc, "rank_centralizer_sp");
    return rc.r1 / 2 + rc.r2 / 2;
}

CentralizerReport centralizer_report(const IntMat& a, bool run_oracle,
                                     std::int64_t oracle_bound) {
    CentralizerReport rep;
    rep.matrix = a;
    rep.classification = classify_matrix(a);
    require_admissible(rep.classification, "centralizer_report");
    rep.rank_gl = rep.classification.r1 + rep.classification.r2 - 1;
    if (is_symplectic(a)) {
        rep.rank_sp = rep.classification.r1 / 2 + rep.classification.r2 / 2;
        rep.r0 = rep.rank_sp;
        rep.r0_exceeds_one = *rep.rank_sp > 1; // automatic once d >= 6
    }
    if (run_oracle) {
        rep.oracle_rank_gl = brute_force_centralizer(a, oracle_bound, false).rank;
        if (rep.rank_sp)
            rep.oracle_rank_sp = brute_force_centralizer(a, oracle_bound, true).rank;
    }
    return rep;
}

IntMat wedge_square(const IntMat& a) {
    const int d = static_cast<int>(a.rows());
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) pairs.emplace_back(i, j);
    const int nd = static_cast<int>(pairs.size());
    IntMat w(nd, nd);
    for (int col = 0; col < nd; ++col) {
        auto [i, j] = pairs[col];
        for (int row = 0; row < nd; ++row) {
            auto [k, l] = pairs[row];
            w(row, col) = a(k, i) * a(l, j) - a(l, i) * a(k, j);
        }
    }
    return w;
}

WedgeRestriction wedge_restriction(const SymplecticMatrix& a) {
    RootClassification rc = classify_matrix(a.m);
    require_admissible(rc, "wedge_restriction");
    WedgeRestriction out;
    out.wedge = wedge_square(a.m);
    const int nd = static_cast<int>(out.wedge.rows());
    IntMat sys = out.wedge - IntMat::Identity(nd, nd);
    out.w_basis = kernel_lattice(sys);
    if (out.w_basis.cols() != a.dim() / 2) {
        std::ostringstream os;
        os << "wedge 1-eigenspace has dimension " << out.w_basis.cols() << ", expected "
           << a.dim() / 2 << " (reducible input or arithmetic failure)";
        throw std::runtime_error(os.str());
    }
    return out;
}

IntMat WedgeRestriction::psi(const IntMat& b) const {
    // solve w_basis * X = (B^B) * w_basis exactly over Z
    IntMat bb = wedge_square(b);
    IntMat rhs = bb * w_basis;
    const int cols = static_cast<int>(w_basis.cols());
    // stack [w_basis | -rhs_col] and take the kernel to solve each column
    IntMat x(cols, cols);
    for (int c = 0; c < cols; ++c) {
        IntMat sys(w_basis.rows(), cols + 1);
        sys.leftCols(cols) = w_basis;
        sys.col(cols) = -rhs.col(c);
        IntMat ker = kernel_lattice(sys);
        if (ker.cols() != 1)
            throw std::runtime_error("psi: image is not uniquely expressible in the W basis");
        IntVec k = ker.col(0);
        if (k[cols] == 0) throw std::runtime_error("psi: image leaves W");
        if (k[cols] != 1 && k[cols] != -1)
            throw std::runtime_error("psi: image is not integral over W's lattice basis");
        for (int r = 0; r < cols; ++r) x(r, c) = k[cols] == 1 ? k[r] : -k[r];
    }
    return x;
}

BruteForceResult brute_force_centralizer(const IntMat& a, std::int64_t entry_bound,
                                         bool symplectic_only) {
    const int d = static_cast<int>(a.rows());
    if (d > 4) throw std::invalid_argument("brute force oracle restricted to d <= 4");
    if (symplectic_only && d % 2 != 0)
        throw std::invalid_argument("symplectic filter needs even dimension");

    // commutant lattice: integer kernel of vec(AB - BA) = (I(x)A - A^T(x)I) vec(B)
    IntMat sys = IntMat::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                sys(i * d + j, i * d + k) += a(k, j);  // (BA)_{ij} over B_{ik}
                sys(i * d + j, k * d + j) -= a(i, k);  // (AB)_{ij} over B_{kj}
            }
    IntMat ker = kernel_lattice(sys);
    const int r = static_cast<int>(ker.cols());
    std::vector<IntMat> basis(r);
    for (int b = 0; b < r; ++b) {
        IntMat m(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m(i, j) = ker(i * d + j, b);
        basis[b] = m;
    }

    // coefficient box: |t_i| <= sum_j |G^{-1}_{ij}| * ||B||_F * ||B_j||_F
    Mat gram(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            gram(i, j) = basis[i].cast<double>().cwiseProduct(basis[j].cast<double>()).sum();
    Mat ginv = gram.inverse();
    const double target_norm = static_cast<double>(d) * static_cast<double>(entry_bound);
    std::vector<std::int64_t> tmax(r);
    double log_count = 0;
    for (int i = 0; i < r; ++i) {
        double lim = 0;
        for (int j = 0; j < r; ++j)
            lim += std::abs(ginv(i, j)) * target_norm * basis[j].cast<double>().norm();
        tmax[i] = static_cast<std::int64_t>(std::floor(lim)) + 1;
        log_count += std::log10(static_cast<double>(2 * tmax[i] + 1));
    }
    if (log_count > 9.0)
        throw std::invalid_argument("entry bound too large: enumeration above 1e9 candidates");

    // per-coordinate residual caps for pruning partial sums
    std::vector<IntMat> abs_tail(r + 1, IntMat::Zero(d, d));
    for (int b = r - 1; b >= 0; --b)
        abs_tail[b] = abs_tail[b + 1] + IntMat(tmax[b] * basis[b].cwiseAbs());

    BruteForceResult out;
    IntMat j_form = symplectic_only ? symplectic_form(d) : IntMat();
    std::vector<std::int64_t> t(r, 0);
    IntMat partial = IntMat::Zero(d, d);

    // depth-first over coefficients with interval pruning
    std::vector<IntMat> partial_stack(r + 1, IntMat::Zero(d, d));
    std::function<void(int)> rec = [&](int level) {
        if (level == r) {
            ++out.candidates_checked;
            const IntMat& b = partial_stack[r];
            if (b.cwiseAbs().maxCoeff() > entry_bound) return;
            if (b.cwiseAbs().maxCoeff() == 0) return;
            std::int64_t det = det_exact(b);
            if (det != 1 && det != -1) return;
            if (symplectic_only) {
                IntMat g = b.transpose() * j_form * b - j_form;
                if (g.cwiseAbs().maxCoeff() != 0) return;
            }
            out.units.push_back(b);
            return;
        }
        for (std::int64_t v = -tmax[level]; v <= tmax[level]; ++v) {
            partial_stack[level + 1] = partial_stack[level] + IntMat(v * basis[level]);
            // prune: any entry already beyond bound + remaining slack
            IntMat slack = abs_tail[level + 1];
            bool feasible = true;
            for (int i = 0; i < d && feasible; ++i)
                for (int k = 0; k < d && feasible; ++k)
                    if (std::abs(partial_stack[level + 1](i, k)) >
                        entry_bound + slack(i, k))
                        feasible = false;
            if (feasible) rec(level + 1);
        }
    };
    rec(0);

    // deterministic processing order: by Frobenius norm then entries
    std::sort(out.units.begin(), out.units.end(), [](const IntMat& x, const IntMat& y) {
        std::int64_t nx = (x.cwiseProduct(x)).sum();
        std::int64_t ny = (y.cwiseProduct(y)).sum();
        if (nx != ny) return nx < ny;
        for (int i = 0; i < x.rows(); ++i)
            for (int j = 0; j < x.cols(); ++j)
                if (x(i, j) != y(i, j)) return x(i, j) < y(i, j);
        return false;
    });

    // log-modulus vectors; in A's eigenbasis when A has simple spectrum
    Eigen::EigenSolver<Mat> es(a.cast<double>());
    bool simple = true;
    for (int i = 0; i < d && simple; ++i)
        for (int j = i + 1; j < d; ++j)
            if (std::abs(es.eigenvalues()[i] - es.eigenvalues()[j]) <
                1e-8 * (1.0 + std::abs(es.eigenvalues()[i]))) {
                simple = false;
                break;
            }
    auto log_vector = [&](const IntMat& b) {
        Vec lv(d);
        if (simple) {
            for (int j = 0; j < d; ++j) {
                Eigen::VectorXcd vj = es.eigenvectors().col(j);
                int lead = 0;
                for (int i = 1; i < d; ++i)
                    if (std::abs(vj[i]) > std::abs(vj[lead])) lead = i;
                std::complex<double> mu = (b.cast<double>() * vj)[lead] / vj[lead];
                lv[j] = std::log(std::abs(mu));
            }
        } else {
            // fall back to the matrix's own sorted log-moduli (adequate for
            // the A = I smoke test where everything is on the unit circle)
            Eigen::EigenSolver<Mat> eb(b.cast<double>());
            std::vector<double> logs(d);
            for (int i = 0; i < d; ++i) logs[i] = std::log(std::abs(eb.eigenvalues()[i]));
            std::sort(logs.begin(), logs.end());
            for (int i = 0; i < d; ++i) lv[i] = logs[i];
        }
        return lv;
    };

    std::vector<Vec> accepted;
    for (const IntMat& u : out.units) {
        Vec lv = log_vector(u);
        if (lv.cwiseAbs().maxCoeff() < 1e-9) continue; // torsion-like, discard
        std::vector<Vec> trial = accepted;
        trial.push_back(lv);
        if (span_rank(trial) > static_cast<int>(accepted.size())) {
            accepted.push_back(lv);
            out.generators.push_back(u);
        }
    }
    out.rank = static_cast<int>(accepted.size());
    return out;
}

RankBoundReport rank_bound_check(const ActionSpec& a, std::uint64_t seed) {
    // precondition: no nonidentity bounded combination is unit-circle-only
    const int window = 3;
    std::vector<IntVec> combos;
    IntVec n = IntVec::Constant(a.k, -window);
    while (true) {
        if (n.cwiseAbs().maxCoeff() != 0) combos.push_back(n);
        int pos = 0;
        while (pos < a.k) {
            if (++n[pos] <= window) break;
            n[pos] = -window;
            ++pos;
        }
        if (pos == a.k) break;
    }
    for (const IntVec& c : combos) {
        IntMat m = a.power(c);
        Eigen::EigenSolver<Mat> es(m.cast<double>());
        bool all_on_circle = true;
        for (int i = 0; i < a.d; ++i) {
            double v = std::abs(es.eigenvalues()[i]);
            if (std::abs(std::log(std::max(1e-300, v))) > 1e-9) {
                all_on_circle = false;
                break;
            }
        }
        if (all_on_circle) {
            std::ostringstream os;
            os << "kernel witness: combination (";
            for (int i = 0; i < a.k; ++i) os << (i ? "," : "") << c[i];
            os << ") has unit-circle spectrum";
            throw std::invalid_argument(os.str());
        }
    }

    LyapunovData lyap = lyapunov_exponents(a, seed);
    RankBoundReport rep;
    std::vector<Vec> chis;
    for (const auto& f : lyap.exponents) chis.push_back(f.coeffs);
    rep.exponent_span = span_rank(chis);

    // rank of the acting group via generator log-vectors across the joint
    // Lyapunov decomposition
    std::vector<Vec> gen_logs;
    for (int g = 0; g < a.k; ++g) {
        Vec lv(static_cast<int>(lyap.exponents.size()));
        for (size_t e = 0; e < lyap.exponents.size(); ++e) lv[e] = lyap.exponents[e].coeffs[g];
        gen_logs.push_back(lv);
    }
    rep.action_rank = span_rank(gen_logs);
    rep.satisfied = rep.action_rank <= rep.exponent_span;
    return rep;
}

} // namespace nilact
