#include "nilact/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace nilact {

namespace {

IntMat int_inverse_unimodular(const IntMat& a) {
    const int n = static_cast<int>(a.rows());
    Mat inv = a.cast<double>().inverse();
    IntMat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = std::llround(inv(i, j));
    if ((out * a - IntMat::Identity(n, n)).cwiseAbs().maxCoeff() != 0)
        throw std::invalid_argument("matrix is not invertible over Z");
    return out;
}

IntMat int_pow(const IntMat& a, std::int64_t e) {
    const int n = static_cast<int>(a.rows());
    IntMat base = e >= 0 ? a : int_inverse_unimodular(a);
    std::int64_t k = e >= 0 ? e : -e;
    IntMat acc = IntMat::Identity(n, n);
    while (k > 0) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

IntMat poly_of_matrix(const IntPoly& p, const IntMat& a) {
    const int n = static_cast<int>(a.rows());
    IntMat acc = IntMat::Zero(n, n);
    for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) {
        acc = acc * a;
        acc += *it * IntMat::Identity(n, n);
    }
    return acc;
}

// Joint spectrum of the action through a generic integer combination: every
// eigenvector of the combination must be a joint eigenvector (residual
// checked per generator); retried with fresh coefficients on failure.
struct JointSpectrum {
    IntVec coeffs;
    IntMat combo;
    Eigen::MatrixXcd vectors;
    Eigen::VectorXcd values;
    Mat chi; // d x k, log-moduli per generator (snapped to 0 below 1e-9)
};

JointSpectrum joint_spectrum(const ActionSpec& a, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> draw(-5, 5);
    std::string last_error = "no attempt";
    for (int attempt = 0; attempt < 10; ++attempt) {
        JointSpectrum js;
        js.coeffs = IntVec(a.k);
        if (attempt == 0 && a.k == 1) js.coeffs[0] = 1;
        else
            for (int i = 0; i < a.k; ++i) {
                int c = 0;
                while (c == 0) c = draw(rng);
                js.coeffs[i] = c;
            }
        js.combo = IntMat::Zero(a.d, a.d);
        for (int i = 0; i < a.k; ++i) js.combo += js.coeffs[i] * a.generators[i];
        Eigen::EigenSolver<Mat> es(js.combo.cast<double>());
        js.vectors = es.eigenvectors();
        js.values = es.eigenvalues();
        js.chi = Mat(a.d, a.k);
        bool ok = true;
        for (int j = 0; j < a.d && ok; ++j) {
            Eigen::VectorXcd vj = js.vectors.col(j);
            int lead = 0;
            for (int i = 1; i < a.d; ++i)
                if (std::abs(vj[i]) > std::abs(vj[lead])) lead = i;
            for (int g = 0; g < a.k; ++g) {
                Eigen::VectorXcd w = a.generators[g].cast<double>() * vj;
                std::complex<double> mu = w[lead] / vj[lead];
                double resid = (w - mu * vj).norm() / vj.norm();
                double scale = static_cast<double>(a.generators[g].cwiseAbs().maxCoeff());
                if (resid > 1e-8 * (1.0 + scale)) {
                    ok = false;
                    last_error = "joint eigenvector residual " + std::to_string(resid);
                    break;
                }
                double lg = std::log(std::abs(mu));
                js.chi(j, g) = std::abs(lg) < 1e-9 ? 0.0 : lg;
            }
        }
        if (ok) return js;
    }
    throw std::runtime_error("defective joint eigenstructure after 10 retries: " + last_error);
}

// factor index of each eigenvalue of the combination
std::vector<int> assign_factors(const std::vector<std::pair<IntPoly, int>>& factors,
                                const Eigen::VectorXcd& eigs) {
    std::vector<int> idx(eigs.size(), -1);
    for (int e = 0; e < eigs.size(); ++e) {
        double best = 1e300;
        for (size_t f = 0; f < factors.size(); ++f) {
            std::complex<double> acc(0, 0);
            for (auto it = factors[f].first.c.rbegin(); it != factors[f].first.c.rend(); ++it)
                acc = acc * eigs[e] + static_cast<double>(*it);
            double v = std::abs(acc);
            if (v < best) {
                best = v;
                idx[e] = static_cast<int>(f);
            }
        }
    }
    return idx;
}

} // namespace

ActionSpec::ActionSpec(std::vector<IntMat> gens) : generators(std::move(gens)) {
    k = static_cast<int>(generators.size());
    if (k == 0) throw std::invalid_argument("action needs at least one generator");
    d = static_cast<int>(generators[0].rows());
    for (int i = 0; i < k; ++i) {
        const IntMat& g = generators[i];
        if (g.rows() != d || g.cols() != d)
            throw std::invalid_argument("generator " + std::to_string(i) + " has wrong shape");
        std::int64_t det = det_exact(g);
        if (det != 1 && det != -1)
            throw std::invalid_argument("generator " + std::to_string(i) +
                                        " is not unimodular (det = " + std::to_string(det) + ")");
    }
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            IntMat diff = generators[i] * generators[j] - generators[j] * generators[i];
            if (diff.cwiseAbs().maxCoeff() != 0) {
                std::ostringstream os;
                os << "generators " << i << " and " << j << " do not commute";
                throw std::invalid_argument(os.str());
            }
        }
}

IntMat ActionSpec::power(const IntVec& n) const {
    if (n.size() != k) throw std::invalid_argument("exponent vector has wrong length");
    IntMat acc = IntMat::Identity(d, d);
    for (int i = 0; i < k; ++i) acc = acc * int_pow(generators[i], n[i]);
    return acc;
}

LyapunovData lyapunov_exponents(const ActionSpec& a, std::uint64_t seed) {
    JointSpectrum js = joint_spectrum(a, seed);

    std::vector<int> cluster(a.d, -1);
    std::vector<Vec> reps;
    for (int j = 0; j < a.d; ++j) {
        Vec cj = js.chi.row(j).transpose();
        for (size_t r = 0; r < reps.size(); ++r)
            if ((cj - reps[r]).cwiseAbs().maxCoeff() < 1e-9) {
                cluster[j] = static_cast<int>(r);
                break;
            }
        if (cluster[j] < 0) {
            cluster[j] = static_cast<int>(reps.size());
            reps.push_back(cj);
        }
    }

    LyapunovData out;
    out.combo_coeffs = js.coeffs;
    out.combo_char_poly = IntPoly(char_poly(js.combo));
    std::vector<bool> used(a.d, false);
    for (size_t r = 0; r < reps.size(); ++r) {
        std::vector<Vec> cols;
        std::vector<std::complex<double>> eigs;
        for (int j = 0; j < a.d; ++j) {
            if (cluster[j] != static_cast<int>(r)) continue;
            eigs.push_back(js.values[j]);
            if (used[j]) continue;
            Eigen::VectorXcd vj = js.vectors.col(j);
            if (vj.imag().norm() < 1e-9 * vj.norm()) {
                used[j] = true;
                cols.push_back(vj.real() / vj.real().norm());
            } else {
                int partner = -1;
                for (int l = j + 1; l < a.d; ++l) {
                    if (cluster[l] != static_cast<int>(r) || used[l]) continue;
                    if (std::abs(std::conj(js.values[j]) - js.values[l]) <
                        1e-6 * (1.0 + std::abs(js.values[j]))) {
                        partner = l;
                        break;
                    }
                }
                if (partner < 0)
                    throw std::runtime_error("unpaired complex joint eigenvector");
                used[j] = used[partner] = true;
                cols.push_back(vj.real() / vj.real().norm());
                cols.push_back(vj.imag() / vj.imag().norm());
            }
        }
        Mat basis(a.d, cols.size());
        for (size_t i = 0; i < cols.size(); ++i) basis.col(i) = cols[i];
        if (reps[r].cwiseAbs().maxCoeff() == 0.0) {
            out.center_dim = static_cast<int>(cols.size());
            out.center_basis = basis;
        } else {
            ExponentFunctional f;
            f.coeffs = reps[r];
            f.space_dim = static_cast<int>(cols.size());
            f.space_basis = basis;
            f.combo_eigenvalues = std::move(eigs);
            out.exponents.push_back(std::move(f));
        }
    }
    int total = out.center_dim;
    for (const auto& f : out.exponents) total += f.space_dim;
    if (total != a.d) throw std::runtime_error("Lyapunov dimension accounting failure");
    std::sort(out.exponents.begin(), out.exponents.end(),
              [](const ExponentFunctional& x, const ExponentFunctional& y) {
                  for (int i = 0; i < x.coeffs.size(); ++i) {
                      if (x.coeffs[i] < y.coeffs[i] - 1e-12) return true;
                      if (x.coeffs[i] > y.coeffs[i] + 1e-12) return false;
                  }
                  return false;
              });
    return out;
}

std::vector<CoarseExponent> coarse_exponents(const std::vector<ExponentFunctional>& exps) {
    std::vector<CoarseExponent> out;
    for (size_t i = 0; i < exps.size(); ++i) {
        Vec dir = exps[i].coeffs / exps[i].coeffs.norm();
        bool placed = false;
        for (auto& ce : out) {
            if ((dir - ce.direction).cwiseAbs().maxCoeff() < 1e-9) {
                ce.members.push_back(static_cast<int>(i));
                ce.space_dim += exps[i].space_dim;
                placed = true;
                break;
            }
        }
        if (!placed) {
            CoarseExponent ce;
            ce.direction = dir;
            ce.members = {static_cast<int>(i)};
            ce.space_dim = exps[i].space_dim;
            out.push_back(std::move(ce));
        }
    }
    return out;
}

namespace {

// canonical wall normal: unit vector, first nonzero coordinate positive, so
// a +- pair of coarse exponents shares one wall
Vec canonical_normal(const Vec& dir) {
    Vec n = dir / dir.norm();
    for (int i = 0; i < n.size(); ++i) {
        if (std::abs(n[i]) > 1e-12) {
            if (n[i] < 0) n = -n;
            break;
        }
    }
    return n;
}

std::vector<Vec> distinct_walls(const std::vector<CoarseExponent>& coarse) {
    std::vector<Vec> walls;
    for (const auto& ce : coarse) {
        Vec n = canonical_normal(ce.direction);
        bool dup = false;
        for (const auto& w : walls)
            if ((n - w).cwiseAbs().maxCoeff() < 1e-9) {
                dup = true;
                break;
            }
        if (!dup) walls.push_back(n);
    }
    return walls;
}

std::vector<Vec> sample_directions(int k, int total, int shard, int shards) {
    std::vector<Vec> dirs;
    if (k == 1) {
        if (shard == 0) {
            Vec a(1), b(1);
            a[0] = 1.0;
            b[0] = -1.0;
            dirs.push_back(a);
            dirs.push_back(b);
        }
        return dirs;
    }
    for (int i = shard; i < total; i += shards) {
        if (k == 2) {
            double th = 2.0 * M_PI * (i + 0.5) / total;
            Vec v(2);
            v << std::cos(th), std::sin(th);
            dirs.push_back(v);
        } else {
            const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
            double z = 1.0 - 2.0 * (i + 0.5) / total;
            double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
            double th = 2.0 * M_PI * i / golden;
            Vec v(3);
            v << rad * std::cos(th), rad * std::sin(th), z;
            dirs.push_back(v);
        }
    }
    return dirs;
}

std::vector<int> sign_vector(const std::vector<Vec>& walls, const Vec& dir, bool* valid) {
    std::vector<int> s(walls.size());
    *valid = true;
    for (size_t w = 0; w < walls.size(); ++w) {
        double v = walls[w].dot(dir);
        if (std::abs(v) < 1e-10) {
            *valid = false;
            return s;
        }
        s[w] = v > 0 ? 1 : -1;
    }
    return s;
}

} // namespace

ChamberComplex weyl_chambers(const std::vector<CoarseExponent>& coarse,
                             const std::vector<ExponentFunctional>& exps, int k, int shards) {
    (void)exps;
    if (k < 1) throw std::invalid_argument("weyl_chambers: rank must be >= 1");
    ChamberComplex out;
    out.walls = distinct_walls(coarse);
    if (k > 3 || out.walls.empty()) return out;

    const int total = k == 1 ? 2 : (k == 2 ? (1 << 15) : (1 << 16));
    std::map<std::vector<int>, Vec> found; // sign vector -> direction sum
    std::map<std::vector<int>, int> counts;
    for (int shard = 0; shard < shards; ++shard) {
        for (const Vec& dir : sample_directions(k, total, shard, shards)) {
            bool valid;
            auto s = sign_vector(out.walls, dir, &valid);
            if (!valid) continue;
            auto it = found.find(s);
            if (it == found.end()) {
                found[s] = dir;
                counts[s] = 1;
            } else {
                it->second += dir;
                counts[s] += 1;
            }
        }
    }
    for (auto& [signs, sum] : found) {
        Vec centroid = sum / counts[signs];
        if (centroid.norm() < 1e-9) centroid = sum;
        centroid /= centroid.norm();
        Chamber ch;
        ch.signs = signs;
        bool have_witness = false;
        for (long long scale = 1; scale <= (1 << 20) && !have_witness; scale *= 2) {
            IntVec w(k);
            for (int i = 0; i < k; ++i) w[i] = std::llround(scale * centroid[i]);
            if (w.cwiseAbs().maxCoeff() == 0) continue;
            Vec wd = w.cast<double>();
            bool valid;
            auto s2 = sign_vector(out.walls, wd / wd.norm(), &valid);
            if (valid && s2 == signs) {
                ch.witness = w;
                have_witness = true;
            }
        }
        if (!have_witness) throw std::runtime_error("no integer witness found for a chamber");
        out.chambers.push_back(std::move(ch));
    }
    out.enumerated = true;
    return out;
}

int chamber_count_sampling(const ChamberComplex& complex, int k, int samples,
                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::set<std::vector<int>> seen;
    for (int i = 0; i < samples; ++i) {
        Vec dir(k);
        for (int j = 0; j < k; ++j) dir[j] = gauss(rng);
        double n = dir.norm();
        if (n < 1e-12) continue;
        dir /= n;
        bool valid;
        auto s = sign_vector(complex.walls, dir, &valid);
        if (valid) seen.insert(s);
    }
    return static_cast<int>(seen.size());
}

RankOneFactorReport has_rank_one_factor(const ActionSpec& a, std::uint64_t seed) {
    if (a.d > 8)
        throw std::invalid_argument("rank-one factor search unsupported above dimension 8");
    JointSpectrum js = joint_spectrum(a, seed);
    auto factors = factor_monic(IntPoly(char_poly(js.combo)));
    const int nf = static_cast<int>(factors.size());
    std::vector<int> factor_of = assign_factors(factors, js.values);

    RankOneFactorReport report;
    // subsets ordered by size then lexicographic so the witness is stable
    std::vector<int> order(static_cast<size_t>(1) << nf);
    for (size_t s = 0; s < order.size(); ++s) order[s] = static_cast<int>(s);
    std::sort(order.begin(), order.end(), [](int x, int y) {
        int px = __builtin_popcount(static_cast<unsigned>(x));
        int py = __builtin_popcount(static_cast<unsigned>(y));
        if (px != py) return px < py;
        return x < y;
    });
    for (int subset : order) {
        int wdim = 0;
        for (int f = 0; f < nf; ++f)
            if (subset & (1 << f)) wdim += factors[f].first.degree() * factors[f].second;
        if (wdim >= a.d) continue;
        std::vector<Vec> quotient_chis;
        for (int j = 0; j < a.d; ++j)
            if (!(subset & (1 << factor_of[j]))) quotient_chis.push_back(js.chi.row(j).transpose());
        int rank = span_rank(quotient_chis);
        if (rank <= 1) {
            report.has_rank_one_factor = true;
            report.quotient_dim = a.d - wdim;
            report.quotient_exponent_rank = rank;
            if (subset != 0) {
                IntPoly prod({1});
                for (int f = 0; f < nf; ++f)
                    if (subset & (1 << f))
                        for (int mlt = 0; mlt < factors[f].second; ++mlt)
                            prod = prod * factors[f].first;
                report.witness_subspace = kernel_lattice(poly_of_matrix(prod, js.combo));
            } else {
                report.witness_subspace = IntMat::Zero(a.d, 0);
            }
            report.note = "quotient of dimension " + std::to_string(report.quotient_dim) +
                          " has exponent span rank " + std::to_string(rank);
            return report;
        }
    }
    report.note = "every positive-dimensional rational quotient has exponent span rank >= 2";
    return report;
}

HigherRankReport is_higher_rank(const ActionSpec& a, std::uint64_t seed) {
    HigherRankReport out;
    out.factor = has_rank_one_factor(a, seed);
    out.higher_rank = !out.factor.has_rank_one_factor;
    LyapunovData lyap = lyapunov_exponents(a, seed);
    out.independent_coarse_count =
        static_cast<int>(distinct_walls(coarse_exponents(lyap.exponents)).size());
    return out;
}

bool rational_closure_minimality(int exclude_coarse_index, const ActionSpec& a,
                                 std::uint64_t seed) {
    LyapunovData lyap = lyapunov_exponents(a, seed);
    auto coarse = coarse_exponents(lyap.exponents);
    std::set<int> excluded_exponents;
    if (exclude_coarse_index >= 0) {
        if (exclude_coarse_index >= static_cast<int>(coarse.size()))
            throw std::invalid_argument("coarse exponent index out of range");
        const Vec dir = coarse[exclude_coarse_index].direction;
        for (size_t c = 0; c < coarse.size(); ++c) {
            if ((coarse[c].direction - dir).cwiseAbs().maxCoeff() < 1e-9 ||
                (coarse[c].direction + dir).cwiseAbs().maxCoeff() < 1e-9)
                for (int m : coarse[c].members) excluded_exponents.insert(m);
        }
    }

    auto factors = factor_monic(lyap.combo_char_poly);
    std::vector<bool> include(factors.size(), false);
    std::vector<int> in_v_count(factors.size(), 0);
    for (size_t e = 0; e < lyap.exponents.size(); ++e) {
        if (excluded_exponents.count(static_cast<int>(e))) continue;
        Eigen::VectorXcd eigs(lyap.exponents[e].combo_eigenvalues.size());
        for (size_t i = 0; i < lyap.exponents[e].combo_eigenvalues.size(); ++i)
            eigs[i] = lyap.exponents[e].combo_eigenvalues[i];
        for (int f : assign_factors(factors, eigs)) {
            include[f] = true;
            in_v_count[f] += 1;
        }
    }
    int dim = 0;
    for (size_t f = 0; f < factors.size(); ++f) {
        if (!include[f]) continue;
        int deg_total = factors[f].first.degree() * factors[f].second;
        if (factors[f].second > 1 && in_v_count[f] < deg_total)
            throw std::runtime_error("rational closure with repeated factors is unsupported");
        dim += deg_total;
    }
    return dim == a.d;
}

} // namespace nilact
