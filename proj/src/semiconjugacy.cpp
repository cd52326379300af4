#include "nilact/semiconjugacy.hpp"

#include "json.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <future>
#include <numeric>

namespace nilact {

namespace {

// fundamental-domain coordinates (q, p, z, t) of the reduced point
Vec domain_coords(const GroupElement& x, const LatticeSpec& g) {
    GroupElement x0 = lattice_reduce(x, g).second;
    Vec c(2 * g.n + 1 + g.m);
    c << x0.q, x0.p, Vec::Constant(1, x0.z), x0.t;
    return c;
}

} // namespace

LieElement CocycleField::eval(const GroupElement& x) const {
    LieElement out = LieElement::zero(lattice);
    if (terms.empty()) return out;
    Vec c = domain_coords(x, lattice);
    for (const CocycleTerm& term : terms) {
        double phase = 0;
        for (int i = 0; i < c.size(); ++i) phase += static_cast<double>(term.freq[i]) * c[i];
        double w = term.use_sin ? std::sin(2.0 * M_PI * phase) : std::cos(2.0 * M_PI * phase);
        out.a += w * term.amp.a;
        out.b += w * term.amp.b;
        out.c += w * term.amp.c;
        out.s += w * term.amp.s;
    }
    return out;
}

double CocycleField::c1_size() const {
    double total = 0;
    for (const CocycleTerm& t : terms) {
        double amp = std::sqrt(t.amp.a.squaredNorm() + t.amp.b.squaredNorm() +
                               t.amp.s.squaredNorm() + t.amp.c * t.amp.c);
        total += amp * (1.0 + static_cast<double>(t.freq.cwiseAbs().sum()));
    }
    return total;
}

GroupElement PerturbedMap::apply(const GroupElement& x) const {
    LieElement vx = v.eval(x);
    vx.a = -vx.a;
    vx.b = -vx.b;
    vx.c = -vx.c;
    vx.s = -vx.s;
    return group_mul(automorphism.apply(x), exp_map(vx));
}

GroupElement PerturbedMap::apply_inverse(const GroupElement& x) const {
    NilAutomorphism linv = automorphism.inverse();
    GroupElement y = linv.apply(x);
    for (int iter = 0; iter < 100; ++iter) {
        GroupElement next = linv.apply(group_mul(x, exp_map(v.eval(y))));
        double gap = group_dist(next, y);
        y = next;
        if (gap < 1e-14) return y;
    }
    if (group_dist(apply(y), x) > 1e-8)
        throw std::runtime_error("perturbed inverse did not converge (v too large?)");
    return y;
}

double spectral_gap(const Mat& a) {
    Eigen::EigenSolver<Mat> es(a);
    double gap = 1e300;
    for (int i = 0; i < a.rows(); ++i) {
        double v = std::abs(es.eigenvalues()[i]);
        double g = std::abs(std::log(std::max(1e-300, v)));
        if (g <= 1e-9) return 0.0;
        gap = std::min(gap, g);
    }
    return gap;
}

bool perturbation_gate(const PerturbedMap& f, std::string* message) {
    Mat a = f.base_matrix();
    Eigen::EigenSolver<Mat> es(a);
    double lmax = 0;
    for (int i = 0; i < a.rows(); ++i) lmax = std::max(lmax, std::abs(es.eigenvalues()[i]));
    double budget = 0.2 * (lmax - 1.0);
    double c1 = f.v.c1_size();
    bool ok = c1 <= budget;
    if (!ok && message) {
        *message = "perturbation size " + std::to_string(c1) + " exceeds 0.2 * spectral gap " +
                   std::to_string(budget);
    }
    return ok;
}

namespace {

struct SeriesEngine {
    const PerturbedMap* f;
    LatticeSpec lat;
    Mat a, ainv, ps, pu;
    int depth;

    SeriesEngine(const PerturbedMap& map, int depth_) : f(&map), depth(depth_) {
        lat = map.v.lattice;
        lat.r = std::max(lat.r, map.automorphism.required_center_denominator());
        a = map.base_matrix();
        Eigen::EigenSolver<Mat> es(a);
        const int d = static_cast<int>(a.rows());
        Eigen::MatrixXcd v = es.eigenvectors();
        Eigen::VectorXcd lam = es.eigenvalues();
        Eigen::MatrixXcd vinv = v.inverse();
        Eigen::MatrixXcd psc = Eigen::MatrixXcd::Zero(d, d);
        Eigen::MatrixXcd puc = Eigen::MatrixXcd::Zero(d, d);
        for (int i = 0; i < d; ++i) {
            double mod = std::abs(lam[i]);
            if (std::abs(std::log(std::max(1e-300, mod))) <= 1e-9)
                throw std::invalid_argument("base matrix is not hyperbolic");
            if (mod < 1.0) psc += v.col(i) * vinv.row(i);
            else puc += v.col(i) * vinv.row(i);
        }
        if (psc.imag().cwiseAbs().maxCoeff() > 1e-9 ||
            puc.imag().cwiseAbs().maxCoeff() > 1e-9)
            throw std::runtime_error("spectral projectors are not real");
        ps = psc.real();
        pu = puc.real();
        ainv = a.inverse();
    }

    Vec su_part(const GroupElement& x) const {
        LieElement w = f->v.eval(x);
        return w.base();
    }

    // truncated series solution at x (exact orbits, fixed summation order)
    Vec phi(GroupElement x) const {
        x = lattice_reduce(x, lat).second;
        const int d = static_cast<int>(a.rows());
        if (f->v.empty()) return Vec::Zero(d);

        std::vector<Vec> back(depth + 1);
        GroupElement y = x;
        for (int j = 0; j <= depth; ++j) {
            y = lattice_reduce(f->apply_inverse(y), lat).second;
            back[j] = su_part(y);
        }
        Vec acc_s = ps * back[depth];
        for (int j = depth - 1; j >= 0; --j) acc_s = ps * (a * acc_s) + ps * back[j];

        std::vector<Vec> fwd(depth + 1);
        y = x;
        fwd[0] = su_part(y);
        for (int j = 1; j <= depth; ++j) {
            y = lattice_reduce(f->apply(y), lat).second;
            fwd[j] = su_part(y);
        }
        Vec acc_u = pu * fwd[depth];
        for (int j = depth - 1; j >= 0; --j) acc_u = pu * (ainv * acc_u) + pu * fwd[j];
        acc_u = -(pu * (ainv * acc_u));

        return acc_s + acc_u;
    }
};

std::vector<int> default_grid(const LatticeSpec& g) {
    std::vector<int> grid;
    for (int i = 0; i < 2 * g.n; ++i) grid.push_back(64);
    grid.push_back(16);
    for (int i = 0; i < g.m; ++i) grid.push_back(64);
    return grid;
}

GroupElement point_from_index(const LatticeSpec& g, const std::vector<int>& grid,
                              const std::vector<int>& idx) {
    GroupElement x(Vec(g.n), Vec(g.n), 0.0, Vec(g.m));
    int c = 0;
    for (int i = 0; i < g.n; ++i, ++c) x.q[i] = static_cast<double>(idx[c]) / grid[c];
    for (int i = 0; i < g.n; ++i, ++c) x.p[i] = static_cast<double>(idx[c]) / grid[c];
    x.z = static_cast<double>(idx[c]) / (static_cast<double>(grid[c]) * g.r);
    ++c;
    for (int i = 0; i < g.m; ++i, ++c) x.t[i] = static_cast<double>(idx[c]) / grid[c];
    return x;
}

std::vector<int> unflatten(long long linear, const std::vector<int>& grid) {
    std::vector<int> idx(grid.size());
    for (int c = static_cast<int>(grid.size()) - 1; c >= 0; --c) {
        idx[c] = static_cast<int>(linear % grid[c]);
        linear /= grid[c];
    }
    return idx;
}

} // namespace

long long SemiconjugacyField::points() const {
    long long total = 1;
    for (int g : grid) total *= g;
    return total;
}

Vec SemiconjugacyField::phi_at(const std::vector<int>& idx) const {
    long long linear = 0;
    for (size_t c = 0; c < grid.size(); ++c) linear = linear * grid[c] + idx[c];
    const int d = base_dim();
    Vec out(d);
    for (int i = 0; i < d; ++i) out[i] = phi[linear * d + i];
    return out;
}

Vec SemiconjugacyField::phi_interp(const GroupElement& x) const {
    Vec c = domain_coords(x, lattice);
    const int nc = static_cast<int>(grid.size());
    std::vector<double> pos(nc), frac(nc);
    std::vector<int> base_idx(nc);
    int zc = 2 * lattice.n;
    for (int i = 0; i < nc; ++i) {
        double width = (i == zc) ? 1.0 / lattice.r : 1.0;
        double u = c[i] / width * grid[i];
        base_idx[i] = static_cast<int>(std::floor(u)) % grid[i];
        frac[i] = u - std::floor(u);
    }
    const int d = base_dim();
    Vec out = Vec::Zero(d);
    for (int corner = 0; corner < (1 << nc); ++corner) {
        double w = 1.0;
        std::vector<int> idx(nc);
        for (int i = 0; i < nc; ++i) {
            if (corner & (1 << i)) {
                idx[i] = (base_idx[i] + 1) % grid[i];
                w *= frac[i];
            } else {
                idx[i] = base_idx[i];
                w *= 1.0 - frac[i];
            }
        }
        if (w != 0.0) out += w * phi_at(idx);
    }
    return out;
}

Vec SemiconjugacyField::phi_map(const GroupElement& x) const {
    return x.base() + phi_interp(x);
}

Vec SemiconjugacyField::phi_series(const GroupElement& x, const PerturbedMap& f) const {
    SeriesEngine engine(f, depth);
    return engine.phi(x);
}

SemiconjugacyField solve_franks_manning(const PerturbedMap& f, const SolverOptions& opt) {
    SemiconjugacyField out;
    out.lattice = f.v.lattice;
    out.lattice.r = std::max(out.lattice.r, f.automorphism.required_center_denominator());
    out.grid = opt.grid.empty() ? default_grid(out.lattice) : opt.grid;
    if (static_cast<int>(out.grid.size()) != 2 * out.lattice.n + 1 + out.lattice.m)
        throw std::invalid_argument("grid must list one resolution per (q,p,z,t) coordinate");
    out.depth = opt.depth;

    SeriesEngine engine(f, opt.depth);
    out.a_matrix = engine.a;
    std::string gate;
    if (!perturbation_gate(f, &gate)) out.warnings.push_back(gate);
    for (const auto& term : f.v.terms)
        if (std::abs(term.amp.c) > 0) {
            out.warnings.push_back("center amplitude ignored by the su solver");
            break;
        }

    const long long total = out.points();
    const int d = out.base_dim();
    out.phi.assign(static_cast<size_t>(total) * d, 0.0);
    out.residual_field.assign(static_cast<size_t>(total), 0.0);

    const int threads = std::max(1, opt.threads);
    auto fill = [&](long long lo, long long hi) {
        SeriesEngine local(f, opt.depth);
        for (long long i = lo; i < hi; ++i) {
            GroupElement x = point_from_index(out.lattice, out.grid, unflatten(i, out.grid));
            Vec value = local.phi(x);
            for (int c = 0; c < d; ++c) out.phi[static_cast<size_t>(i) * d + c] = value[c];
        }
    };
    if (threads == 1) {
        fill(0, total);
    } else {
        std::vector<std::future<void>> jobs;
        long long chunk = (total + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            long long lo = t * chunk, hi = std::min(total, (t + 1) * chunk);
            if (lo >= hi) break;
            jobs.push_back(std::async(std::launch::async, fill, lo, hi));
        }
        for (auto& j : jobs) j.get();
    }

    // a-posteriori residual of v_su(x) = phi(fx) - A phi(x), series-evaluated
    double rmax = 0, rsum = 0;
    auto resid = [&](long long lo, long long hi, double* mx, double* sum) {
        SeriesEngine local(f, opt.depth);
        *mx = 0;
        *sum = 0;
        for (long long i = lo; i < hi; ++i) {
            GroupElement x = point_from_index(out.lattice, out.grid, unflatten(i, out.grid));
            Vec lhs = local.phi(f.apply(x));
            Vec phi_x(d);
            for (int c = 0; c < d; ++c) phi_x[c] = out.phi[static_cast<size_t>(i) * d + c];
            Vec gap = lhs - engine.a * phi_x - local.su_part(x);
            double r = gap.norm();
            out.residual_field[static_cast<size_t>(i)] = r;
            *mx = std::max(*mx, r);
            *sum += r;
        }
    };
    if (threads == 1) {
        resid(0, total, &rmax, &rsum);
    } else {
        std::vector<std::future<void>> jobs;
        std::vector<double> mx(threads, 0), sm(threads, 0);
        long long chunk = (total + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            long long lo = t * chunk, hi = std::min(total, (t + 1) * chunk);
            if (lo >= hi) break;
            jobs.push_back(std::async(std::launch::async, resid, lo, hi, &mx[t], &sm[t]));
        }
        for (auto& j : jobs) j.get();
        for (int t = 0; t < threads; ++t) {
            rmax = std::max(rmax, mx[t]);
            rsum += sm[t];
        }
    }
    out.residual_max = rmax;
    out.residual_mean = rsum / static_cast<double>(total);
    return out;
}

std::pair<double, double> conjugacy_residual(const SemiconjugacyField& s, const PerturbedMap& f) {
    (void)f;
    return {s.residual_max, s.residual_mean};
}

FiberProbeReport fiber_probe(const SemiconjugacyField& s, const PerturbedMap& f, const Vec& y,
                             int base_samples, std::uint64_t seed) {
    std::string message;
    if (!perturbation_gate(f, &message))
        throw std::invalid_argument("fiber_probe gated: " + message);
    SeriesEngine engine(f, s.depth);
    const LatticeSpec lat = s.lattice;
    const int d = s.base_dim();

    FiberProbeReport rep;
    rep.base_points = base_samples;

    // monotonicity proxy along the leading stable/unstable directions
    Eigen::EigenSolver<Mat> es(engine.a);
    Vec dir_s, dir_u;
    double best_s = 2.0, best_u = 0.5;
    for (int i = 0; i < d; ++i) {
        double mod = std::abs(es.eigenvalues()[i]);
        Eigen::VectorXcd v = es.eigenvectors().col(i);
        if (v.imag().norm() > 1e-9 * v.norm()) continue;
        if (mod < best_s) {
            best_s = mod;
            dir_s = v.real() / v.real().norm();
        }
        if (mod > best_u) {
            best_u = mod;
            dir_u = v.real() / v.real().norm();
        }
    }
    if (dir_s.size() == 0 || dir_u.size() == 0)
        throw std::runtime_error("fiber_probe needs real leading stable/unstable directions");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int steps = 17;
    for (int sample = 0; sample < base_samples; ++sample) {
        GroupElement x(Vec(lat.n), Vec(lat.n), 0.0, Vec(lat.m));
        for (int i = 0; i < lat.n; ++i) x.q[i] = unif(rng);
        for (int i = 0; i < lat.n; ++i) x.p[i] = unif(rng);
        x.z = unif(rng) / lat.r;
        for (int i = 0; i < lat.m; ++i) x.t[i] = unif(rng);
        bool ok = true;
        for (const Vec* dir : {&dir_s, &dir_u}) {
            double prev = -1e300;
            for (int k = 0; k < steps && ok; ++k) {
                double t = -0.4 + 0.8 * k / (steps - 1);
                LieElement leaf = LieElement::zero(lat);
                Vec shift = t * (*dir);
                leaf.a = shift.head(lat.n);
                leaf.b = shift.segment(lat.n, lat.n);
                leaf.s = shift.tail(lat.m);
                GroupElement moved = group_mul(x, exp_map(leaf));
                double val = dir->dot(moved.base() + engine.phi(moved));
                if (val <= prev) ok = false;
                prev = val;
            }
            if (!ok) break;
        }
        if (ok) ++rep.monotone_passes;
    }

    // fiber over y: solve Phi(b, z) = y for the base coordinates on each
    // center circle sample
    const int zsamples = 16;
    Vec prev_b;
    for (int kz = 0; kz < zsamples; ++kz) {
        double z = (kz + 0.5) / (zsamples * static_cast<double>(lat.r));
        Vec b = y;
        bool converged = false;
        for (int iter = 0; iter < 100; ++iter) {
            GroupElement x(b.head(lat.n), b.segment(lat.n, lat.n), z, b.tail(lat.m));
            Vec next = y - engine.phi(x);
            double gap = (next - b).norm();
            b = next;
            if (gap < 1e-12) {
                converged = true;
                break;
            }
        }
        ++rep.fiber_points;
        if (converged) {
            ++rep.fiber_converged;
            rep.fiber_max_spread = std::max(rep.fiber_max_spread, (b - y).cwiseAbs().maxCoeff());
            if (prev_b.size() > 0)
                rep.fiber_max_gap = std::max(rep.fiber_max_gap, (b - prev_b).cwiseAbs().maxCoeff());
            prev_b = b;
        }
    }
    return rep;
}

void save_field(const SemiconjugacyField& s, const std::string& path) {
    nlohmann::ordered_json header;
    header["lattice"] = {{"n", s.lattice.n}, {"m", s.lattice.m}, {"r", s.lattice.r}};
    header["grid"] = s.grid;
    header["depth"] = s.depth;
    header["dim"] = s.base_dim();
    std::vector<std::vector<double>> amat(s.a_matrix.rows());
    for (int i = 0; i < s.a_matrix.rows(); ++i)
        for (int j = 0; j < s.a_matrix.cols(); ++j) amat[i].push_back(s.a_matrix(i, j));
    header["a_matrix"] = amat;
    header["residual_max"] = s.residual_max;
    header["residual_mean"] = s.residual_mean;
    header["warnings"] = s.warnings;
    std::string htext = header.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write("NILSCF1\n", 8);
    std::uint64_t hlen = htext.size();
    out.write(reinterpret_cast<const char*>(&hlen), 8);
    out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
    out.write(reinterpret_cast<const char*>(s.phi.data()),
              static_cast<std::streamsize>(s.phi.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(s.residual_field.data()),
              static_cast<std::streamsize>(s.residual_field.size() * sizeof(double)));
}

SemiconjugacyField load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (std::memcmp(magic, "NILSCF1\n", 8) != 0)
        throw std::runtime_error(path + " is not a semiconjugacy grid file");
    std::uint64_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), 8);
    std::string htext(hlen, '\0');
    in.read(htext.data(), static_cast<std::streamsize>(hlen));
    nlohmann::json header = nlohmann::json::parse(htext);

    SemiconjugacyField s;
    s.lattice.n = header["lattice"]["n"];
    s.lattice.m = header["lattice"]["m"];
    s.lattice.r = header["lattice"]["r"];
    s.grid = header["grid"].get<std::vector<int>>();
    s.depth = header["depth"];
    int d = header["dim"];
    s.a_matrix = Mat(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) s.a_matrix(i, j) = header["a_matrix"][i][j];
    s.residual_max = header["residual_max"];
    s.residual_mean = header["residual_mean"];
    s.warnings = header["warnings"].get<std::vector<std::string>>();
    s.phi.resize(static_cast<size_t>(s.points()) * d);
    s.residual_field.resize(static_cast<size_t>(s.points()));
    in.read(reinterpret_cast<char*>(s.phi.data()),
            static_cast<std::streamsize>(s.phi.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(s.residual_field.data()),
            static_cast<std::streamsize>(s.residual_field.size() * sizeof(double)));
    if (!in) throw std::runtime_error(path + " is truncated");
    return s;
}

void export_residual_csv(const SemiconjugacyField& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const int nc = static_cast<int>(s.grid.size());
    out << "index";
    for (int i = 0; i < nc; ++i) out << ",c" << i;
    out << ",residual\n";
    for (long long i = 0; i < s.points(); ++i) {
        auto idx = unflatten(i, s.grid);
        out << i;
        for (int c = 0; c < nc; ++c) out << "," << idx[c];
        out << "," << s.residual_field[static_cast<size_t>(i)] << "\n";
    }
}

} // namespace nilact
