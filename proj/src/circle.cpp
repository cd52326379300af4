#include "nilact/circle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nilact {

namespace {

double circle_dist(double x, double y) {
    double d = std::fabs(x - y);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

} // namespace

CircleMap::CircleMap(std::vector<double> lift_values) : values_(std::move(lift_values)) {
    if (values_.size() < 3) throw std::invalid_argument("circle map needs at least 2 samples");
    for (size_t i = 0; i + 1 < values_.size(); ++i)
        if (values_[i + 1] <= values_[i])
            throw std::invalid_argument("circle map grid sample is not strictly increasing");
    if (std::fabs(values_.back() - values_.front() - 1.0) > 1e-9)
        throw std::invalid_argument("lift must satisfy lift(1) = lift(0) + 1");
    values_.back() = values_.front() + 1.0; // exact degree-one periodicity
}

CircleMap CircleMap::rotation(double rho, int resolution) {
    std::vector<double> v(resolution + 1);
    for (int i = 0; i <= resolution; ++i)
        v[i] = static_cast<double>(i) / resolution + rho;
    return CircleMap(std::move(v));
}

CircleMap CircleMap::from_function(const std::function<double(double)>& lift, int resolution) {
    std::vector<double> v(resolution + 1);
    for (int i = 0; i <= resolution; ++i) v[i] = lift(static_cast<double>(i) / resolution);
    return CircleMap(std::move(v));
}

double CircleMap::lift(double x) const {
    double k = std::floor(x);
    double y = x - k;
    const int n = resolution();
    double u = y * n;
    int i = std::min(static_cast<int>(u), n - 1);
    double t = u - i;
    return values_[i] * (1.0 - t) + values_[i + 1] * t + k;
}

double CircleMap::operator()(double x) const {
    double v = lift(x);
    return v - std::floor(v);
}

CircleMap CircleMap::inverse() const {
    const int n = resolution();
    std::vector<double> inv(n + 1);
    for (int i = 0; i <= n; ++i) {
        double target = static_cast<double>(i) / n;
        double lo = -2.0, hi = 2.0;
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            if (lift(mid) < target) lo = mid;
            else hi = mid;
        }
        inv[i] = 0.5 * (lo + hi);
    }
    inv[n] = inv[0] + 1.0;
    return CircleMap(std::move(inv));
}

CircleMap CircleMap::power(int e) const {
    CircleMap base = e >= 0 ? *this : inverse();
    int reps = e >= 0 ? e : -e;
    CircleMap acc = CircleMap::rotation(0.0, resolution());
    for (int i = 0; i < reps; ++i) acc = compose(base, acc);
    return acc;
}

CircleMap compose(const CircleMap& f, const CircleMap& g) {
    const int n = std::max(f.resolution(), g.resolution());
    std::vector<double> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = f.lift(g.lift(static_cast<double>(i) / n));
    return CircleMap(std::move(v));
}

RotationNumber rotation_number(const CircleMap& c, long long iterations, double x0) {
    if (iterations <= 0) throw std::invalid_argument("rotation_number needs iterations >= 1");
    double x = x0 - std::floor(x0);
    double total = 0.0;
    for (long long i = 0; i < iterations; ++i) {
        double next = c.lift(x);
        total += next - x;
        x = next - std::floor(next);
    }
    RotationNumber out;
    out.raw = total / static_cast<double>(iterations);
    out.value = out.raw - std::floor(out.raw);
    out.error_bound = 1.0 / static_cast<double>(iterations);
    return out;
}

bool CircleSet::contains(double x, double slack) const {
    x -= std::floor(x);
    for (auto [lo, hi] : intervals) {
        if (x >= lo - slack && x <= hi + slack) return true;
        // wrapped membership
        if (x + 1.0 >= lo - slack && x + 1.0 <= hi + slack) return true;
    }
    return false;
}

double CircleSet::clamp_into(double x) const {
    x -= std::floor(x);
    double best = intervals.front().first;
    double best_d = 2.0;
    for (auto [lo, hi] : intervals) {
        double cand = std::clamp(x, lo, hi);
        double d = circle_dist(cand, x);
        if (d < best_d) {
            best_d = d;
            best = cand;
        }
    }
    return best;
}

CircleSet full_circle() { return CircleSet{{{0.0, 1.0}}}; }

AbcResult find_periodic_point_abc(const std::vector<CircleMap>& f, const CircleMap& g,
                                  const IntMat& a, const CircleSet& k_set,
                                  long long rotation_iters, long long fix_cap,
                                  double relation_tol, int relation_samples) {
    const int k = static_cast<int>(f.size());
    if (a.rows() != k || a.cols() != k)
        throw std::invalid_argument("AbC matrix must be k x k for k maps");
    {
        Eigen::EigenSolver<Mat> es(a.cast<double>());
        for (int i = 0; i < k; ++i) {
            double mod = std::abs(es.eigenvalues()[i]);
            if (std::abs(std::log(std::max(1e-300, mod))) <= 1e-9)
                throw std::invalid_argument("AbC matrix must be hyperbolic");
        }
    }

    // sample points of K
    std::vector<double> samples;
    for (auto [lo, hi] : k_set.intervals) {
        int per = std::max(2, static_cast<int>(relation_samples * (hi - lo)));
        for (int i = 0; i < per; ++i)
            samples.push_back(lo + (hi - lo) * (i + 0.5) / per);
    }

    // invariance of K, commutation on K, and the AbC relation on K
    for (int i = 0; i < k; ++i)
        for (double x : samples)
            if (!k_set.contains(f[i](x), relation_tol))
                throw std::invalid_argument("K is not invariant under f_" + std::to_string(i + 1));
    for (double x : samples)
        if (!k_set.contains(g(x), relation_tol))
            throw std::invalid_argument("K is not invariant under g");
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            for (double x : samples)
                if (circle_dist(f[i](f[j](x)), f[j](f[i](x))) > relation_tol) {
                    std::ostringstream os;
                    os << "f_" << i + 1 << " and f_" << j + 1 << " do not commute on K";
                    throw std::invalid_argument(os.str());
                }
    for (int i = 0; i < k; ++i) {
        CircleMap rhs = g;
        for (int j = k - 1; j >= 0; --j)
            rhs = compose(f[j].power(static_cast<int>(a(i, j))), rhs);
        for (double x : samples) {
            if (circle_dist(g(f[i](x)), rhs(x)) > relation_tol) {
                std::ostringstream os;
                os << "AbC relation fails for f_" << i + 1 << " (gap "
                   << circle_dist(g(f[i](x)), rhs(x)) << " at x = " << x << ")";
                throw std::invalid_argument(os.str());
            }
        }
    }

    // rotation vector; (A - I) omega must be integral
    Vec omega_hat(k);
    for (int i = 0; i < k; ++i) omega_hat[i] = rotation_number(f[i], rotation_iters).value;
    IntMat ami = a - IntMat::Identity(k, k);
    std::int64_t det_ami = det_exact(ami);
    if (det_ami == 0) throw std::invalid_argument("A - I is singular");
    Vec image = ami.cast<double>() * omega_hat;
    IntVec m(k);
    for (int i = 0; i < k; ++i) {
        m[i] = std::llround(image[i]);
        if (std::fabs(image[i] - static_cast<double>(m[i])) >
            0.01 + 10.0 * k / static_cast<double>(rotation_iters))
            throw std::runtime_error("measured rotation vector violates the AbC constraint");
    }
    // omega = (A - I)^{-1} m exactly: numerators over D = det(A - I)
    const std::int64_t d_abs = det_ami < 0 ? -det_ami : det_ami;
    Vec omega_real = ami.cast<double>().inverse() * m.cast<double>();
    IntVec num(k);
    for (int i = 0; i < k; ++i) num[i] = std::llround(omega_real[i] * static_cast<double>(det_ami));
    if (((ami * num - det_ami * m).cwiseAbs()).maxCoeff() != 0)
        throw std::runtime_error("rational rotation vector recovery failed");

    AbcResult out;
    out.rotation_vector = Vec(k);
    for (int i = 0; i < k; ++i) {
        double w = static_cast<double>(num[i]) / static_cast<double>(det_ami);
        out.rotation_vector[i] = w - std::floor(w);
    }

    // Lambda = {n : n . (num/D) in Z}: kernel of [num^T | -D] projected
    IntMat sys(1, k + 1);
    for (int i = 0; i < k; ++i) sys(0, i) = num[i] % det_ami;
    sys(0, k) = -det_ami;
    IntMat ker = kernel_lattice(sys);
    if (ker.cols() != k) throw std::runtime_error("period lattice has unexpected rank");
    IntMat basis = ker.topRows(k); // projection drops the slack coordinate
    out.period_lattice = basis;

    // intersect fixed-point sets basis map by basis map
    double p = k_set.clamp_into(0.37); // deterministic start inside K
    bool all_converged = true;
    for (int c = 0; c < basis.cols(); ++c) {
        CircleMap step = CircleMap::rotation(0.0, f[0].resolution());
        for (int i = 0; i < k; ++i)
            step = compose(f[i].power(static_cast<int>(basis(i, c))), step);
        bool converged = false;
        for (long long it = 0; it < fix_cap; ++it) {
            double next = step(p);
            double gap = circle_dist(next, p);
            p = next;
            if (gap < 1e-9) {
                converged = true;
                break;
            }
        }
        all_converged = all_converged && converged;
    }
    out.point = p;
    double resid = 0;
    for (int c = 0; c < basis.cols(); ++c) {
        CircleMap step = CircleMap::rotation(0.0, f[0].resolution());
        for (int i = 0; i < k; ++i)
            step = compose(f[i].power(static_cast<int>(basis(i, c))), step);
        resid = std::max(resid, circle_dist(step(p), p));
    }
    out.residual = resid;
    out.converged = all_converged;
    return out;
}

} // namespace nilact
