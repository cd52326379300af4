#pragma once

#include "nilact/intlin.hpp"

#include <functional>
#include <string>
#include <vector>

namespace nilact {

// Orientation-preserving circle homeomorphism as a monotone grid sample of a
// degree-one lift: values[i] = lift(i/N) for i = 0..N, values[N] = values[0] + 1.
// Evaluation is linear interpolation; strict monotonicity of the samples is
// checked on construction.
class CircleMap {
public:
    CircleMap() = default;
    explicit CircleMap(std::vector<double> lift_values);
    static CircleMap rotation(double rho, int resolution = 1024);
    static CircleMap from_function(const std::function<double(double)>& lift, int resolution);

    double lift(double x) const;            // lift(x + 1) = lift(x) + 1
    double operator()(double x) const;      // mod 1
    int resolution() const { return static_cast<int>(values_.size()) - 1; }
    const std::vector<double>& values() const { return values_; }

    CircleMap inverse() const;
    CircleMap power(int e) const;           // negative exponents allowed

private:
    std::vector<double> values_;
};

CircleMap compose(const CircleMap& f, const CircleMap& g); // f after g

struct RotationNumber {
    double value = 0.0;   // mod 1 in [0, 1)
    double raw = 0.0;     // (lift^n(x0) - x0)/n before reduction
    double error_bound = 0.0; // O(1/n)
};

RotationNumber rotation_number(const CircleMap& c, long long iterations, double x0 = 0.0);

// Compact set as a finite union of closed intervals on the circle.
struct CircleSet {
    std::vector<std::pair<double, double>> intervals; // within [0, 1)
    bool contains(double x, double slack = 0.0) const;
    double clamp_into(double x) const; // nearest point of the set
};

CircleSet full_circle();

struct AbcResult {
    double point = 0.0;
    IntMat period_lattice;          // columns generate Lambda
    Vec rotation_vector;            // exact rational values recovered
    double residual = 0.0;          // max_i d(beta^{basis_i} p, p)
    bool converged = false;
};

// Periodic-point finder for an Abelian-by-Cyclic family on K:
// g f_i = f_1^{A_i1} ... f_k^{Aik} g. Verifies the relation and the
// invariance of K by sampling, recovers the rational rotation vector from
// (A - I) omega in Z^k, computes the zero-rotation sublattice Lambda, and
// intersects fixed-point sets by forward iteration (Cauchy 1e-9, capped).
AbcResult find_periodic_point_abc(const std::vector<CircleMap>& f, const CircleMap& g,
                                  const IntMat& a, const CircleSet& k,
                                  long long rotation_iters = 100000,
                                  long long fix_cap = 10000000,
                                  double relation_tol = 1e-6, int relation_samples = 1024);

} // namespace nilact
