#include "nilact/group.hpp"

#include <cmath>

namespace nilact {

namespace {
void check_dims(const GroupElement& g, const GroupElement& h) {
    if (g.q.size() != h.q.size() || g.p.size() != h.p.size() || g.t.size() != h.t.size())
        throw std::invalid_argument("group elements have mismatched dimensions");
}
} // namespace

GroupElement GroupElement::identity(const LatticeSpec& g) {
    return GroupElement(Vec::Zero(g.n), Vec::Zero(g.n), 0.0, Vec::Zero(g.m));
}

Vec GroupElement::base() const {
    Vec out(q.size() + p.size() + t.size());
    out << q, p, t;
    return out;
}

LieElement LieElement::zero(const LatticeSpec& g) {
    return LieElement(Vec::Zero(g.n), Vec::Zero(g.n), 0.0, Vec::Zero(g.m));
}

Vec LieElement::base() const {
    Vec out(a.size() + b.size() + s.size());
    out << a, b, s;
    return out;
}

GroupElement group_mul(const GroupElement& g, const GroupElement& h) {
    check_dims(g, h);
    return GroupElement(g.q + h.q, g.p + h.p, g.z + h.z + g.q.dot(h.p), g.t + h.t);
}

GroupElement group_inv(const GroupElement& g) {
    return GroupElement(-g.q, -g.p, g.q.dot(g.p) - g.z, -g.t);
}

double omega(const LieElement& x, const LieElement& y) {
    return x.a.dot(y.b) - x.b.dot(y.a);
}

LieElement bracket(const LieElement& x, const LieElement& y) {
    return LieElement(Vec::Zero(x.a.size()), Vec::Zero(x.b.size()), omega(x, y),
                      Vec::Zero(x.s.size()));
}

GroupElement exp_map(const LieElement& x) {
    return GroupElement(x.a, x.b, x.c + 0.5 * x.a.dot(x.b), x.s);
}

LieElement log_map(const GroupElement& g) {
    return LieElement(g.q, g.p, g.z - 0.5 * g.q.dot(g.p), g.t);
}

double bch_check(const LieElement& x, const LieElement& y) {
    LieElement lhs = log_map(group_mul(exp_map(x), exp_map(y)));
    double defect = (lhs.a - (x.a + y.a)).norm() + (lhs.b - (x.b + y.b)).norm() +
                    (lhs.s - (x.s + y.s)).norm() +
                    std::abs(lhs.c - (x.c + y.c + 0.5 * omega(x, y)));
    return defect;
}

GroupElement commutator(const GroupElement& g, const GroupElement& h) {
    return group_mul(group_mul(g, h), group_mul(group_inv(g), group_inv(h)));
}

std::pair<GroupElement, GroupElement> lattice_reduce(const GroupElement& g,
                                                     const LatticeSpec& gamma) {
    if (g.n() != gamma.n || g.m() != gamma.m)
        throw std::invalid_argument("lattice_reduce: element does not match lattice dimensions");
    // q, p, t first (integer translations), then the center.
    GroupElement g1(Vec(gamma.n), Vec(gamma.n), 0.0, Vec(gamma.m));
    for (int i = 0; i < gamma.n; ++i) g1.q[i] = std::floor(g.q[i]);
    for (int i = 0; i < gamma.n; ++i) g1.p[i] = std::floor(g.p[i]);
    for (int i = 0; i < gamma.m; ++i) g1.t[i] = std::floor(g.t[i]);
    GroupElement rest = group_mul(group_inv(g1), g);
    const double step = 1.0 / gamma.r;
    double zfloor = std::floor(rest.z / step);
    GroupElement gz(Vec::Zero(gamma.n), Vec::Zero(gamma.n), zfloor * step, Vec::Zero(gamma.m));
    GroupElement g0 = group_mul(group_inv(gz), rest);
    // guard against boundary roundoff: keep coordinates inside [0, 1) etc.
    auto wrap = [](double& v, double width, double& carry) {
        if (v >= width) { v -= width; carry += width; }
        if (v < 0) { v += width; carry -= width; }
    };
    for (int i = 0; i < gamma.n; ++i) wrap(g0.q[i], 1.0, g1.q[i]);
    for (int i = 0; i < gamma.n; ++i) wrap(g0.p[i], 1.0, g1.p[i]);
    for (int i = 0; i < gamma.m; ++i) wrap(g0.t[i], 1.0, g1.t[i]);
    double zc = gz.z;
    wrap(g0.z, step, zc);
    gz.z = zc;
    return {group_mul(g1, gz), g0};
}

bool in_lattice(const GroupElement& g, const LatticeSpec& gamma, double tol) {
    auto near_int = [tol](double v) { return std::abs(v - std::round(v)) <= tol; };
    for (int i = 0; i < g.n(); ++i)
        if (!near_int(g.q[i]) || !near_int(g.p[i])) return false;
    for (int i = 0; i < g.m(); ++i)
        if (!near_int(g.t[i])) return false;
    return near_int(g.z * gamma.r);
}

double quasi_norm(const GroupElement& g) {
    double base = std::sqrt(g.q.squaredNorm() + g.p.squaredNorm() + g.t.squaredNorm());
    return std::max(base, std::sqrt(std::abs(g.z)));
}

GroupElement dilate(const GroupElement& g, double lambda) {
    return GroupElement(lambda * g.q, lambda * g.p, lambda * lambda * g.z, lambda * g.t);
}

double center_distance_bound(double z) {
    LatticeSpec g{1, 0, 1};
    LieElement x = LieElement::zero(g);
    x.c = z;
    return quasi_norm(exp_map(x));
}

double group_dist(const GroupElement& g, const GroupElement& h) {
    return quasi_norm(group_mul(group_inv(g), h));
}

} // namespace nilact
