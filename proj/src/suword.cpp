#include "nilact/suword.hpp"

#include <cmath>

namespace nilact {

SuWord SuWord::from_letters(std::vector<SuLetter> raw) {
    SuWord w;
    for (SuLetter& l : raw) {
        if (l.vec.cwiseAbs().maxCoeff() == 0.0) continue;
        if (!w.letters.empty() && w.letters.back().slot == l.slot) {
            w.letters.back().vec += l.vec;
            if (w.letters.back().vec.cwiseAbs().maxCoeff() == 0.0) w.letters.pop_back();
        } else {
            w.letters.push_back(std::move(l));
        }
    }
    return w;
}

SuWord SuWord::concat(const SuWord& other) const {
    std::vector<SuLetter> raw = letters;
    raw.insert(raw.end(), other.letters.begin(), other.letters.end());
    return from_letters(std::move(raw));
}

SuWord SuWord::inverse() const {
    std::vector<SuLetter> raw;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it)
        raw.push_back({it->slot, -it->vec});
    return from_letters(std::move(raw));
}

Vec SuWord::pi(int d) const {
    Vec sum = Vec::Zero(d);
    for (const SuLetter& l : letters) sum += l.vec;
    return sum;
}

Vec SuModel::into_slot(Slot slot, const Vec& v, double tol) const {
    const Mat& basis = slot == Slot::Stable ? stable_basis : unstable_basis;
    Vec coeff = (basis.transpose() * basis).ldlt().solve(basis.transpose() * v);
    Vec proj = basis * coeff;
    if ((proj - v).norm() > tol * (1.0 + v.norm()))
        throw std::invalid_argument("vector does not lie in the requested leaf subspace");
    return proj;
}

SuModel su_model(const NilAutomorphism& l, const LatticeSpec& lattice) {
    SuModel model;
    model.automorphism = l;
    model.lattice = lattice;
    Mat a = l.base_full().cast<double>();
    Eigen::EigenSolver<Mat> es(a);
    const int d = static_cast<int>(a.rows());
    std::vector<Vec> scols, ucols;
    std::vector<bool> used(d, false);
    for (int i = 0; i < d; ++i) {
        if (used[i]) continue;
        double mod = std::abs(es.eigenvalues()[i]);
        if (std::abs(std::log(std::max(1e-300, mod))) <= 1e-9)
            throw std::invalid_argument("affine model must be partially hyperbolic (hyperbolic base)");
        Eigen::VectorXcd v = es.eigenvectors().col(i);
        auto& target = mod < 1.0 ? scols : ucols;
        if (v.imag().norm() < 1e-9 * v.norm()) {
            used[i] = true;
            target.push_back(v.real() / v.real().norm());
        } else {
            int partner = -1;
            for (int j = i + 1; j < d; ++j)
                if (!used[j] && std::abs(std::conj(es.eigenvalues()[i]) - es.eigenvalues()[j]) <
                                    1e-6 * (1.0 + std::abs(es.eigenvalues()[i]))) {
                    partner = j;
                    break;
                }
            if (partner < 0) throw std::runtime_error("unpaired complex eigenvector");
            used[i] = used[partner] = true;
            target.push_back(v.real() / v.real().norm());
            target.push_back(v.imag() / v.imag().norm());
        }
    }
    model.stable_basis = Mat(d, scols.size());
    for (size_t i = 0; i < scols.size(); ++i) model.stable_basis.col(i) = scols[i];
    model.unstable_basis = Mat(d, ucols.size());
    for (size_t i = 0; i < ucols.size(); ++i) model.unstable_basis.col(i) = ucols[i];
    return model;
}

NormalForm word_normal_form(const SuWord& w, int d) {
    NormalForm nf;
    nf.stable = Vec::Zero(d);
    nf.unstable = Vec::Zero(d);
    if (w.letters.empty()) return nf;

    // view the word as pairs v_i u_i (possibly zero on either side)
    std::vector<std::pair<Vec, Vec>> pairs;
    size_t i = 0;
    while (i < w.letters.size()) {
        Vec v = Vec::Zero(d), u = Vec::Zero(d);
        if (w.letters[i].slot == Slot::Stable) {
            v = w.letters[i].vec;
            ++i;
            if (i < w.letters.size() && w.letters[i].slot == Slot::Unstable) {
                u = w.letters[i].vec;
                ++i;
            }
        } else {
            u = w.letters[i].vec;
            ++i;
        }
        pairs.emplace_back(v, u);
    }

    // peel commutators:
    //   v1 u1 v2 u2 ... = [v1 u1 (-v1)(-u1)] [u1 (v1+v2)(-u1)(-(v1+v2))]
    //                     (v1+v2)(u1+u2) v3 u3 ...
    Vec v_acc = pairs[0].first, u_acc = pairs[0].second;
    for (size_t k = 1; k < pairs.size(); ++k) {
        const Vec v_next = pairs[k].first;
        const Vec u_next = pairs[k].second;
        SuWord c1 = SuWord::from_letters({{Slot::Stable, v_acc},
                                          {Slot::Unstable, u_acc},
                                          {Slot::Stable, -v_acc},
                                          {Slot::Unstable, -u_acc}});
        if (!c1.letters.empty()) nf.commutators.push_back(c1);
        Vec v_merged = v_acc + v_next;
        SuWord c2 = SuWord::from_letters({{Slot::Unstable, u_acc},
                                          {Slot::Stable, v_merged},
                                          {Slot::Unstable, -u_acc},
                                          {Slot::Stable, -v_merged}});
        if (!c2.letters.empty()) nf.commutators.push_back(c2);
        v_acc = v_merged;
        u_acc = u_acc + u_next;
    }
    nf.stable = v_acc;
    nf.unstable = u_acc;
    return nf;
}

SuWord recompose(const NormalForm& nf) {
    SuWord w;
    for (const SuWord& c : nf.commutators) w = w.concat(c);
    return w.concat(SuWord::from_letters(
        {{Slot::Stable, nf.stable}, {Slot::Unstable, nf.unstable}}));
}

GroupElement apply_su_word_affine(const SuWord& w, const GroupElement& x, const SuModel& model) {
    const LatticeSpec& lat = model.lattice;
    GroupElement y = x;
    // rightmost letter acts first
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        Vec t = model.into_slot(it->slot, it->vec);
        LieElement leaf(t.head(lat.n), t.segment(lat.n, lat.n), 0.0, t.tail(lat.m));
        y = group_mul(y, exp_map(leaf));
    }
    return y;
}

double center_drift(const SuWord& w, const SuModel& model) {
    const int d = 2 * model.lattice.n + model.lattice.m;
    if (!w.is_center(d))
        throw std::invalid_argument("center_drift needs Pi(w) = 0");
    GroupElement e = GroupElement::identity(model.lattice);
    return apply_su_word_affine(w, e, model).z;
}

double polygon_omega_area(const SuWord& w, const SuModel& model) {
    // partial sums in application order (right to left); area via the
    // omega shoelace sum (1/2) sum omega(P_{i-1}, P_i)
    const int n = model.lattice.n;
    auto om = [n](const Vec& a, const Vec& b) {
        return a.head(n).dot(b.segment(n, n)) - a.segment(n, n).dot(b.head(n));
    };
    const int d = 2 * n + model.lattice.m;
    Vec prev = Vec::Zero(d);
    double area = 0;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        Vec next = prev + it->vec;
        area += 0.5 * om(prev, next);
        prev = next;
    }
    return area;
}

} // namespace nilact
