#include "nilact/io.hpp"

#include <cmath>
#include <sstream>

namespace nilact {

json group_element_to_json(const GroupElement& g) {
    json arr = json::array();
    for (int i = 0; i < g.q.size(); ++i) arr.push_back(g.q[i]);
    for (int i = 0; i < g.p.size(); ++i) arr.push_back(g.p[i]);
    arr.push_back(g.z);
    for (int i = 0; i < g.t.size(); ++i) arr.push_back(g.t[i]);
    return arr;
}

GroupElement group_element_from_json(const nlohmann::json& j, const LatticeSpec& g) {
    if (!j.is_array() || static_cast<int>(j.size()) != 2 * g.n + 1 + g.m)
        throw std::invalid_argument("group element needs " +
                                    std::to_string(2 * g.n + 1 + g.m) + " coordinates");
    GroupElement out(Vec(g.n), Vec(g.n), 0.0, Vec(g.m));
    int c = 0;
    for (int i = 0; i < g.n; ++i) out.q[i] = j[c++];
    for (int i = 0; i < g.n; ++i) out.p[i] = j[c++];
    out.z = j[c++];
    for (int i = 0; i < g.m; ++i) out.t[i] = j[c++];
    return out;
}

json lie_element_to_json(const LieElement& x) {
    json arr = json::array();
    for (int i = 0; i < x.a.size(); ++i) arr.push_back(x.a[i]);
    for (int i = 0; i < x.b.size(); ++i) arr.push_back(x.b[i]);
    arr.push_back(x.c);
    for (int i = 0; i < x.s.size(); ++i) arr.push_back(x.s[i]);
    return arr;
}

LieElement lie_element_from_json(const nlohmann::json& j, const LatticeSpec& g) {
    if (!j.is_array() || static_cast<int>(j.size()) != 2 * g.n + 1 + g.m)
        throw std::invalid_argument("Lie element needs " + std::to_string(2 * g.n + 1 + g.m) +
                                    " coordinates");
    LieElement out(Vec(g.n), Vec(g.n), 0.0, Vec(g.m));
    int c = 0;
    for (int i = 0; i < g.n; ++i) out.a[i] = j[c++];
    for (int i = 0; i < g.n; ++i) out.b[i] = j[c++];
    out.c = j[c++];
    for (int i = 0; i < g.m; ++i) out.s[i] = j[c++];
    return out;
}

json int_matrix_to_json(const IntMat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

IntMat int_matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw std::invalid_argument("matrix must be a non-empty array of integer rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    IntMat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols)
            throw std::invalid_argument("matrix rows have inconsistent lengths");
        for (int c = 0; c < cols; ++c) {
            if (!j[i][c].is_number_integer())
                throw std::invalid_argument("matrix entries must be integers");
            m(i, c) = j[i][c].get<std::int64_t>();
        }
    }
    return m;
}

json vec_to_json(const Vec& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

json suword_to_json(const SuWord& w) {
    json arr = json::array();
    for (const SuLetter& l : w.letters) {
        json entry;
        entry["slot"] = l.slot == Slot::Stable ? "s" : "u";
        entry["vec"] = vec_to_json(l.vec);
        arr.push_back(entry);
    }
    return arr;
}

SuWord suword_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("word must be an array of letters");
    std::vector<SuLetter> letters;
    for (const auto& entry : j) {
        std::string slot = entry.at("slot");
        if (slot != "s" && slot != "u")
            throw std::invalid_argument("letter slot must be \"s\" or \"u\"");
        const auto& vj = entry.at("vec");
        Vec v(vj.size());
        for (size_t i = 0; i < vj.size(); ++i) v[i] = vj[i];
        letters.push_back({slot == "s" ? Slot::Stable : Slot::Unstable, v});
    }
    return SuWord::from_letters(std::move(letters));
}

CircleMap circle_map_from_json(const nlohmann::json& j) {
    std::string kind = j.at("kind");
    int resolution = j.value("resolution", 4096);
    if (kind == "rotation") {
        return CircleMap::rotation(j.at("rho").get<double>(), resolution);
    }
    if (kind == "arnold") {
        double omega = j.at("omega");
        double eps = j.at("eps");
        if (std::abs(eps) >= 1.0)
            throw std::invalid_argument("arnold family needs |eps| < 1 for monotonicity");
        return CircleMap::from_function(
            [omega, eps](double x) {
                return x + omega + eps * std::sin(2.0 * M_PI * x) / (2.0 * M_PI);
            },
            resolution);
    }
    if (kind == "northsouth" || kind == "doubling_conjugacy") {
        double kappa = j.value("kappa", 0.12);
        bool doubling = kind == "doubling_conjugacy";
        // north-south map: time-1 flow of -kappa sin(2 pi x); the doubling
        // conjugacy g rescales flow time by 2, so g f g^{-1} = f^2 exactly
        auto lift = [kappa, doubling](double x) {
            double k = std::floor(x);
            double y = x - k;
            double out;
            auto push = [&](double u, bool reflect) {
                double t = std::tan(M_PI * u);
                double scaled = doubling ? t * t : t * std::exp((reflect ? 1.0 : -1.0) *
                                                                2.0 * M_PI * kappa);
                return std::atan(scaled) / M_PI;
            };
            const double tol = 1e-15;
            if (y < tol || y > 1.0 - tol) out = 0.0;
            else if (std::abs(y - 0.5) < tol) out = 0.5;
            else if (y < 0.5) out = push(y, false);
            else out = 0.5 + push(y - 0.5, true);
            return out + k + (y > 1.0 - tol ? 1.0 : 0.0);
        };
        return CircleMap::from_function(lift, resolution);
    }
    if (kind == "grid") {
        return CircleMap(j.at("values").get<std::vector<double>>());
    }
    throw std::invalid_argument("unknown circle map kind '" + kind + "'");
}

ActionSpec ActionFile::to_action_spec() const {
    std::vector<IntMat> mats;
    for (const auto& g : generators) mats.push_back(g.automorphism.base_full());
    return ActionSpec(std::move(mats));
}

ActionFile parse_action_file(const nlohmann::json& doc) {
    ActionFile out;
    if (!doc.is_object()) throw std::invalid_argument("action file must be a table");
    out.version = doc.value("version", 1);
    if (out.version != 1)
        throw std::invalid_argument("unrecognized action file version " +
                                    std::to_string(out.version));
    if (!doc.contains("group")) throw std::invalid_argument("missing [group] table");
    const auto& g = doc["group"];
    out.group.n = g.value("n", 0);
    out.group.m = g.value("m", 0);
    out.group.r = g.value("r", 1);
    if (out.group.n < 0 || out.group.m < 0 || out.group.r < 1)
        throw std::invalid_argument("[group] needs n >= 0, m >= 0, r >= 1");
    if (out.group.n == 0 && out.group.m == 0)
        throw std::invalid_argument("[group] is zero-dimensional");

    if (!doc.contains("generator") || !doc["generator"].is_array() || doc["generator"].empty())
        throw std::invalid_argument("at least one [[generator]] is required");
    int index = 0;
    for (const auto& spec : doc["generator"]) {
        ++index;
        const std::string where = "generator " + std::to_string(index) + ": ";
        try {
            IntMat base(0, 0), abelian(0, 0);
            if (out.group.n > 0) {
                if (!spec.contains("matrix"))
                    throw std::invalid_argument("missing 'matrix' (2n x 2n symplectic block)");
                base = int_matrix_from_json(spec["matrix"]);
                if (base.rows() != 2 * out.group.n)
                    throw std::invalid_argument("'matrix' must be 2n x 2n");
            }
            if (out.group.m > 0) {
                if (!spec.contains("abelian"))
                    throw std::invalid_argument("missing 'abelian' (m x m integer block)");
                abelian = int_matrix_from_json(spec["abelian"]);
                if (abelian.rows() != out.group.m)
                    throw std::invalid_argument("'abelian' must be m x m");
            }
            GeneratorEntry entry;
            entry.automorphism =
                automorphism_from_symplectic(SymplecticMatrix(base), abelian);
            entry.translation = spec.contains("translation")
                                    ? group_element_from_json(spec["translation"], out.group)
                                    : GroupElement::identity(out.group);
            int need_r = entry.automorphism.required_center_denominator();
            if (out.group.r % need_r != 0) {
                out.group.r *= need_r;
                out.warnings.push_back(where + "center correction is half-integral; " +
                                       "lattice center denominator raised to r = " +
                                       std::to_string(out.group.r));
            }
            out.generators.push_back(std::move(entry));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(where + e.what());
        }
    }
    // pairwise commutation of the full base matrices, with locations
    for (size_t i = 0; i < out.generators.size(); ++i)
        for (size_t j = i + 1; j < out.generators.size(); ++j) {
            IntMat a = out.generators[i].automorphism.base_full();
            IntMat b = out.generators[j].automorphism.base_full();
            if (((a * b - b * a).cwiseAbs()).maxCoeff() != 0) {
                std::ostringstream os;
                os << "generators " << i + 1 << " and " << j + 1 << " do not commute";
                throw std::invalid_argument(os.str());
            }
        }

    if (doc.contains("perturbation")) {
        const auto& pert = doc["perturbation"];
        CocycleField field;
        field.lattice = out.group;
        if (!pert.contains("term") || !pert["term"].is_array())
            throw std::invalid_argument("perturbation needs [[perturbation.term]] entries");
        int tindex = 0;
        for (const auto& tj : pert["term"]) {
            ++tindex;
            const std::string where = "perturbation term " + std::to_string(tindex) + ": ";
            CocycleTerm term;
            if (!tj.contains("freq"))
                throw std::invalid_argument(where + "missing 'freq'");
            const auto& fj = tj["freq"];
            if (static_cast<int>(fj.size()) != 2 * out.group.n + 1 + out.group.m)
                throw std::invalid_argument(where + "freq needs one entry per (q,p,z,t) coordinate");
            term.freq = IntVec(fj.size());
            for (size_t i = 0; i < fj.size(); ++i) {
                if (!fj[i].is_number_integer())
                    throw std::invalid_argument(where + "frequencies must be integers");
                term.freq[i] = fj[i].get<std::int64_t>();
            }
            if (term.freq[2 * out.group.n] % out.group.r != 0)
                throw std::invalid_argument(where +
                                            "center frequency must be a multiple of r");
            term.amp = lie_element_from_json(tj.at("amp"), out.group);
            std::string kind = tj.value("kind", "sin");
            if (kind != "sin" && kind != "cos")
                throw std::invalid_argument(where + "kind must be \"sin\" or \"cos\"");
            term.use_sin = kind == "sin";
            field.terms.push_back(std::move(term));
        }
        out.perturbation = std::move(field);
    }

    if (doc.contains("options")) {
        const auto& opt = doc["options"];
        if (opt.contains("grid")) out.grid = opt["grid"].get<std::vector<int>>();
        out.depth = opt.value("depth", out.depth);
        out.seed = opt.value("seed", out.seed);
        out.iterations = opt.value("iterations", out.iterations);
        out.bound = opt.value("bound", out.bound);
        out.tol = opt.value("tol", out.tol);
        out.threads = opt.value("threads", out.threads);
    }
    return out;
}

ActionFile load_action_file(const std::string& path) {
    return parse_action_file(load_config(path));
}

} // namespace nilact
