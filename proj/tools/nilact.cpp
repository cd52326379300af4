#include "CLI11.hpp"
#include "nilact/centralizer.hpp"
#include "nilact/instances.hpp"
#include "nilact/io.hpp"
#include "nilact/selftest.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

using namespace nilact;

namespace {

enum ExitCode {
    EXIT_OK = 0,
    EXIT_PARSE = 2,
    EXIT_UNSUPPORTED = 3,
    EXIT_LAW_VIOLATION = 4,
    EXIT_TOLERANCE = 5,
};

struct Output {
    bool as_json = false;
    std::string out_path;

    void emit(const json& report, const std::string& human) const {
        std::string text = report.dump(2);
        text.push_back('\n');
        if (!out_path.empty()) {
            std::ofstream f(out_path);
            if (!f) throw std::runtime_error("cannot open " + out_path);
            f << text;
            if (!as_json) std::cout << human;
        } else if (as_json) {
            std::cout << text;
        } else {
            std::cout << human;
        }
    }
};

json base_report(const std::string& command, const std::vector<std::string>& warnings) {
    json rep;
    rep["command"] = command;
    rep["warnings"] = warnings;
    return rep;
}

int cmd_analyze(const std::string& path, std::uint64_t seed, const Output& out) {
    ActionFile file = load_action_file(path);
    ActionSpec action = file.to_action_spec();

    json rep = base_report("analyze " + path, file.warnings);
    std::ostringstream human;

    LyapunovData lyap = lyapunov_exponents(action, seed);
    json exps = json::array();
    human << "Lyapunov exponents (k = " << action.k << ", d = " << action.d << ")\n";
    for (const auto& f : lyap.exponents) {
        json e;
        e["coeffs"] = vec_to_json(f.coeffs);
        e["dim"] = f.space_dim;
        exps.push_back(e);
        human << "  chi = [";
        for (int i = 0; i < f.coeffs.size(); ++i) human << (i ? ", " : "") << f.coeffs[i];
        human << "]  dim " << f.space_dim << "\n";
    }
    rep["results"]["exponents"] = exps;
    rep["results"]["center_dim"] = lyap.center_dim;

    auto coarse = coarse_exponents(lyap.exponents);
    rep["results"]["coarse_count"] = coarse.size();
    ChamberComplex cc = weyl_chambers(coarse, lyap.exponents, action.k);
    json walls = json::array();
    for (const auto& w : cc.walls) walls.push_back(vec_to_json(w));
    json chambers = json::array();
    for (const auto& ch : cc.chambers) {
        json c;
        c["signs"] = ch.signs;
        json wit = json::array();
        for (int i = 0; i < ch.witness.size(); ++i) wit.push_back(ch.witness[i]);
        c["witness"] = wit;
        chambers.push_back(c);
    }
    rep["results"]["walls"] = walls;
    rep["results"]["chambers"] = chambers;
    human << coarse.size() << " coarse classes, " << cc.walls.size() << " walls, "
          << cc.chambers.size() << " chambers\n";
    if (!cc.enumerated)
        rep["warnings"].push_back("chamber enumeration limited to rank <= 3; walls only");

    HigherRankReport hr = is_higher_rank(action, seed);
    rep["results"]["higher_rank"] = hr.higher_rank;
    rep["results"]["independent_coarse_count"] = hr.independent_coarse_count;
    rep["results"]["rank_one_factor"] = hr.factor.has_rank_one_factor;
    if (hr.factor.has_rank_one_factor) {
        rep["results"]["factor_note"] = hr.factor.note;
        rep["results"]["witness_subspace"] = int_matrix_to_json(hr.factor.witness_subspace);
    }
    human << "higher rank: " << (hr.higher_rank ? "yes" : "no") << " ("
          << hr.independent_coarse_count << " independent coarse exponents)\n";
    if (hr.factor.has_rank_one_factor) human << "  " << hr.factor.note << "\n";

    out.emit(rep, human.str());
    return EXIT_OK;
}

int cmd_centralizer(const std::string& matrix_arg, const std::string& poly_arg, bool oracle,
                    std::int64_t bound, const Output& out) {
    IntMat m;
    if (!matrix_arg.empty()) {
        m = int_matrix_from_json(nlohmann::json::parse(matrix_arg));
    } else if (!poly_arg.empty()) {
        std::vector<std::int64_t> coeffs;
        std::stringstream ss(poly_arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) coeffs.push_back(std::stoll(tok));
        m = companion_matrix(IntPoly(std::move(coeffs)));
    } else {
        throw std::invalid_argument("centralizer needs --matrix or --poly");
    }

    CentralizerReport report;
    try {
        report = centralizer_report(m, oracle, bound);
    } catch (const std::invalid_argument& e) {
        // attach the classification to the refusal
        json rep = base_report("centralizer", {});
        rep["error"] = e.what();
        RootClassification rc = classify_matrix(m);
        rep["classification"] = {{"r1", rc.r1},
                                 {"r2", rc.r2},
                                 {"hyperbolic", rc.hyperbolic},
                                 {"irreducible", rc.irreducible}};
        std::cout << rep.dump(2) << "\n";
        return EXIT_UNSUPPORTED;
    }

    json rep = base_report("centralizer", {});
    rep["results"]["matrix"] = int_matrix_to_json(m);
    rep["results"]["r1"] = report.classification.r1;
    rep["results"]["r2"] = report.classification.r2;
    rep["results"]["rank_gl"] = report.rank_gl;
    if (report.rank_sp) {
        rep["results"]["rank_sp"] = *report.rank_sp;
        rep["results"]["r0"] = *report.r0;
        rep["results"]["r0_exceeds_one"] = report.r0_exceeds_one;
    }
    std::ostringstream human;
    human << "d = " << m.rows() << ", r1 = " << report.classification.r1
          << ", r2 = " << report.classification.r2 << "\n"
          << "rank Z_GL = " << report.rank_gl << "\n";
    if (report.rank_sp)
        human << "rank Z_Sp = r0 = " << *report.rank_sp
              << (report.r0_exceeds_one ? "  (> 1)" : "") << "\n";
    bool mismatch = false;
    if (oracle) {
        rep["results"]["oracle_rank_gl"] = *report.oracle_rank_gl;
        human << "oracle GL rank = " << *report.oracle_rank_gl << "\n";
        mismatch = *report.oracle_rank_gl != report.rank_gl;
        if (report.oracle_rank_sp) {
            rep["results"]["oracle_rank_sp"] = *report.oracle_rank_sp;
            human << "oracle Sp rank = " << *report.oracle_rank_sp << "\n";
            mismatch = mismatch || *report.oracle_rank_sp != *report.rank_sp;
        }
    }
    out.emit(rep, human.str());
    if (mismatch) {
        std::cerr << "formula and oracle disagree: implementation law violated\n";
        return EXIT_LAW_VIOLATION;
    }
    return EXIT_OK;
}

int cmd_conjugacy(const std::string& path, const std::string& grid_arg, int depth_arg,
                  double tol_arg, int threads_arg, const std::string& field_out,
                  const std::string& csv_out, const Output& out) {
    ActionFile file = load_action_file(path);
    if (!file.perturbation) throw std::invalid_argument("conjugacy needs a [perturbation] table");
    if (file.generators.size() != 1)
        throw std::invalid_argument("conjugacy uses exactly one generator");

    PerturbedMap f;
    f.automorphism = file.generators[0].automorphism;
    f.v = *file.perturbation;
    // fold an affine translation into the constant term of v
    GroupElement g0 = file.generators[0].translation;
    if (quasi_norm(g0) > 0) {
        CocycleTerm constant;
        constant.freq = IntVec::Zero(2 * file.group.n + 1 + file.group.m);
        constant.amp = log_map(g0);
        constant.use_sin = false;
        f.v.terms.push_back(constant);
    }
    f.v.lattice = file.group;

    SolverOptions opt;
    if (!grid_arg.empty()) {
        std::stringstream ss(grid_arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) opt.grid.push_back(std::stoi(tok));
    } else {
        opt.grid = file.grid;
    }
    opt.depth = depth_arg > 0 ? depth_arg : file.depth;
    opt.threads = threads_arg > 0 ? threads_arg : file.threads;
    double tol = tol_arg > 0 ? tol_arg : file.tol;

    SemiconjugacyField s;
    try {
        s = solve_franks_manning(f, opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return EXIT_UNSUPPORTED;
    }
    json rep = base_report("conjugacy " + path, file.warnings);
    for (const auto& w : s.warnings) rep["warnings"].push_back(w);
    rep["results"]["depth"] = s.depth;
    rep["results"]["grid"] = s.grid;
    rep["results"]["residual_max"] = s.residual_max;
    rep["results"]["residual_mean"] = s.residual_mean;

    // equivariance diagnostic over the lattice generators
    double equi = 0;
    {
        const LatticeSpec lat = s.lattice;
        std::vector<GroupElement> gens;
        for (int i = 0; i < lat.n; ++i) {
            GroupElement g = GroupElement::identity(lat);
            g.q[i] = 1;
            gens.push_back(g);
            g = GroupElement::identity(lat);
            g.p[i] = 1;
            gens.push_back(g);
        }
        GroupElement gz = GroupElement::identity(lat);
        gz.z = 1.0 / lat.r;
        gens.push_back(gz);
        for (int i = 0; i < lat.m; ++i) {
            GroupElement g = GroupElement::identity(lat);
            g.t[i] = 1;
            gens.push_back(g);
        }
        std::mt19937_64 rng(file.seed);
        std::uniform_real_distribution<double> u(0, 1);
        for (int sample = 0; sample < 256; ++sample) {
            GroupElement x(Vec(lat.n), Vec(lat.n), 0, Vec(lat.m));
            for (int i = 0; i < lat.n; ++i) x.q[i] = u(rng);
            for (int i = 0; i < lat.n; ++i) x.p[i] = u(rng);
            x.z = u(rng) / lat.r;
            for (int i = 0; i < lat.m; ++i) x.t[i] = u(rng);
            Vec base = s.phi_map(x);
            for (const auto& gamma : gens) {
                Vec shifted = s.phi_map(group_mul(gamma, x));
                equi = std::max(equi,
                                (shifted - base - gamma.base()).cwiseAbs().maxCoeff());
            }
        }
        rep["results"]["equivariance_max"] = equi;
    }

    if (!field_out.empty()) {
        save_field(s, field_out);
        rep["results"]["field_file"] = field_out;
    }
    if (!csv_out.empty()) {
        export_residual_csv(s, csv_out);
        rep["results"]["csv_file"] = csv_out;
    }

    std::ostringstream human;
    human << "depth " << s.depth << ", residual max " << s.residual_max << ", mean "
          << s.residual_mean << "\n"
          << "equivariance max " << equi << "\n";
    for (const auto& w : s.warnings) human << "warning: " << w << "\n";
    out.emit(rep, human.str());
    if (s.residual_max > tol) {
        std::cerr << "residual " << s.residual_max << " above tolerance " << tol
                  << " at depth " << s.depth << "\n";
        return EXIT_TOLERANCE;
    }
    return EXIT_OK;
}

int cmd_suword(const std::string& path, const Output& out) {
    nlohmann::json doc = load_config(path);
    LatticeSpec lat;
    lat.n = doc.at("group").value("n", 1);
    lat.m = doc.at("group").value("m", 0);
    lat.r = doc.at("group").value("r", 1);
    IntMat base = int_matrix_from_json(doc.at("matrix"));
    IntMat abelian = doc.contains("abelian") ? int_matrix_from_json(doc["abelian"])
                                             : IntMat::Zero(lat.m, lat.m);
    if (lat.m > 0 && !doc.contains("abelian")) abelian = IntMat::Identity(lat.m, lat.m);
    NilAutomorphism l = automorphism_from_symplectic(SymplecticMatrix(base), abelian);
    lat.r = std::max(lat.r, l.required_center_denominator());
    SuModel model = su_model(l, lat);
    SuWord w = suword_from_json(doc.at("word"));
    GroupElement x = doc.contains("point") ? group_element_from_json(doc["point"], lat)
                                           : GroupElement::identity(lat);

    GroupElement y = apply_su_word_affine(w, x, model);
    json rep = base_report("suword " + path, {});
    rep["results"]["pi"] = vec_to_json(w.pi(2 * lat.n + lat.m));
    rep["results"]["image"] = group_element_to_json(y);
    std::ostringstream human;
    human << "Pi(w) = [";
    Vec pi = w.pi(2 * lat.n + lat.m);
    for (int i = 0; i < pi.size(); ++i) human << (i ? ", " : "") << pi[i];
    human << "]\n";
    if (w.is_center(2 * lat.n + lat.m)) {
        double drift = center_drift(w, model);
        rep["results"]["center_drift"] = drift;
        rep["results"]["omega_area"] = polygon_omega_area(w, model);
        human << "center drift = " << drift << "\n";
    }
    out.emit(rep, human.str());
    return EXIT_OK;
}

int cmd_rotnum(const std::string& path, long long iters_arg, const Output& out) {
    nlohmann::json doc = load_config(path);
    json rep = base_report("rotnum " + path, {});
    std::ostringstream human;
    long long iters = iters_arg > 0 ? iters_arg : doc.value("iterations", 100000);

    if (doc.contains("maps")) {
        json list = json::array();
        for (const auto& spec : doc["maps"]) {
            CircleMap c = circle_map_from_json(spec);
            RotationNumber rn = rotation_number(c, iters);
            json entry;
            entry["rotation_number"] = rn.value;
            entry["error_bound"] = rn.error_bound;
            list.push_back(entry);
            human << "rotation number " << rn.value << " (+- " << rn.error_bound << ")\n";
        }
        rep["results"]["maps"] = list;
    }
    if (doc.contains("abc")) {
        const auto& abc = doc["abc"];
        std::vector<CircleMap> fs;
        for (const auto& spec : abc.at("f")) fs.push_back(circle_map_from_json(spec));
        CircleMap g = circle_map_from_json(abc.at("g"));
        IntMat a = int_matrix_from_json(abc.at("A"));
        CircleSet k = full_circle();
        if (abc.contains("K")) {
            k.intervals.clear();
            for (const auto& iv : abc["K"])
                k.intervals.emplace_back(iv[0].get<double>(), iv[1].get<double>());
        }
        AbcResult res = find_periodic_point_abc(fs, g, a, k, iters);
        rep["results"]["abc"]["point"] = res.point;
        rep["results"]["abc"]["residual"] = res.residual;
        rep["results"]["abc"]["rotation_vector"] = vec_to_json(res.rotation_vector);
        rep["results"]["abc"]["lattice"] = int_matrix_to_json(res.period_lattice);
        rep["results"]["abc"]["converged"] = res.converged;
        human << "abc point " << res.point << ", residual " << res.residual << "\n";
    }
    out.emit(rep, human.str());
    return EXIT_OK;
}

int cmd_selftest(std::uint64_t seed, int threads, const Output& out) {
    auto checks = run_acceptance_checks(seed, threads);
    json rep = base_report("selftest", {});
    json list = json::array();
    bool all = true;
    std::ostringstream human;
    for (const auto& c : checks) {
        json entry;
        entry["name"] = c.name;
        entry["pass"] = c.pass;
        entry["detail"] = c.detail;
        list.push_back(entry);
        all = all && c.pass;
        human << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  (" << c.detail << ")\n";
        std::cerr << c.name << ": " << c.seconds << " s\n";
    }
    rep["results"]["checks"] = list;
    rep["results"]["all_pass"] = all;
    human << (all ? "all checks passed\n" : "SOME CHECKS FAILED\n");
    out.emit(rep, human.str());
    return all ? EXIT_OK : EXIT_LAW_VIOLATION;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nilmanifold action analysis toolkit"};
    app.require_subcommand(1);

    Output out;
    std::uint64_t seed = 12345;
    int threads = 1;
    app.add_flag("--json", out.as_json, "emit the machine report on stdout");
    app.add_option("--out", out.out_path, "write the JSON report to a file");
    app.add_option("--seed", seed, "deterministic seed");
    app.add_option("--threads", threads, "worker threads (outputs are thread-count invariant)");

    std::string analyze_file;
    auto* analyze = app.add_subcommand("analyze", "exponents, chambers, higher-rank verdict");
    analyze->add_option("file", analyze_file, "action file (TOML or JSON)")->required();

    std::string matrix_arg, poly_arg;
    bool oracle = false;
    std::int64_t bound = 50;
    auto* centralizer = app.add_subcommand("centralizer", "centralizer ranks and r0");
    centralizer->add_option("--matrix", matrix_arg, "row-major JSON integer matrix");
    centralizer->add_option("--poly", poly_arg, "ascending coefficients, comma separated");
    centralizer->add_flag("--oracle", oracle, "cross-check with the brute-force oracle");
    centralizer->add_option("--bound", bound, "oracle entry bound");

    std::string conj_file, grid_arg, field_out, csv_out;
    int depth = 0;
    double tol = 0;
    auto* conjugacy = app.add_subcommand("conjugacy", "Franks-Manning solver");
    conjugacy->add_option("file", conj_file, "action file with a [perturbation]")->required();
    conjugacy->add_option("--grid", grid_arg, "comma-separated resolutions per coordinate");
    conjugacy->add_option("--depth", depth, "series truncation depth");
    conjugacy->add_option("--tol", tol, "residual tolerance (exit 5 above it)");
    conjugacy->add_option("--field-out", field_out, "write the grid field (binary + JSON header)");
    conjugacy->add_option("--csv", csv_out, "export the residual field as CSV");

    std::string suword_file;
    auto* suword = app.add_subcommand("suword", "su-word action on the affine model");
    suword->add_option("file", suword_file, "word file (TOML or JSON)")->required();

    std::string rotnum_file;
    long long iters = 0;
    auto* rotnum = app.add_subcommand("rotnum", "rotation numbers / AbC periodic points");
    rotnum->add_option("file", rotnum_file, "maps file (TOML or JSON)")->required();
    rotnum->add_option("--iters", iters, "Birkhoff iterations");

    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) return cmd_analyze(analyze_file, seed, out);
        if (*centralizer) return cmd_centralizer(matrix_arg, poly_arg, oracle, bound, out);
        if (*conjugacy)
            return cmd_conjugacy(conj_file, grid_arg, depth, tol, threads, field_out, csv_out, out);
        if (*suword) return cmd_suword(suword_file, out);
        if (*rotnum) return cmd_rotnum(rotnum_file, iters, out);
        if (*selftest) return cmd_selftest(seed, threads, out);
    } catch (const TomlError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return EXIT_PARSE;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return EXIT_PARSE;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_UNSUPPORTED;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_UNSUPPORTED;
    }
    return EXIT_OK;
}
