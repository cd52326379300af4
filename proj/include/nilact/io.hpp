#pragma once

#include "nilact/affine.hpp"
#include "nilact/circle.hpp"
#include "nilact/semiconjugacy.hpp"
#include "nilact/spectral.hpp"
#include "nilact/suword.hpp"
#include "nilact/toml.hpp"

#include <optional>

namespace nilact {

using json = nlohmann::ordered_json;

// Flat coordinate serialization [q..., p..., z, t...].
json group_element_to_json(const GroupElement& g);
GroupElement group_element_from_json(const nlohmann::json& j, const LatticeSpec& g);
json lie_element_to_json(const LieElement& x);
LieElement lie_element_from_json(const nlohmann::json& j, const LatticeSpec& g);

json int_matrix_to_json(const IntMat& m); // row-major nested arrays
IntMat int_matrix_from_json(const nlohmann::json& j);
json vec_to_json(const Vec& v);

json suword_to_json(const SuWord& w);
SuWord suword_from_json(const nlohmann::json& j);

// Parametric circle map specs keep input files small:
//   {kind:"rotation", rho}
//   {kind:"arnold", omega, eps}              x + omega + eps sin(2 pi x)/(2 pi)
//   {kind:"northsouth", kappa}               two hyperbolic fixed points 0, 1/2
//   {kind:"doubling_conjugacy", kappa}       g with g f g^{-1} = f^2 for northsouth f
//   {kind:"grid", values:[...]}
// Every spec takes an optional "resolution" (default 4096).
CircleMap circle_map_from_json(const nlohmann::json& j);

struct GeneratorEntry {
    NilAutomorphism automorphism;
    GroupElement translation;
};

// Parsed and validated action file (TOML or JSON).
struct ActionFile {
    int version = 1;
    LatticeSpec group;
    std::vector<GeneratorEntry> generators;
    std::optional<CocycleField> perturbation;
    std::vector<int> grid;
    int depth = 60;
    std::uint64_t seed = 12345;
    long long iterations = 100000;
    std::int64_t bound = 50;
    double tol = 1e-8;
    int threads = 1;
    std::vector<std::string> warnings;

    ActionSpec to_action_spec() const; // full base matrices
};

ActionFile parse_action_file(const nlohmann::json& doc);
ActionFile load_action_file(const std::string& path);

} // namespace nilact
