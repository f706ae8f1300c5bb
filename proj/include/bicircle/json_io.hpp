#pragma once

#include <string>

#include "json.hpp"

#include "bicircle/factorization.hpp"
#include "bicircle/stability.hpp"

namespace bicircle {

// Key order is preserved so emitted documents are stable across runs.
using json = nlohmann::ordered_json;

json matrix_to_json(const Eigen::MatrixXcd& M);
Eigen::MatrixXcd matrix_from_json(const json& j);

json to_json(const LaurentPoly& p);
LaurentPoly poly_from_json(const json& j);

json to_json(const MomentTable& t);
MomentTable moments_from_json(const json& j);

json to_json(const OrthoLevel& lev);
json to_json(const ResidualReport& rep);
json to_json(const RecurrenceSet& rs);
json to_json(const EhatScan& scan);
json to_json(const ConditionReport& rep);
json to_json(const StabilityReport& rep);
json to_json(const FactorizationWork& work);
json to_json(const FactorResult& res);

// Weight readers. A document is either a moment table (key "c"), or a
// polynomial: Hermitian polynomials reaching negative powers are reciprocal
// trigonometric densities 1/Q, anything else the factor of a reciprocal
// modulus square 1/|p|^2. A top-level "weight" key naming the kind
// ("reciprocal_mod_square", "reciprocal_trig_poly", "explicit_moments")
// overrides the inference; the payload then sits under "polynomial" or
// "moments".
WeightSpec weight_from_json(const json& j);
WeightSpec load_weight(const std::string& path);

json load_json(const std::string& path);
void save_json(const std::string& path, const json& j);

std::string moments_to_csv(const MomentTable& t);
std::string scan_to_csv(const EhatScan& scan);
std::string residuals_to_csv(const ResidualReport& rep);

}  // namespace bicircle
