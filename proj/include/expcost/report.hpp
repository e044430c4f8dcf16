#pragma once

#include <string>

#include <json.hpp>

#include "expcost/certificate.hpp"
#include "expcost/engine.hpp"
#include "expcost/montecarlo.hpp"

namespace expcost {

inline constexpr int kSchemaVersion = 1;

// 12 significant digits, stable across runs.
std::string fmt_real(double x);

nlohmann::ordered_json convergence_json(const ConvergenceReport& rep);
std::string convergence_csv(const ConvergenceReport& rep);  // depth,ec_lower,value_mass,residual_mass

nlohmann::ordered_json check_json(const CheckReport& rep);
nlohmann::ordered_json estimate_json(const Estimate& est);

const char* verdict_name(Verdict v);

}  // namespace expcost
