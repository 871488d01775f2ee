#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "cosetring/error.hpp"
#include "cosetring/freiman.hpp"
#include "cosetring/refine.hpp"

namespace cosetring {

struct Tolerances {
  double float_eq = 1e-9;
  double psd = 1e-12;
};

/// Free constants of a run. A zero epsilon means "auto", i.e. 2^{-4M-2}
/// once M is known.
struct RunConfig {
  double epsilon = 0.0;
  std::size_t m_cap = kDefaultMCap;
  double rho_grid = 1e-3;
  double budget = kDefaultEnumerationBudget;
  std::uint64_t seed = 42;
  std::size_t probe_count = kDefaultProbeCount;
  Tolerances tol;

  bool auto_epsilon() const { return epsilon == 0.0; }

  double resolve_epsilon(double M) const { return auto_epsilon() ? std::ldexp(1.0, -4 * static_cast<int>(M) - 2) : epsilon; }

  void validate() const {
    auto positive = [](bool ok, const char* what) {
      if (!ok) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive");
    };
    positive(epsilon >= 0.0, "epsilon");
    positive(m_cap > 0, "m_cap");
    positive(rho_grid > 0.0 && rho_grid < 0.5, "rho_grid");
    positive(budget > 0.0, "budget");
    positive(probe_count > 0, "probe_count");
    positive(tol.float_eq > 0.0 && tol.psd > 0.0, "tolerances");
  }
};

inline void to_json(nlohmann::json& j, const RunConfig& c) {
  j = {{"epsilon", c.auto_epsilon() ? nlohmann::json("auto") : nlohmann::json(c.epsilon)},
       {"m_cap", c.m_cap},
       {"rho_grid", c.rho_grid},
       {"budget", c.budget},
       {"seed", c.seed},
       {"probe_count", c.probe_count},
       {"tolerances", {{"float_eq", c.tol.float_eq}, {"psd", c.tol.psd}}}};
}

/// Overlay the keys present in j onto c.
inline void merge_config(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  if (j.contains("epsilon")) {
    const auto& e = j.at("epsilon");
    if (e.is_string()) {
      if (e.get<std::string>() != "auto") throw Error(ErrorCode::InvalidArgument, "epsilon must be a number or \"auto\"");
      c.epsilon = 0.0;
    } else {
      c.epsilon = e.get<double>();
    }
  }
  if (j.contains("m_cap")) c.m_cap = j.at("m_cap").get<std::size_t>();
  if (j.contains("rho_grid")) c.rho_grid = j.at("rho_grid").get<double>();
  if (j.contains("budget")) c.budget = j.at("budget").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("probe_count")) c.probe_count = j.at("probe_count").get<std::size_t>();
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    if (t.contains("float_eq")) c.tol.float_eq = t.at("float_eq").get<double>();
    if (t.contains("psd")) c.tol.psd = t.at("psd").get<double>();
  }
  c.validate();
}

inline ConcentrationConfig concentration_config(const RunConfig& c) {
  ConcentrationConfig out;
  out.m_cap = c.m_cap;
  out.budget = c.budget;
  return out;
}

}  // namespace cosetring
