#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "cosetring/bourgain.hpp"
#include "cosetring/spectral.hpp"

namespace cosetring {

inline constexpr std::size_t kDefaultProbeCount = 64;

struct AvgBoundReport {
  double bound = 0.0;    // eps^2 / 4
  double rho_min = 0.0;  // eps / (160 d' M)
  std::vector<double> probes;
  std::vector<double> probe_max;
  double max_value = 0.0;
  Index witness_x0 = 0;
  double witness_rho = 0.0;
  bool passes() const { return max_value <= bound * (1.0 + 1e-9) + 1e-20; }
};

namespace detail {

inline double effective_dimension(const BourgainSystem& S) { return std::max(S.dimension(), 2.0); }

/// Regular scales rho in [rho_min, 2]: `count` log-uniform candidates that
/// pass the regularity test, plus the first regular scale found in
/// [rho_min, 2 rho_min] by the dilate search.
inline std::vector<double> regular_probes(const BourgainSystem& S, double rho_min,
                                          std::size_t count = kDefaultProbeCount) {
  std::vector<double> out;
  const double top = 2.0;
  rho_min = std::min(rho_min, top);
  for (std::size_t i = 0; i < count; ++i) {
    double t = count == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    double rho = rho_min * std::pow(top / rho_min, t);
    if (regularity_at(S, rho).regular) out.push_back(rho);
  }
  for (int i = 0; i <= 500; ++i) {
    double rho = 2.0 * rho_min * (0.5 + 1e-3 * i);
    if (rho > top) break;
    if (regularity_at(S, rho).regular) {
      out.push_back(rho);
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// beta_rho depends on X_rho only, and X_rho is determined by its size.
class BetaCache {
 public:
  explicit BetaCache(const BourgainSystem& S) : system_(&S) {}

  const SystemMeasure& at(double rho) {
    auto key = system_->level_size(rho);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, beta_measure(*system_, rho)).first;
    return it->second;
  }

 private:
  const BourgainSystem* system_;
  std::map<std::size_t, SystemMeasure> cache_;
};

// E_x h(x)^2 beta_rho(x - x0) for every x0, as (h^2) * reflect(beta_rho).
inline std::vector<double> avg_bound_profile(const GroupFunction& residual, const SystemMeasure& beta) {
  auto sq = residual.map([](Complex z) { return Complex(std::norm(z), 0.0); });
  auto prof = convolve(sq, reflect(beta.beta));
  return prof.real_values();
}

inline AvgBoundReport avg_bound_sweep(const GroupFunction& residual, BetaCache& cache,
                                      const std::vector<double>& probes, double bound, double rho_min) {
  AvgBoundReport rep;
  rep.bound = bound;
  rep.rho_min = rho_min;
  rep.probes = probes;
  rep.max_value = -1.0;
  for (double rho : probes) {
    auto prof = avg_bound_profile(residual, cache.at(rho));
    auto it = std::max_element(prof.begin(), prof.end());
    rep.probe_max.push_back(*it);
    if (*it > rep.max_value) {
      rep.max_value = *it;
      rep.witness_x0 = static_cast<Index>(it - prof.begin());
      rep.witness_rho = rho;
    }
  }
  if (probes.empty()) rep.max_value = 0.0;
  return rep;
}

inline GroupFunction real_part(const GroupFunction& f) {
  return f.map([](Complex z) { return Complex(z.real(), 0.0); });
}

}  // namespace detail

/// E_x (f - psi_{S'} f)(x)^2 beta'_rho(x - x0) over every x0 and every regular
/// probe rho >= eps / (160 d' M), with d' read as max(dim S', 2).
inline AvgBoundReport avg_bound_check(const GroupFunction& f, const BourgainSystem& S, double epsilon, double M,
                                      std::size_t probe_count = kDefaultProbeCount) {
  require_same_group(f.group(), S.group());
  detail::require(epsilon > 0.0 && M > 0.0, ErrorCode::InvalidArgument, "epsilon and M must be positive");
  auto fr = detail::real_part(f);
  detail::BetaCache cache(S);
  auto residual = fr - detail::real_part(psi_apply(cache.at(1.0), fr));
  double rho_min = epsilon / (160.0 * detail::effective_dimension(S) * M);
  auto probes = detail::regular_probes(S, rho_min, probe_count);
  return detail::avg_bound_sweep(residual, cache, probes, epsilon * epsilon / 4.0, rho_min);
}

struct RefinementStep {
  std::size_t index = 0;
  bool formal = false;  // taken although the avg-bd test already passed
  double rho = 0.0;
  Index x0 = 0;
  double lhs = 0.0;
  Index gamma0 = 0;
  double weighted_mass = 0.0;
  double weighted_mass_bound = 0.0;  // eps^2 / 8M
  std::vector<Index> gamma_set;      // Gamma^{(j)}
  double l1_mass = 0.0;
  double l1_mass_bound = 0.0;  // eps^2 / 16M
  double kappa = 0.0;
  double kappa_prime = 0.0;
  double lambda = 1.0;
  double dimension = 0.0;  // of the new system
  std::size_t size = 0;
  bool to_sat = false;
};

struct RefinementCertificate {
  double epsilon = 0.0;
  double M = 0.0;
  double input_dimension = 0.0;
  std::size_t iterations = 0;
  std::size_t iteration_budget = 0;
  std::vector<RefinementStep> steps;
  AvgBoundReport final_avg;

  bool disjoint = true;
  bool to_sat = true;
  double gamma_mass_total = 0.0;
  double algebra_norm = 0.0;

  double dim_value = 0.0;
  double dim_bound = 0.0;  // 4d + 64 M^2 / eps^2

  double size_ratio = 0.0;    // |S'| / |S|
  double size_fitted_C = 0.0; // smallest C making the size bound hold

  double psi_sup_before = 0.0;
  double psi_sup_after = 0.0;
  double distance_before = 0.0;
  double distance_after = 0.0;

  double smoothing_l1 = 0.0;  // ||beta_1 * beta'_1 - beta_1||_1
  double smoothing_bound = 0.0;
  bool smoothing_support = false;  // Supp(beta'_1) within X_{eps/20dM}

  bool dim_ok() const { return dim_value <= dim_bound + 1e-9; }
  bool avg_lwr_ok() const { return psi_sup_after >= psi_sup_before - epsilon - 1e-9; }
  bool almost_int_ok() const { return distance_after <= distance_before + epsilon + 1e-9; }
  bool smoothing_ok() const { return !smoothing_support || smoothing_l1 <= smoothing_bound + 1e-9; }
  bool mass_ok() const { return gamma_mass_total <= algebra_norm + 1e-9; }
  bool all_ok() const {
    return dim_ok() && avg_lwr_ok() && almost_int_ok() && smoothing_ok() && mass_ok() && disjoint && to_sat &&
           final_avg.passes() && iterations <= iteration_budget;
  }
};

struct RefinementResult {
  BourgainSystem system;
  RefinementCertificate certificate;
};

/// Refines a regular system S until psi_{S'} f passes the local L^2 test
/// against every regular beta'_rho, recording each step.
///
/// Each step takes the worst (x0, rho), chooses gamma0 maximising
///   sum_gamma |f^(gamma)| |1 - beta_1^(gamma)| |beta_rho^(gamma0 - gamma)|
/// (smallest index on ties) and sets
///   S^{(j+1)} = lambda (kappa rho S^{(j)} ^ Bohr_{kappa'}({gamma0})).
/// The new system is the join of a dilate of S with a Bohr system on j + 1
/// characters, so it carries the certificate 4(d + 3(j + 1)).
inline RefinementResult refine_system(const GroupFunction& f, const BourgainSystem& S, double epsilon, double M,
                                      std::size_t probe_count = kDefaultProbeCount) {
  require_same_group(f.group(), S.group());
  detail::require(f.domain() == Domain::Primal, ErrorCode::DomainMismatch, "refine expects a primal function");
  detail::require(f.max_imag() <= 1e-9, ErrorCode::InvalidArgument, "refine expects a real function");
  detail::require(M >= 1.0, ErrorCode::InvalidArgument, "M must be at least 1");
  detail::require(epsilon > 0.0 && epsilon <= 0.25, ErrorCode::InvalidArgument, "epsilon must lie in (0, 1/4]");
  const auto& g = f.group();
  auto fr = detail::real_part(f);
  auto fhat = dft(fr);
  const double anorm = algebra_norm(fr);
  detail::require(anorm <= M + 1e-9, ErrorCode::InvalidArgument, "||f||_A exceeds M");
  const double dist0 = distance_to_integers(fr);
  detail::require(dist0 < 0.25, ErrorCode::InvalidArgument, "d(f, Z) must be below 1/4");

  const double d0 = detail::effective_dimension(S);
  BourgainSystem current = S.dimension() < d0 ? S.recertified(d0) : S;
  if (!regularity_at(current, 1.0).regular) {
    throw Error(ErrorCode::NonRegularInput, "input system is not regular");
  }

  RefinementCertificate cert;
  cert.epsilon = epsilon;
  cert.M = M;
  cert.input_dimension = d0;
  cert.algebra_norm = anorm;
  cert.iteration_budget = static_cast<std::size_t>(std::ceil(16.0 * M * M / (epsilon * epsilon)));

  const double eps2 = epsilon * epsilon;
  const double small_spec = eps2 / (64.0 * M * M);
  const double near_one = 1.0 - eps2 / (32.0 * M * M);

  const SystemMeasure beta_base = beta_measure(current, 1.0);
  cert.psi_sup_before = sup_norm(detail::real_part(psi_apply(beta_base, fr)));

  std::vector<char> used(g.size(), 0);  // union of the Gamma^{(j)}
  std::size_t j = 0;
  while (true) {
    detail::BetaCache cache(current);
    const auto& beta1 = cache.at(1.0);
    auto residual = fr - detail::real_part(psi_apply(beta1, fr));
    const double dj = current.dimension();
    double rho_min = epsilon / (160.0 * dj * M);
    auto probes = detail::regular_probes(current, rho_min, probe_count);
    auto avg = detail::avg_bound_sweep(residual, cache, probes, eps2 / 4.0, rho_min);

    bool formal = false;
    if (avg.passes()) {
      if (j > 0) {
        cert.final_avg = avg;
        break;
      }
      formal = true;
    }
    if (j >= cert.iteration_budget) {
      throw Error(ErrorCode::IterationBudgetExceeded,
                  "refinement exceeded " + std::to_string(cert.iteration_budget) + " iterations");
    }
    detail::require(!probes.empty(), ErrorCode::NotFound, "no regular probe scale");

    RefinementStep step;
    step.index = j;
    step.formal = formal;
    step.rho = formal ? probes.back() : avg.witness_rho;
    step.x0 = avg.witness_x0;
    step.lhs = avg.max_value;
    const auto& beta_rho = cache.at(step.rho);

    // Weighted mass W(gamma0) = sum_gamma w(gamma) b(gamma0 - gamma) as a convolution on the dual index space.
    auto w = GroupFunction::zeros(g);
    auto b = GroupFunction::zeros(g);
    for (Index chi = 0; chi < g.size(); ++chi) {
      w[chi] = std::abs(fhat[chi]) * std::abs(1.0 - beta1.beta_hat[chi]);
      b[chi] = std::abs(beta_rho.beta_hat[chi]);
    }
    auto W = convolve(w, b).real_values();
    for (auto& v : W) v *= static_cast<double>(g.size());
    if (formal) {
      step.gamma0 = 0;
    } else {
      double best = *std::max_element(W.begin(), W.end());
      for (Index chi = 0; chi < g.size(); ++chi) {
        if (W[chi] >= best - 1e-12 * std::max(1.0, best)) {
          step.gamma0 = chi;
          break;
        }
      }
    }
    step.weighted_mass = W[step.gamma0];
    step.weighted_mass_bound = eps2 / (8.0 * M);

    auto spec_rho = spec(beta_rho.beta, std::min(small_spec, 1.0)).members;
    std::vector<char> near1(g.size(), 0);
    for (auto chi : spec(beta1.beta, near_one).members) near1[chi] = 1;
    for (auto chi : spec_rho) {
      Index shifted = g.add(step.gamma0, chi);
      if (!near1[shifted]) step.gamma_set.push_back(shifted);
    }
    std::sort(step.gamma_set.begin(), step.gamma_set.end());
    for (auto chi : step.gamma_set) {
      step.l1_mass += std::abs(fhat[chi]);
      if (used[chi]) cert.disjoint = false;
      used[chi] = 1;
    }
    cert.gamma_mass_total += step.l1_mass;
    step.l1_mass_bound = eps2 / (16.0 * M);

    step.kappa = std::ldexp(1.0, -17) * eps2 * eps2 / (dj * std::pow(M, 4));
    step.kappa_prime = small_spec;
    auto shrunk = dilate(current, step.kappa * step.rho);
    auto joined = join(shrunk, bohr_system(g, {step.gamma0}, step.kappa_prime));
    auto recert = joined.recertified(4.0 * (d0 + 3.0 * static_cast<double>(j + 1)));
    auto reg = regular_dilate_search(recert);
    step.lambda = reg.lambda;
    current = reg.system;
    step.dimension = current.dimension();
    step.size = current.size();

    auto next_beta1 = beta_measure(current, 1.0);
    step.to_sat = true;
    for (auto chi : spec_rho) {
      Index shifted = g.add(step.gamma0, chi);
      if (std::abs(next_beta1.beta_hat[shifted]) < near_one - 1e-12) {
        step.to_sat = false;
        break;
      }
    }
    cert.to_sat = cert.to_sat && step.to_sat;
    cert.steps.push_back(std::move(step));
    ++j;
  }

  cert.iterations = j;
  auto beta_prime = beta_measure(current, 1.0);
  auto psi_final = detail::real_part(psi_apply(beta_prime, fr));
  cert.psi_sup_after = sup_norm(psi_final);
  cert.distance_before = dist0;
  cert.distance_after = distance_to_integers(psi_final);

  cert.dim_value = current.dimension();
  cert.dim_bound = 4.0 * d0 + 64.0 * M * M / eps2;

  cert.size_ratio = static_cast<double>(current.size()) / static_cast<double>(S.size());
  double scale = d0 * std::pow(M, 4) / (eps2 * eps2) * std::log(d0 * M / epsilon);
  cert.size_fitted_C = cert.size_ratio >= 1.0 ? 0.0 : -std::log(cert.size_ratio) / scale;

  auto smoothed = convolve(beta_base.beta, beta_prime.beta);
  cert.smoothing_l1 = l1_norm(smoothed - beta_base.beta);
  cert.smoothing_bound = epsilon / M;
  double support_level = epsilon / (20.0 * d0 * M);
  cert.smoothing_support = true;
  for (auto x : current.level(2.0)) {
    if (!S.contains(x, support_level)) {
      cert.smoothing_support = false;
      break;
    }
  }
  return {current, cert};
}

}  // namespace cosetring
