#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cosetring/bourgain.hpp"
#include "cosetring/spectral.hpp"

namespace cosetring {

inline constexpr double kDefaultEnumerationBudget = 1e7;
inline constexpr std::size_t kDefaultMCap = 6;

struct FreimanOutput {
  BourgainSystem system;
  double lambda = 1.0;
  std::vector<Index> gamma;       // Spec_{1/4 sqrt K}(1_A)
  std::vector<Index> chang;       // dissociated Lambda with Gamma within <Lambda>
  bool trivial_substituted = false;  // Lambda was empty and the trivial character stands in
  double K = 1.0;
  double alpha = 1.0;
  double sup_psi = 0.0;           // ||psi_S 1_A||_inf
  double psi_bound = 0.0;         // 1 / 2K
  bool containment_ok = false;    // X_4 within 2A - 2A
  std::vector<Index> containment_failures;
  double gamma_bound = 0.0;       // 16K / alpha
  double chang_bound = 0.0;       // 32 K ln(1/alpha)
  bool chang_bound_exceeded = false;

  bool psi_ok() const { return sup_psi >= psi_bound - 1e-9; }
  bool gamma_ok() const { return static_cast<double>(gamma.size()) <= gamma_bound + 1e-9; }
  bool all_ok() const { return containment_ok && psi_ok() && gamma_ok(); }
};

/// Dense Bogolyubov-Chang construction: S = lambda Bohr_{1/20k}(Lambda) for a
/// Chang cover Lambda of the large spectrum of 1_A, with lambda from the
/// regular dilate search.
inline FreimanOutput bogolyubov_chang(const FiniteAbelianGroup& g, std::vector<Index> A,
                                      std::size_t cap = kDefaultDissociationCap) {
  std::sort(A.begin(), A.end());
  A.erase(std::unique(A.begin(), A.end()), A.end());
  detail::require(!A.empty(), ErrorCode::InvalidArgument, "A must be nonempty");
  FreimanOutput out;
  out.alpha = static_cast<double>(A.size()) / static_cast<double>(g.size());
  out.K = doubling_constant(g, A);
  auto ind = GroupFunction::indicator(g, A);
  out.gamma = spec(ind, 1.0 / (4.0 * std::sqrt(out.K))).members;
  if (out.gamma.empty()) throw Error(ErrorCode::EmptySpectrum, "large spectrum of 1_A is empty");
  out.gamma_bound = 16.0 * out.K / out.alpha;

  auto cover = chang_cover(g, out.gamma, out.alpha, out.K, cap);
  out.chang = cover.lambda;
  out.chang_bound = cover.size_bound;
  out.chang_bound_exceeded = cover.size_bound_exceeded;
  std::vector<Index> chars = out.chang;
  if (chars.empty()) {
    chars.push_back(0);
    out.trivial_substituted = true;
  }
  const double k = static_cast<double>(chars.size());
  auto reg = regular_dilate_search(bohr_system(g, chars, 1.0 / (20.0 * k)));
  out.system = reg.system;
  out.lambda = reg.lambda;

  auto two_a = sumset(g, A, A);
  auto diff = sumset(g, two_a, negated(g, two_a));
  std::vector<char> in_diff(g.size(), 0);
  for (auto x : diff) in_diff[x] = 1;
  out.containment_ok = true;
  for (auto x : out.system.level(kMaxLevel)) {
    if (!in_diff[x]) {
      out.containment_ok = false;
      if (out.containment_failures.size() < 8) out.containment_failures.push_back(x);
    }
  }

  out.sup_psi = sup_norm(psi_apply(out.system, ind));
  out.psi_bound = 1.0 / (2.0 * out.K);
  return out;
}

struct ConnectednessVerdict {
  std::size_t m = 0;
  bool connected = true;
  bool vacuous = false;  // |A| < m
  std::uint64_t subsets = 0;
  std::uint64_t non_dissociated = 0;
  std::uint64_t spanned = 0;
  /// Not connected: a dissociated m-subset whose span meets A only in itself.
  std::vector<Index> refuting_subset;
  /// Connected: the first m-subset together with the reason it qualifies.
  std::vector<Index> example_subset;
  std::vector<int> example_relation;  // nontrivial signs with sum = 0, if not dissociated
  std::optional<Index> example_extra;  // x in A \ A' inside <A'>, if dissociated
};

namespace detail {

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// Depth-first walk over m-subsets in lexicographic order. The span of the
// chosen prefix is kept incrementally; once a chosen element already lies in
// it, every completion is non-dissociated and is counted without descending.
class ConnectednessSearch {
 public:
  ConnectednessSearch(const FiniteAbelianGroup& g, const std::vector<Index>& A, std::size_t m)
      : g_(g), A_(A), m_(m), reached_(g.size(), 0), chosen_(g.size(), 0) {}

  ConnectednessVerdict run() {
    verdict_.m = m_;
    reached_[0] = 1;
    std::vector<Index> members{0};
    walk(0, members);
    return verdict_;
  }

 private:
  bool walk(std::size_t start, const std::vector<Index>& members) {
    const std::size_t depth = prefix_.size();
    const std::size_t n = A_.size();
    for (std::size_t i = start; i + (m_ - depth) <= n; ++i) {
      Index a = A_[i];
      if (reached_[a]) {
        auto count = static_cast<std::uint64_t>(std::llround(binomial(n - i - 1, m_ - depth - 1)));
        verdict_.subsets += count;
        verdict_.non_dissociated += count;
        continue;
      }
      std::vector<Index> next = members;
      std::vector<Index> added;
      for (Index s : members) {
        for (Index y : {g_.add(s, a), g_.sub(s, a)}) {
          if (!reached_[y]) {
            reached_[y] = 1;
            added.push_back(y);
            next.push_back(y);
          }
        }
      }
      prefix_.push_back(a);
      chosen_[a] = 1;
      bool stop = false;
      if (depth + 1 == m_) {
        ++verdict_.subsets;
        bool extra = false;
        for (Index x : A_) {
          if (!chosen_[x] && reached_[x]) {
            extra = true;
            break;
          }
        }
        if (extra) {
          ++verdict_.spanned;
        } else {
          verdict_.connected = false;
          verdict_.refuting_subset = prefix_;
          stop = true;
        }
      } else {
        stop = walk(i + 1, next);
      }
      chosen_[a] = 0;
      prefix_.pop_back();
      for (Index y : added) reached_[y] = 0;
      if (stop) return true;
    }
    return false;
  }

  const FiniteAbelianGroup& g_;
  const std::vector<Index>& A_;
  std::size_t m_;
  std::vector<char> reached_;
  std::vector<char> chosen_;
  std::vector<Index> prefix_;
  ConnectednessVerdict verdict_;
};

}  // namespace detail

/// Exhaustive test of m-arithmetic connectedness. The first refuting subset
/// in lexicographic order (of sorted A) is reported.
inline ConnectednessVerdict is_arithmetically_connected(const FiniteAbelianGroup& g, std::vector<Index> A,
                                                        std::size_t m, double budget = kDefaultEnumerationBudget) {
  std::sort(A.begin(), A.end());
  A.erase(std::unique(A.begin(), A.end()), A.end());
  detail::require(m >= 1, ErrorCode::InvalidArgument, "m must be at least 1");
  detail::require(A.empty() || A.front() != 0, ErrorCode::InvalidArgument, "A must not contain 0");
  if (A.size() < m) {
    ConnectednessVerdict v;
    v.m = m;
    v.vacuous = true;
    return v;
  }
  double cost = detail::binomial(A.size(), m) * std::pow(3.0, static_cast<double>(m));
  if (cost > budget) {
    throw Error(ErrorCode::BudgetExceeded, "C(|A|, m) 3^m = " + std::to_string(cost) + " exceeds the budget");
  }
  auto v = detail::ConnectednessSearch(g, A, m).run();
  if (v.connected) {
    v.example_subset.assign(A.begin(), A.begin() + static_cast<std::ptrdiff_t>(m));
    auto d = is_dissociated(g, v.example_subset, std::max<std::size_t>(m, kDefaultDissociationCap));
    if (!d.dissociated) {
      v.example_relation = d.witness;
    } else {
      auto sp = span(g, v.example_subset, std::max<std::size_t>(m, kDefaultDissociationCap));
      for (Index x : A) {
        bool chosen = std::binary_search(v.example_subset.begin(), v.example_subset.end(), x);
        if (!chosen && std::binary_search(sp.begin(), sp.end(), x)) {
          v.example_extra = x;
          break;
        }
      }
    }
  }
  return v;
}

/// (6 m^2 3^m)^{-2}: the pigeonhole density 1/(6 m^2 3^m) of solutions to a
/// relation with at least three nonzero coefficients, squared by the
/// Holder step that passes to the fourth moment of 1_A^.
inline double quadruple_constant(std::size_t m) {
  double c = 1.0 / (6.0 * static_cast<double>(m * m) * std::pow(3.0, static_cast<double>(m)));
  return c * c;
}

struct QuadrupleReport {
  std::size_t m = 0;
  bool precondition_met = false;
  ConnectednessVerdict verdict;
  std::uint64_t energy = 0;
  double fourier_energy = 0.0;
  double fourier_relative_error = 0.0;
  double c_m = 0.0;
  double bound = 0.0;  // c_m |A|^3
  double ratio = 0.0;  // energy / |A|^3
  bool holds() const { return precondition_met && static_cast<double>(energy) >= bound; }
};

/// Energy of an m-connected set against c_m |A|^3. Refuses (precondition_met =
/// false) when A is not m-connected.
inline QuadrupleReport quadruple_lower_bound_check(const FiniteAbelianGroup& g, std::vector<Index> A, std::size_t m,
                                                   double budget = kDefaultEnumerationBudget) {
  std::sort(A.begin(), A.end());
  A.erase(std::unique(A.begin(), A.end()), A.end());
  QuadrupleReport rep;
  rep.m = m;
  rep.verdict = is_arithmetically_connected(g, A, m, budget);
  rep.precondition_met = rep.verdict.connected;
  rep.energy = additive_energy(g, A);
  rep.fourier_energy = fourier_energy(g, A);
  rep.fourier_relative_error =
      rep.energy == 0 ? std::abs(rep.fourier_energy)
                      : std::abs(rep.fourier_energy - static_cast<double>(rep.energy)) / static_cast<double>(rep.energy);
  rep.c_m = quadruple_constant(m);
  double n = static_cast<double>(A.size());
  rep.bound = rep.c_m * n * n * n;
  rep.ratio = n > 0 ? static_cast<double>(rep.energy) / (n * n * n) : 0.0;
  return rep;
}

struct ConcentrationConfig {
  std::size_t m_cap = kDefaultMCap;
  double budget = kDefaultEnumerationBudget;
  double distance_threshold = 0.0;  // 0 selects 1/(8M)
  std::size_t dissociation_cap = kDefaultDissociationCap;
};

struct ConcentrationReport {
  double M = 0.0;
  double algebra_norm = 0.0;
  double distance = 0.0;
  std::size_t support_size = 0;
  bool full_support = false;
  Index translation = 0;
  std::size_t m_requested = 0;
  std::size_t m = 0;
  std::optional<ConnectednessVerdict> verdict;
  bool dense_path = false;

  double K = 1.0;
  double alpha = 1.0;
  double sup_psi_indicator = 0.0;
  double sup_psi_square = 0.0;

  double delta = 0.0;  // max_x |E_y f(y)^2 beta_1(x - y)|
  Index x_star = 0;
  Index gamma = 0;
  double gamma_value = 0.0;  // |E_y f(y) beta_1(y - x*) gamma(y)|
  double gamma_bound = 0.0;  // delta / M
  double dilation = 0.0;     // delta / (80 d M^2)
  double kappa = 0.0;        // delta / (8 M^2)
  double lambda = 1.0;
  double dimension = 0.0;
  double density = 0.0;
  double sup_psi = 0.0;        // ||psi_{S'} f||_inf
  double sup_psi_bound = 0.0;  // delta / 4M

  bool gamma_ok() const { return gamma_value >= gamma_bound - 1e-9; }
  bool sup_ok() const { return sup_psi >= sup_psi_bound - 1e-9; }
};

struct ConcentrationResult {
  BourgainSystem system;
  ConcentrationReport report;
};

namespace detail {

// Among t outside A, the one minimising min(A - t), smallest t on ties.
inline Index avoiding_translation(const FiniteAbelianGroup& g, const std::vector<Index>& A) {
  std::vector<char> in(g.size(), 0);
  for (auto a : A) in[a] = 1;
  Index best_t = 0;
  Index best_min = g.size();
  for (Index t = 0; t < g.size(); ++t) {
    if (in[t]) continue;
    Index mn = g.size();
    for (auto a : A) mn = std::min(mn, g.sub(a, t));
    if (mn < best_min) {
      best_min = mn;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace detail

/// A regular system on which psi f is large, built from g = f^2.
///
/// A = Supp(g_Z) is translated off 0 and tested for m-connectedness; the
/// system for g comes from the dense Bogolyubov-Chang construction on A (or
/// the whole-group system when A = G), and is then corrected to
///   S' = lambda ((delta / 80 d M^2) S ^ Bohr_{delta / 8M^2}({gamma})).
inline ConcentrationResult concentration_system(const GroupFunction& f, double M,
                                                const ConcentrationConfig& cfg = {}) {
  detail::require(f.domain() == Domain::Primal, ErrorCode::DomainMismatch, "expects a primal function");
  detail::require(f.max_imag() <= 1e-9, ErrorCode::InvalidArgument, "expects a real function");
  detail::require(M >= 0.5, ErrorCode::InvalidArgument, "M must be at least 1/2");
  const auto& g = f.group();
  ConcentrationReport rep;
  rep.M = M;
  rep.algebra_norm = algebra_norm(f);
  detail::require(rep.algebra_norm <= M + 1e-9, ErrorCode::InvalidArgument, "||f||_A exceeds M");
  rep.distance = distance_to_integers(f);
  double threshold = cfg.distance_threshold > 0.0 ? cfg.distance_threshold : 1.0 / (8.0 * M);
  detail::require(rep.distance < threshold, ErrorCode::InvalidArgument, "d(f, Z) above the configured threshold");

  auto fr = f.map([](Complex z) { return Complex(z.real(), 0.0); });
  auto sq = fr.map([](Complex z) { return Complex(z.real() * z.real(), 0.0); });
  auto sq_int = round_to_integers(sq).rounded;
  std::vector<Index> A;
  for (Index x = 0; x < g.size(); ++x) {
    if (sq_int[x].real() != 0.0) A.push_back(x);
  }
  if (A.empty()) throw Error(ErrorCode::ZeroSupport, "f_Z is identically zero");
  rep.support_size = A.size();
  rep.full_support = A.size() == g.size();

  BourgainSystem S;
  if (rep.full_support) {
    S = subgroup_system(Subgroup::whole(g));
  } else {
    rep.translation = detail::avoiding_translation(g, A);
    std::vector<Index> shifted;
    for (auto a : A) shifted.push_back(g.sub(a, rep.translation));
    std::sort(shifted.begin(), shifted.end());

    rep.m_requested = std::min<std::size_t>(static_cast<std::size_t>(std::ceil(50.0 * std::pow(M, 4))), cfg.m_cap);
    rep.m = std::max<std::size_t>(rep.m_requested, 1);
    while (rep.m > 1 && detail::binomial(shifted.size(), rep.m) * std::pow(3.0, static_cast<double>(rep.m)) > cfg.budget) {
      --rep.m;
    }
    auto verdict = is_arithmetically_connected(g, shifted, rep.m, cfg.budget);
    rep.verdict = verdict;
    if (!verdict.connected) {
      throw NotConnectedError(verdict.refuting_subset,
                              "support is not " + std::to_string(rep.m) + "-arithmetically connected");
    }
    auto fo = bogolyubov_chang(g, shifted, cfg.dissociation_cap);
    rep.dense_path = true;
    rep.K = fo.K;
    rep.alpha = fo.alpha;
    rep.sup_psi_indicator = fo.sup_psi;
    S = fo.system;
  }

  auto beta = beta_measure(S, 1.0);
  auto smoothed_sq = convolve(sq, beta.beta).real_values();
  rep.sup_psi_square = 0.0;
  for (Index x = 0; x < g.size(); ++x) {
    if (std::abs(smoothed_sq[x]) > rep.delta * (1.0 + 1e-12)) {
      rep.delta = std::abs(smoothed_sq[x]);
      rep.x_star = x;
    }
  }
  rep.sup_psi_square = rep.delta;

  // E_y h(y) gamma(y) = h^(-gamma) with h(y) = f(y) beta_1(y - x*).
  auto h = GroupFunction::zeros(g);
  for (Index y = 0; y < g.size(); ++y) h[y] = fr[y] * beta.beta[g.sub(y, rep.x_star)];
  auto H = dft(h);
  double best = -1.0;
  for (Index chi = 0; chi < g.size(); ++chi) {
    double v = std::abs(H[g.neg(chi)]);
    if (v > best * (1.0 + 1e-12) + 1e-300) {
      best = v;
      rep.gamma = chi;
    }
  }
  rep.gamma_value = best;
  rep.gamma_bound = rep.delta / M;

  const double d = std::max(S.dimension(), 2.0);
  rep.dilation = std::min(1.0, rep.delta / (80.0 * d * M * M));
  rep.kappa = rep.delta / (8.0 * M * M);
  auto joined = join(dilate(S, rep.dilation), bohr_system(g, {rep.gamma}, rep.kappa));
  auto reg = regular_dilate_search(joined);
  rep.lambda = reg.lambda;
  rep.dimension = reg.system.dimension();
  rep.density = reg.system.density();
  rep.sup_psi = sup_norm(psi_apply(reg.system, fr));
  rep.sup_psi_bound = rep.delta / (4.0 * M);
  return {reg.system, rep};
}

}  // namespace cosetring
