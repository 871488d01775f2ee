#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cosetring/function.hpp"
#include "cosetring/spectral.hpp"
#include "cosetring/subgroup.hpp"

namespace cosetring {

inline constexpr double kMaxLevel = 4.0;
inline constexpr double kInfiniteRadius = std::numeric_limits<double>::infinity();

enum class SystemKind { Subgroup, Bohr, Dilate, Join, Freiman, Explicit };

inline const char* to_string(SystemKind k) {
  switch (k) {
    case SystemKind::Subgroup: return "subgroup";
    case SystemKind::Bohr: return "bohr";
    case SystemKind::Dilate: return "dilate";
    case SystemKind::Join: return "join";
    case SystemKind::Freiman: return "freiman";
    case SystemKind::Explicit: return "explicit";
  }
  return "unknown";
}

/// How a system was built; kept for serialization and certificates.
struct Recipe {
  SystemKind kind = SystemKind::Explicit;
  std::vector<Index> generators;                   // subgroup
  std::vector<Index> characters;                   // bohr
  std::vector<double> kappas;                      // bohr
  double lambda = 1.0;                             // dilate
  std::vector<std::pair<Index, Index>> mapping;    // freiman: x -> phi(x)
  std::vector<double> radius;                      // explicit
  std::vector<std::shared_ptr<const Recipe>> children;
};

/// A Bourgain system (X_rho), rho in [0, 4], with a dimension certificate.
///
/// Every system is stored through its radius function r : G -> [0, inf],
/// with X_rho = {x : r(x) <= rho}. Subgroup systems have r = 0 on H and inf
/// elsewhere, Bohr systems r(x) = max_j |1 - gamma_j(x)| / kappa_j, dilation
/// divides r by lambda and joins take the pointwise maximum. The level sets
/// are therefore available at every rho, not just on a grid.
class BourgainSystem {
 public:
  BourgainSystem() = default;

  const FiniteAbelianGroup& group() const { return group_; }
  double dimension() const { return dim_; }
  const std::vector<double>& radius() const { return radius_; }
  const Recipe& recipe() const { return *recipe_; }
  std::shared_ptr<const Recipe> recipe_ptr() const { return recipe_; }

  bool contains(Index x, double rho) const { return radius_[x] <= rho; }

  /// X_rho as a sorted element list.
  std::vector<Index> level(double rho) const {
    check_level(rho);
    std::vector<Index> out;
    for (Index x = 0; x < radius_.size(); ++x) {
      if (radius_[x] <= rho) out.push_back(x);
    }
    return out;
  }

  /// |X_rho|; also usable slightly outside [0, 4] for regularity probes.
  std::size_t level_size(double rho) const {
    return static_cast<std::size_t>(std::upper_bound(sorted_.begin(), sorted_.end(), rho) - sorted_.begin());
  }

  /// |{x : r(x) < rho}|, the left limit of rho -> |X_rho|.
  std::size_t level_size_below(double rho) const {
    return static_cast<std::size_t>(std::lower_bound(sorted_.begin(), sorted_.end(), rho) - sorted_.begin());
  }

  const std::vector<double>& sorted_radii() const { return sorted_; }

  /// |S| = |X_1|.
  std::size_t size() const { return level_size(1.0); }
  double density() const { return static_cast<double>(size()) / static_cast<double>(group_.size()); }

  /// Same level sets under a different dimension certificate. The new
  /// certificate is checked against the doubling axiom.
  BourgainSystem recertified(double dim) const {
    BourgainSystem out = *this;
    out.dim_ = dim;
    out.validate_doubling();
    return out;
  }

  /// Supremum over rho in (0, 1] of |X_{2 rho}| / |X_rho|, with the rho attaining it.
  std::pair<double, double> max_doubling_ratio() const {
    // Both counts are right-continuous step functions of rho; between
    // consecutive breakpoints of r and r/2 the ratio is constant.
    std::vector<double> probes{1e-300};
    for (double r : sorted_) {
      if (!std::isfinite(r)) break;
      if (r > 0.0 && r <= 1.0) probes.push_back(r);
      if (r > 0.0 && r / 2.0 <= 1.0) probes.push_back(r / 2.0);
    }
    probes.push_back(1.0);
    double best = 0.0;
    double at = 1.0;
    for (double rho : probes) {
      auto small = level_size(rho);
      auto big = level_size(2.0 * rho);
      double ratio = small == 0 ? (big == 0 ? 1.0 : kInfiniteRadius)
                                : static_cast<double>(big) / static_cast<double>(small);
      if (ratio > best) {
        best = ratio;
        at = rho;
      }
    }
    return {best, at};
  }

  // Constructors ----------------------------------------------------------

  static BourgainSystem from_radius(FiniteAbelianGroup g, std::vector<double> radius, double dim,
                                    std::shared_ptr<const Recipe> recipe = nullptr) {
    detail::require(radius.size() == g.size(), ErrorCode::InvalidArgument, "radius length mismatch");
    detail::require(dim >= 0.0, ErrorCode::InvalidArgument, "dimension must be nonnegative");
    BourgainSystem s;
    s.group_ = std::move(g);
    s.radius_ = std::move(radius);
    s.sorted_ = s.radius_;
    std::sort(s.sorted_.begin(), s.sorted_.end());
    s.dim_ = dim;
    if (!recipe) {
      auto r = std::make_shared<Recipe>();
      r->kind = SystemKind::Explicit;
      r->radius = s.radius_;
      recipe = r;
    }
    s.recipe_ = std::move(recipe);
    s.validate_doubling();
    return s;
  }

 private:
  void check_level(double rho) const {
    detail::require(rho >= 0.0 && rho <= kMaxLevel, ErrorCode::InvalidArgument,
                    "level index must lie in [0, 4]");
  }

  void validate_doubling() const {
    auto [ratio, at] = max_doubling_ratio();
    if (ratio > std::exp2(dim_) * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "doubling ratio " << ratio << " at rho=" << at << " exceeds 2^d with d=" << dim_;
      throw Error(ErrorCode::CertificateViolation, os.str());
    }
  }

  FiniteAbelianGroup group_;
  std::vector<double> radius_;
  std::vector<double> sorted_;
  double dim_ = 0.0;
  std::shared_ptr<const Recipe> recipe_;
};

/// Every X_rho equal to H; dimension 0.
inline BourgainSystem subgroup_system(const Subgroup& H) {
  const auto& g = H.group();
  std::vector<double> r(g.size(), kInfiniteRadius);
  for (auto h : H.elements()) r[h] = 0.0;
  auto recipe = std::make_shared<Recipe>();
  recipe->kind = SystemKind::Subgroup;
  recipe->generators = H.generators();
  return BourgainSystem::from_radius(g, std::move(r), 0.0, std::move(recipe));
}

/// 8^{-k} kappa_1 ... kappa_k |G|.
inline double bohr_size_lower_bound(const std::vector<double>& kappas, std::size_t group_size) {
  double b = static_cast<double>(group_size);
  for (double k : kappas) b *= k / 8.0;
  return b;
}

/// Bohr_{kappa}(Gamma): X_rho = {x : |1 - gamma_j(x)| <= kappa_j rho for all j}, d = 3k.
inline BourgainSystem bohr_system(const FiniteAbelianGroup& g, const std::vector<Index>& characters,
                                  const std::vector<double>& kappas) {
  detail::require(!characters.empty(), ErrorCode::InvalidArgument, "Bohr system needs at least one character");
  detail::require(characters.size() == kappas.size(), ErrorCode::InvalidArgument,
                  "one kappa per character required");
  std::vector<double> r(g.size(), 0.0);
  for (std::size_t j = 0; j < characters.size(); ++j) {
    detail::require(kappas[j] > 0.0, ErrorCode::InvalidArgument, "kappa must be positive");
    detail::require(characters[j] < g.size(), ErrorCode::InvalidArgument, "character out of range");
    auto ph = g.phases(characters[j]);
    for (Index x = 0; x < g.size(); ++x) r[x] = std::max(r[x], g.chord(ph[x]) / kappas[j]);
  }
  auto recipe = std::make_shared<Recipe>();
  recipe->kind = SystemKind::Bohr;
  recipe->characters = characters;
  recipe->kappas = kappas;
  auto s = BourgainSystem::from_radius(g, std::move(r), 3.0 * static_cast<double>(characters.size()),
                                       std::move(recipe));
  double bound = bohr_size_lower_bound(kappas, g.size());
  if (static_cast<double>(s.size()) < bound * (1.0 - 1e-12)) {
    throw Error(ErrorCode::CertificateViolation, "Bohr system below its size lower bound");
  }
  return s;
}

inline BourgainSystem bohr_system(const FiniteAbelianGroup& g, const std::vector<Index>& characters,
                                  double kappa) {
  return bohr_system(g, characters, std::vector<double>(characters.size(), kappa));
}

/// lambda S = (X_{lambda rho}); same dimension, |lambda S| >= (lambda/2)^d |S|.
inline BourgainSystem dilate(const BourgainSystem& S, double lambda) {
  detail::require(lambda > 0.0 && lambda <= 1.0, ErrorCode::InvalidArgument, "dilation factor must lie in (0, 1]");
  if (lambda == 1.0) return S;
  std::vector<double> r = S.radius();
  for (auto& v : r) v /= lambda;
  auto recipe = std::make_shared<Recipe>();
  recipe->kind = SystemKind::Dilate;
  recipe->lambda = lambda;
  recipe->children.push_back(S.recipe_ptr());
  auto out = BourgainSystem::from_radius(S.group(), std::move(r), S.dimension(), std::move(recipe));
  double bound = std::pow(lambda / 2.0, S.dimension()) * static_cast<double>(S.size());
  if (static_cast<double>(out.size()) < bound * (1.0 - 1e-12)) {
    throw Error(ErrorCode::CertificateViolation, "dilate below (lambda/2)^d |S|");
  }
  return out;
}

/// 2^{-3(d+d')} mu(S') |S|.
inline double join_size_lower_bound(const BourgainSystem& S, const BourgainSystem& T) {
  return std::exp2(-3.0 * (S.dimension() + T.dimension())) * T.density() * static_cast<double>(S.size());
}

/// S ^ S' = (X_rho intersect X'_rho), dimension 4(d + d').
inline BourgainSystem join(const BourgainSystem& S, const BourgainSystem& T) {
  require_same_group(S.group(), T.group());
  std::vector<double> r(S.group().size());
  for (Index x = 0; x < r.size(); ++x) r[x] = std::max(S.radius()[x], T.radius()[x]);
  auto recipe = std::make_shared<Recipe>();
  recipe->kind = SystemKind::Join;
  recipe->children = {S.recipe_ptr(), T.recipe_ptr()};
  auto out = BourgainSystem::from_radius(S.group(), std::move(r), 4.0 * (S.dimension() + T.dimension()),
                                         std::move(recipe));
  if (static_cast<double>(out.size()) < join_size_lower_bound(S, T) * (1.0 - 1e-12)) {
    throw Error(ErrorCode::CertificateViolation, "join below its size lower bound");
  }
  return out;
}

struct AxiomFailure {
  std::string axiom;
  double rho = 0.0;
  double rho2 = 0.0;
  std::vector<Index> elements;
  std::string detail;
};

struct CoveringCheck {
  double rho = 0.0;
  std::size_t count = 0;
  double bound = 0.0;
  bool covers = false;
  bool ok() const { return covers && static_cast<double>(count) <= bound; }
};

struct AxiomReport {
  bool nesting = true;
  bool zero = true;
  bool symmetry = true;
  bool addition = true;
  bool doubling = true;
  double max_doubling_ratio = 0.0;
  double doubling_bound = 0.0;
  std::vector<AxiomFailure> failures;
  std::vector<CoveringCheck> covering;  // X_{2rho} by translates of X_{rho/2}
  std::vector<CoveringCheck> entropy;   // G by translates of X_rho

  bool axioms_pass() const { return nesting && zero && symmetry && addition && doubling; }
  bool covering_pass() const {
    return std::all_of(covering.begin(), covering.end(), [](const auto& c) { return c.ok(); });
  }
  bool entropy_pass() const {
    return std::all_of(entropy.begin(), entropy.end(), [](const auto& c) { return c.ok(); });
  }
  bool all_pass() const { return axioms_pass() && covering_pass() && entropy_pass(); }
};

namespace detail {

// Greedy maximal packing: scan candidates in index order and keep those whose
// translate of `ball` misses every translate kept so far.
inline std::vector<Index> greedy_packing(const FiniteAbelianGroup& g, const std::vector<Index>& candidates,
                                         const std::vector<Index>& ball) {
  std::vector<char> occupied(g.size(), 0);
  std::vector<Index> centres;
  for (auto y : candidates) {
    bool free = true;
    for (auto t : ball) {
      if (occupied[g.add(y, t)]) {
        free = false;
        break;
      }
    }
    if (!free) continue;
    centres.push_back(y);
    for (auto t : ball) occupied[g.add(y, t)] = 1;
  }
  return centres;
}

inline bool covered_by(const FiniteAbelianGroup& g, const std::vector<Index>& target,
                       const std::vector<Index>& centres, const std::vector<Index>& ball) {
  std::vector<char> hit(g.size(), 0);
  for (auto c : centres) {
    for (auto t : ball) hit[g.add(c, t)] = 1;
  }
  return std::all_of(target.begin(), target.end(), [&](Index x) { return hit[x] != 0; });
}

}  // namespace detail

/// Checks BS1-BS5 and the covering and metric-entropy lemmas.
///
/// BS2-BS5 are decided exactly for the continuum family through the radius
/// function: symmetry is r(-x) = r(x), addition is subadditivity of r on
/// pairs with r(x) + r(y) <= 4, and doubling is evaluated at every
/// breakpoint of rho -> |X_rho| and rho -> |X_{2 rho}|. Nesting is checked on
/// the dyadic grid 2^-10, ..., 4.
inline AxiomReport check_axioms(const BourgainSystem& S) {
  const auto& g = S.group();
  const auto& r = S.radius();
  AxiomReport rep;

  std::vector<double> grid;
  for (int e = -10; e <= 2; ++e) grid.push_back(std::ldexp(1.0, e));
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    auto small = S.level(grid[i]);
    std::vector<char> big(g.size(), 0);
    for (auto x : S.level(grid[i + 1])) big[x] = 1;
    for (auto x : small) {
      if (!big[x]) {
        rep.nesting = false;
        rep.failures.push_back({"BS1", grid[i], grid[i + 1], {x}, "element leaves a larger level"});
        break;
      }
    }
  }

  if (!(r[0] <= 0.0)) {
    rep.zero = false;
    rep.failures.push_back({"BS2", 0.0, 0.0, {0}, "0 is not in X_0"});
  }

  for (Index x = 0; x < g.size(); ++x) {
    Index nx = g.neg(x);
    if (r[nx] != r[x]) {
      rep.symmetry = false;
      double rho = std::min(r[x], r[nx]);
      Index inside = r[x] <= r[nx] ? x : nx;
      rep.failures.push_back({"BS3", rho, 0.0, {inside, g.neg(inside)}, "negation leaves X_rho"});
      break;
    }
  }

  {
    std::vector<Index> order;
    for (Index x = 0; x < g.size(); ++x) {
      if (r[x] <= kMaxLevel) order.push_back(x);
    }
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return r[a] < r[b] || (r[a] == r[b] && a < b); });
    bool done = false;
    for (std::size_t i = 0; i < order.size() && !done; ++i) {
      Index x = order[i];
      for (std::size_t j = 0; j < order.size(); ++j) {
        Index y = order[j];
        double s = r[x] + r[y];
        if (s > kMaxLevel) break;
        double lhs = r[g.add(x, y)];
        if (lhs > s * (1.0 + 1e-12) + 1e-15) {
          rep.addition = false;
          rep.failures.push_back({"BS4", r[x], r[y], {x, y, g.add(x, y)}, "x + y leaves X_{rho + rho'}"});
          done = true;
          break;
        }
      }
    }
  }

  auto [ratio, at] = S.max_doubling_ratio();
  rep.max_doubling_ratio = ratio;
  rep.doubling_bound = std::exp2(S.dimension());
  if (ratio > rep.doubling_bound * (1.0 + 1e-12)) {
    rep.doubling = false;
    rep.failures.push_back({"BS5", at, 2.0 * at, {}, "|X_{2rho}| > 2^d |X_rho|"});
  }

  for (double rho : {0.5, 0.25, 0.125}) {
    auto target = S.level(2.0 * rho);
    auto centres = detail::greedy_packing(g, target, S.level(rho / 4.0));
    CoveringCheck c;
    c.rho = rho;
    c.count = centres.size();
    c.bound = std::exp2(4.0 * S.dimension());
    c.covers = detail::covered_by(g, target, centres, S.level(rho / 2.0));
    rep.covering.push_back(c);
  }

  std::vector<Index> everything(g.size());
  for (Index x = 0; x < g.size(); ++x) everything[x] = x;
  for (double rho : {1.0, 0.5, 0.25}) {
    auto centres = detail::greedy_packing(g, everything, S.level(rho / 2.0));
    CoveringCheck c;
    c.rho = rho;
    c.count = centres.size();
    c.bound = std::pow(4.0 / rho, S.dimension()) / S.density();
    c.covers = detail::covered_by(g, everything, centres, S.level(rho));
    rep.entropy.push_back(c);
  }
  return rep;
}

struct RegularityReport {
  double lambda = 1.0;  // scale at which regularity was tested
  double dimension = 0.0;
  double kappa_max = 0.0;
  std::vector<double> kappas;  // tested kappa values, grid plus jump points
  double max_ratio_violation = 0.0;
  double worst_kappa = 0.0;
  bool regular = false;
};

/// Whether the dilate (scale) S is regular:
///   1 - 10 d |k| <= |X_s| / |X_{s(1+k)}| <= 1 + 10 d |k|  for |k| <= 1/(10d).
///
/// The ratio is a step function of k, so besides the 41-point grid the test
/// visits every jump of |X_{s(1+k)}| in the window, taking the one-sided limit
/// that is worst for the inequality.
inline RegularityReport regularity_at(const BourgainSystem& S, double scale, std::size_t grid_points = 41,
                                      double tol = 1e-9) {
  RegularityReport rep;
  rep.lambda = scale;
  rep.dimension = S.dimension();
  const double d = S.dimension();
  rep.kappa_max = d > 0.0 ? std::min(1.0 / (10.0 * d), 1.0) : 1.0;
  const double kmax = rep.kappa_max;
  const auto base = static_cast<double>(S.level_size(scale));

  auto consider = [&](double kappa, double ratio) {
    double lower = 1.0 - 10.0 * d * std::abs(kappa);
    double upper = 1.0 + 10.0 * d * std::abs(kappa);
    double v = std::max(lower - ratio, ratio - upper);
    rep.kappas.push_back(kappa);
    if (v > rep.max_ratio_violation) {
      rep.max_ratio_violation = v;
      rep.worst_kappa = kappa;
    }
  };
  auto ratio_at = [&](std::size_t denom) {
    return denom == 0 ? kInfiniteRadius : base / static_cast<double>(denom);
  };

  for (std::size_t i = 0; i < grid_points; ++i) {
    double kappa = grid_points == 1 ? 0.0 : -kmax + 2.0 * kmax * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    consider(kappa, ratio_at(S.level_size(scale * (1.0 + kappa))));
  }

  const auto& radii = S.sorted_radii();
  auto lo = std::lower_bound(radii.begin(), radii.end(), scale * (1.0 - kmax));
  auto hi = std::upper_bound(radii.begin(), radii.end(), scale * (1.0 + kmax));
  double previous = -1.0;
  for (auto it = lo; it != hi; ++it) {
    double rv = *it;
    if (rv == previous) continue;
    previous = rv;
    double kappa = rv / scale - 1.0;
    if (kappa >= 0.0) {
      // Right limit: the jump at rv is already included.
      consider(kappa, ratio_at(S.level_size(rv)));
    }
    if (kappa <= 0.0 && std::abs(kappa) < kmax) {
      // Left limit: just below rv the level loses every point of radius rv.
      consider(kappa, ratio_at(S.level_size_below(rv)));
    }
  }
  rep.regular = rep.max_ratio_violation <= tol;
  return rep;
}

struct RegularDilate {
  double lambda = 1.0;
  RegularityReport report;
  BourgainSystem system;
};

/// Scans lambda = 1/2, 1/2 + step, ..., 1 upward and returns the first
/// lambda for which lambda S is regular.
inline RegularDilate regular_dilate_search(const BourgainSystem& S, double step = 1e-3) {
  detail::require(step > 0.0, ErrorCode::InvalidArgument, "step must be positive");
  auto n = static_cast<std::size_t>(std::llround(0.5 / step));
  double best = kInfiniteRadius;
  double best_lambda = 0.5;
  for (std::size_t i = 0; i <= n; ++i) {
    double lambda = std::min(1.0, 0.5 + static_cast<double>(i) * step);
    auto rep = regularity_at(S, lambda);
    if (rep.regular) {
      return {lambda, rep, dilate(S, lambda)};
    }
    if (rep.max_ratio_violation < best) {
      best = rep.max_ratio_violation;
      best_lambda = lambda;
    }
  }
  std::ostringstream os;
  os << "no regular dilate on the grid; best violation " << best << " at lambda=" << best_lambda;
  throw Error(ErrorCode::NotFound, os.str());
}

struct SystemMeasure {
  double rho = 0.0;
  GroupFunction beta;      // primal density, E_x beta = 1
  GroupFunction beta_hat;  // real and nonnegative
};

/// beta_rho = mu * mu with mu = 1_{X_rho} |G| / |X_rho|, so E_x beta_rho = 1.
inline SystemMeasure beta_measure(const BourgainSystem& S, double rho) {
  detail::require(rho > 0.0 && rho <= 2.0, ErrorCode::InvalidArgument, "beta_rho needs rho in (0, 2]");
  auto X = S.level(rho);
  detail::require(!X.empty(), ErrorCode::EmptyLevelSet, "X_rho is empty");
  const auto& g = S.group();
  auto mu = GroupFunction::zeros(g);
  const double w = static_cast<double>(g.size()) / static_cast<double>(X.size());
  for (auto x : X) mu[x] = w;
  auto mu_hat = dft(mu);
  SystemMeasure m;
  m.rho = rho;
  m.beta_hat = hadamard(mu_hat, mu_hat);
  m.beta = inverse_dft(m.beta_hat);
  return m;
}

/// psi_S f = f * beta_1, computed as (f^ beta_1^) inverted.
inline GroupFunction psi_apply(const SystemMeasure& beta1, const GroupFunction& f) {
  require_same_group(beta1.beta.group(), f.group());
  detail::require(f.domain() == Domain::Primal, ErrorCode::DomainMismatch, "psi expects a primal function");
  return inverse_dft(hadamard(dft(f), beta1.beta_hat));
}

inline GroupFunction psi_apply(const BourgainSystem& S, const GroupFunction& f) {
  require_same_group(S.group(), f.group());
  return psi_apply(beta_measure(S, 1.0), f);
}

struct InvarianceReport {
  double kappa = 0.0;
  double dimension = 0.0;
  bool regular = false;
  std::size_t shifts = 0;  // |X_kappa|

  double l1_shift_max = 0.0;  // max_y E_x |beta_1(x + y) - beta_1(x)|
  double l1_shift_bound = 0.0;

  bool has_function = false;
  double psi_shift_max = 0.0;  // max_{x, y} |psi f(x + y) - psi f(x)|
  double psi_shift_bound = 0.0;

  struct SpecCheck {
    double delta = 0.0;
    std::size_t members = 0;
    double max_lhs = 0.0;  // max |1 - gamma(y)|
    double bound = 0.0;    // 20 kappa d / delta
  };
  std::vector<SpecCheck> spec;

  bool l1_ok() const { return l1_shift_max <= l1_shift_bound + 1e-9; }
  bool psi_ok() const { return !has_function || psi_shift_max <= psi_shift_bound + 1e-9; }
  bool spec_ok() const {
    return std::all_of(spec.begin(), spec.end(), [](const SpecCheck& c) { return c.max_lhs <= c.bound + 1e-9; });
  }
  bool all_ok() const { return l1_ok() && psi_ok() && spec_ok(); }
};

/// For every y in X_kappa checks the shift bounds on beta_1 and psi_S f and the
/// structure of Spec_delta(beta_1).
inline InvarianceReport invariance_checks(const BourgainSystem& S, double kappa,
                                          const std::optional<GroupFunction>& f = std::nullopt,
                                          const std::vector<double>& deltas = {1.0, 0.5, 0.25, 0.125}) {
  detail::require(kappa > 0.0 && kappa < 1.0, ErrorCode::InvalidArgument, "kappa must lie in (0, 1)");
  const auto& g = S.group();
  const double d = S.dimension();
  InvarianceReport rep;
  rep.kappa = kappa;
  rep.dimension = d;
  rep.regular = regularity_at(S, 1.0).regular;

  auto beta1 = beta_measure(S, 1.0);
  auto Y = S.level(kappa);
  rep.shifts = Y.size();
  const auto n = static_cast<double>(g.size());

  rep.l1_shift_bound = 20.0 * d * kappa;
  for (auto y : Y) {
    double acc = 0.0;
    for (Index x = 0; x < g.size(); ++x) acc += std::abs(beta1.beta[g.add(x, y)] - beta1.beta[x]);
    rep.l1_shift_max = std::max(rep.l1_shift_max, acc / n);
  }

  if (f) {
    rep.has_function = true;
    auto pf = psi_apply(beta1, *f);
    rep.psi_shift_bound = 20.0 * d * kappa * sup_norm(*f);
    for (auto y : Y) {
      for (Index x = 0; x < g.size(); ++x) {
        rep.psi_shift_max = std::max(rep.psi_shift_max, std::abs(pf[g.add(x, y)] - pf[x]));
      }
    }
  }

  for (double delta : deltas) {
    InvarianceReport::SpecCheck c;
    c.delta = delta;
    c.bound = 20.0 * kappa * d / delta;
    // ||beta_1||_1 = 1, so Spec_delta(beta_1) = {gamma : |beta_1^(gamma)| >= delta}.
    for (Index chi = 0; chi < g.size(); ++chi) {
      if (std::abs(beta1.beta_hat[chi]) < delta * (1.0 - 1e-12)) continue;
      ++c.members;
      auto ph = g.phases(chi);
      for (auto y : Y) c.max_lhs = std::max(c.max_lhs, g.chord(ph[y]));
    }
    rep.spec.push_back(c);
  }
  return rep;
}

/// Image of S under a map phi defined on X_4 with phi(0) = 0. Level sets are
/// relabelled and all axioms re-verified; the dimension is unchanged.
inline BourgainSystem freiman_image(const BourgainSystem& S, const FiniteAbelianGroup& target,
                                    const std::vector<std::pair<Index, Index>>& mapping) {
  std::vector<double> r(target.size(), kInfiniteRadius);
  std::vector<char> used(target.size(), 0);
  std::vector<char> mapped(S.group().size(), 0);
  for (auto [x, y] : mapping) {
    detail::require(x < S.group().size() && y < target.size(), ErrorCode::InvalidArgument, "mapping out of range");
    detail::require(!used[y], ErrorCode::InvalidArgument, "mapping is not injective");
    detail::require(x != 0 || y == 0, ErrorCode::InvalidArgument, "phi(0) must be 0");
    used[y] = 1;
    mapped[x] = 1;
    r[y] = S.radius()[x];
  }
  for (auto x : S.level(kMaxLevel)) {
    detail::require(mapped[x], ErrorCode::InvalidArgument, "mapping must be defined on all of X_4");
  }
  auto recipe = std::make_shared<Recipe>();
  recipe->kind = SystemKind::Freiman;
  recipe->mapping = mapping;
  recipe->children.push_back(S.recipe_ptr());
  auto out = BourgainSystem::from_radius(target, std::move(r), S.dimension(), std::move(recipe));
  auto rep = check_axioms(out);
  if (!rep.axioms_pass()) {
    throw Error(ErrorCode::CertificateViolation, "image is not a Bourgain system; phi is not a Freiman isomorphism");
  }
  return out;
}

}  // namespace cosetring
