#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <set>
#include <utility>
#include <vector>

#include "cosetring/function.hpp"
#include "cosetring/group.hpp"
#include "cosetring/lattice.hpp"
#include "cosetring/subgroup.hpp"

namespace cosetring {

struct FrequencyTerm {
  int sign = 1;
  IntVector omega;  // character of the finite part, in coordinates
  IntVector r;      // frequency in Z^d
};

/// A trigonometric polynomial sum_j sign_j (omega_j, r_j) on H^ x Z^d.
struct FrequencySpec {
  std::size_t d = 0;
  std::vector<std::int64_t> finite_orders;
  std::vector<FrequencyTerm> terms;

  void validate() const {
    std::set<std::pair<IntVector, IntVector>> seen;
    for (const auto& t : terms) {
      detail::require(t.sign == 1 || t.sign == -1, ErrorCode::InvalidArgument, "term sign must be +1 or -1");
      detail::require(t.omega.size() == finite_orders.size(), ErrorCode::InvalidArgument, "omega has wrong length");
      detail::require(t.r.size() == d, ErrorCode::InvalidArgument, "frequency has wrong length");
      IntVector om(t.omega);
      for (std::size_t i = 0; i < om.size(); ++i) om[i] = ((om[i] % finite_orders[i]) + finite_orders[i]) % finite_orders[i];
      detail::require(seen.insert({om, t.r}).second, ErrorCode::InvalidArgument, "terms must be distinct");
    }
  }

  std::int64_t max_frequency() const {
    std::int64_t m = 0;
    for (const auto& t : terms) {
      for (auto v : t.r) m = std::max(m, v < 0 ? -v : v);
    }
    return m;
  }
};

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return false;
  }
  return true;
}

inline std::int64_t next_prime(std::int64_t floor) {
  std::int64_t n = std::max<std::int64_t>(floor, 2);
  while (!is_prime(n)) ++n;
  return n;
}

struct ModelBuildReport {
  std::int64_t N = 0;
  GroupFunction model;  // on H x (Z/N)^d
  double norm_estimate = 0.0;  // E |model|
};

/// mu~(h, x) = sum_j sign_j omega_j(h) e(r_j . x / N) on H x (Z/N)^d.
///
/// In the self-dual coordinates of the model group each term is the
/// character with coordinates (omega_j, r_j mod N).
inline ModelBuildReport build_finite_model(const FrequencySpec& spec, std::int64_t N) {
  spec.validate();
  detail::require(is_prime(N), ErrorCode::InvalidArgument, "modulus must be prime");
  if (N <= 2 * spec.max_frequency()) {
    throw Error(ErrorCode::ModulusTooSmall, "modulus must exceed twice the largest frequency");
  }
  std::vector<std::int64_t> orders = spec.finite_orders;
  for (std::size_t i = 0; i < spec.d; ++i) orders.push_back(N);
  FiniteAbelianGroup g(orders);

  std::set<Index> chars;
  ModelBuildReport rep;
  rep.N = N;
  rep.model = GroupFunction::zeros(g);
  for (const auto& t : spec.terms) {
    IntVector c = t.omega;
    c.insert(c.end(), t.r.begin(), t.r.end());
    Index chi = g.index(c);
    if (!chars.insert(chi).second) throw Error(ErrorCode::ModulusTooSmall, "two frequencies collide modulo N");
    auto ph = g.phases(chi);
    for (Index x = 0; x < g.size(); ++x) rep.model[x] += static_cast<double>(t.sign) * g.unit_root(ph[x]);
  }
  rep.norm_estimate = l1_norm(rep.model);
  return rep;
}

struct QuadratureResult {
  double value = 0.0;
  double error_bound = 0.0;
  std::size_t resolution = 0;
};

/// Midpoint rule for E_h int_{T^d} |sum_j sign_j omega_j(h) e(r_j . theta)| d theta
/// with compensated summation. The integrand is Lipschitz with constant
/// L_i = 2 pi sum_j |r_j,i| in coordinate i, giving the bound sum_i L_i / 4R.
inline QuadratureResult norm_quadrature(const FrequencySpec& spec, std::size_t resolution) {
  spec.validate();
  detail::require(static_cast<std::int64_t>(resolution) >= 2 * spec.max_frequency() + 1, ErrorCode::InvalidArgument,
                  "resolution must be at least 2 max|r| + 1");
  FiniteAbelianGroup H(spec.finite_orders);
  const std::size_t d = spec.d;
  std::size_t points = 1;
  for (std::size_t i = 0; i < d; ++i) {
    points *= resolution;
    detail::require(points <= (std::size_t{1} << 28), ErrorCode::InvalidArgument, "quadrature grid too large");
  }

  std::vector<std::vector<Complex>> weight(spec.terms.size(), std::vector<Complex>(H.size()));
  for (std::size_t j = 0; j < spec.terms.size(); ++j) {
    Index chi = H.index(spec.terms[j].omega);
    for (Index h = 0; h < H.size(); ++h) weight[j][h] = static_cast<double>(spec.terms[j].sign) * H.character(chi, h);
  }

  double sum = 0.0;
  double comp = 0.0;
  auto add = [&](double v) {
    double y = v - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  std::vector<std::size_t> k(d, 0);
  std::vector<Complex> term_phase(spec.terms.size());
  for (std::size_t p = 0; p < points; ++p) {
    for (std::size_t j = 0; j < spec.terms.size(); ++j) {
      double t = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        t += static_cast<double>(spec.terms[j].r[i]) * (static_cast<double>(k[i]) + 0.5) / static_cast<double>(resolution);
      }
      t -= std::floor(t);
      double angle = 2.0 * std::numbers::pi * t;
      term_phase[j] = Complex(std::cos(angle), std::sin(angle));
    }
    for (Index h = 0; h < H.size(); ++h) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < spec.terms.size(); ++j) acc += weight[j][h] * term_phase[j];
      add(std::abs(acc));
    }
    for (std::size_t i = d; i-- > 0;) {
      if (++k[i] < resolution) break;
      k[i] = 0;
    }
  }
  QuadratureResult out;
  out.resolution = resolution;
  out.value = sum / static_cast<double>(points * H.size());
  for (std::size_t i = 0; i < d; ++i) {
    double L = 0.0;
    for (const auto& t : spec.terms) L += 2.0 * std::numbers::pi * static_cast<double>(t.r[i] < 0 ? -t.r[i] : t.r[i]);
    out.error_bound += L / (4.0 * static_cast<double>(resolution));
  }
  return out;
}

/// |image(L1) intersect image(L2)| inside (Z/N)^d, counted by closure.
inline std::size_t model_intersection_count(const Lattice& a, const Lattice& b, std::int64_t N) {
  detail::require(a.ambient() == b.ambient(), ErrorCode::InvalidArgument, "ambient ranks differ");
  FiniteAbelianGroup g(std::vector<std::int64_t>(a.ambient(), N));
  auto image = [&](const Lattice& l) {
    std::vector<Index> gens;
    for (const auto& r : l.basis()) gens.push_back(g.index(r));
    return Subgroup::generated_by(g, gens).elements();
  };
  auto ia = image(a);
  auto ib = image(b);
  std::vector<Index> both;
  std::set_intersection(ia.begin(), ia.end(), ib.begin(), ib.end(), std::back_inserter(both));
  return both.size();
}

}  // namespace cosetring
