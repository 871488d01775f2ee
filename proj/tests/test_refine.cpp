#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "cosetring/corpus.hpp"
#include "cosetring/refine.hpp"
#include "oracles.hpp"

using namespace cosetring;

namespace {

// beta_rho(z) = E_y mu(y) mu(z - y) with mu = 1_X |G| / |X|, summed directly.
std::vector<double> direct_beta(const BourgainSystem& S, double rho) {
  const auto& g = S.group();
  auto X = S.level(rho);
  const double n = static_cast<double>(g.size());
  const double w = n / static_cast<double>(X.size());
  std::vector<double> out(g.size(), 0.0);
  for (auto a : X) {
    for (auto b : X) out[g.add(a, b)] += w * w / n;
  }
  return out;
}

// max over x0 of E_x h(x)^2 beta_rho(x - x0), by triple summation.
double direct_avg(const std::vector<double>& h, const BourgainSystem& S, double rho) {
  const auto& g = S.group();
  auto beta = direct_beta(S, rho);
  double best = 0.0;
  for (Index x0 = 0; x0 < g.size(); ++x0) {
    double acc = 0.0;
    for (Index x = 0; x < g.size(); ++x) acc += h[x] * h[x] * beta[g.sub(x, x0)];
    best = std::max(best, acc / static_cast<double>(g.size()));
  }
  return best;
}

std::vector<double> direct_residual(const GroupFunction& f, const BourgainSystem& S) {
  const auto& g = S.group();
  auto beta = direct_beta(S, 1.0);
  std::vector<double> h(g.size());
  for (Index t = 0; t < g.size(); ++t) {
    double acc = 0.0;
    for (Index x = 0; x < g.size(); ++x) acc += f[x].real() * beta[g.sub(t, x)];
    h[t] = f[t].real() - acc / static_cast<double>(g.size());
  }
  return h;
}

void expect_certificate(const RefinementResult& r, const GroupFunction& f) {
  const auto& c = r.certificate;
  EXPECT_LE(c.iterations, c.iteration_budget);
  EXPECT_TRUE(c.disjoint);
  EXPECT_TRUE(c.to_sat);
  EXPECT_TRUE(c.dim_ok()) << c.dim_value << " > " << c.dim_bound;
  EXPECT_TRUE(c.avg_lwr_ok());
  EXPECT_TRUE(c.almost_int_ok());
  EXPECT_TRUE(c.mass_ok());
  EXPECT_TRUE(c.final_avg.passes());
  EXPECT_TRUE(regularity_at(r.system, 1.0).regular);

  // Gamma sets are pairwise disjoint, checked by set intersection.
  std::set<Index> seen;
  for (const auto& s : c.steps) {
    for (auto chi : s.gamma_set) EXPECT_TRUE(seen.insert(chi).second);
  }
  // Final avg-bd value recomputed by direct summation on every probe.
  auto h = direct_residual(f, r.system);
  for (std::size_t i = 0; i < c.final_avg.probes.size(); ++i) {
    EXPECT_NEAR(direct_avg(h, r.system, c.final_avg.probes[i]), c.final_avg.probe_max[i], 1e-9);
  }
}

}  // namespace

TEST(Refine, FixedPointOnSubgroup) {
  FiniteAbelianGroup z12({12});
  auto H = Subgroup::generated_by(z12, {4});
  auto f = coset_indicator(0, H);
  auto r = refine_system(f, subgroup_system(H), 0.1, 1.0);
  EXPECT_EQ(r.certificate.iterations, 1u);
  ASSERT_EQ(r.certificate.steps.size(), 1u);
  EXPECT_TRUE(r.certificate.steps[0].formal);
  EXPECT_LT(r.certificate.steps[0].lhs, 1e-20);
  EXPECT_EQ(r.system.level(1.0), H.elements());
  EXPECT_LT(r.certificate.distance_after, 1e-12);
  expect_certificate(r, f);
}

TEST(Refine, WholeGroupProjectsToMean) {
  FiniteAbelianGroup z8({8});
  auto f = GroupFunction::from_real(z8, std::vector<double>{1, 1, -1, -1, 0, 0, 0, 0});
  auto S = subgroup_system(Subgroup::whole(z8));
  auto pf = psi_apply(S, f);
  for (Index x = 0; x < 8; ++x) EXPECT_NEAR(std::abs(pf[x]), 0.0, 1e-12);
  auto r = refine_system(f, S, 0.1, std::ceil(algebra_norm(f)));
  expect_certificate(r, f);
}

TEST(Refine, TwoCosetsOnZ8) {
  FiniteAbelianGroup z8({8});
  auto f = GroupFunction::from_real(z8, std::vector<double>{2, 0, 1, 0, 2, 0, 1, 0});
  EXPECT_NEAR(algebra_norm(f), 2.0, 1e-12);
  auto S = regular_dilate_search(bohr_system(z8, {1}, 1.0)).system;
  auto r = refine_system(f, S, 0.1, 2.0);
  expect_certificate(r, f);
}

TEST(Refine, PerturbedCosetSums) {
  corpus::Rng rng(77);
  for (int rep = 0; rep < 4; ++rep) {
    auto g = corpus::random_group(rng, 64);
    auto f = corpus::function_of_pieces(g, corpus::random_pieces(g, rng, 1 + corpus::uniform_index(rng, 3)));
    for (Index x = 0; x < g.size(); ++x) f[x] += corpus::uniform_real(rng, -0.01, 0.01) / static_cast<double>(g.size());
    double M = std::max(1.0, std::ceil(algebra_norm(f)));
    auto S = regular_dilate_search(corpus::random_bohr(g, rng, 1)).system;
    auto r = refine_system(f, S, 0.1, M);
    RecordProperty("iterations" + std::to_string(rep), static_cast<int>(r.certificate.iterations));
    expect_certificate(r, f);
  }
}

TEST(Refine, Preconditions) {
  FiniteAbelianGroup z8({8});
  auto S = subgroup_system(Subgroup::whole(z8));
  auto f = GroupFunction::constant(z8, 1.0);
  auto code = [&](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::NotFound;
  };
  EXPECT_EQ(code([&] { refine_system(f, S, 0.5, 1.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code([&] { refine_system(f, S, 0.1, 0.5); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code([&] { refine_system(GroupFunction::constant(z8, 0.3), S, 0.1, 1.0); }), ErrorCode::InvalidArgument);

  std::vector<double> r(8);
  for (Index x = 0; x < 8; ++x) r[x] = static_cast<double>(std::min<Index>(x, 8 - x));
  auto jumpy = BourgainSystem::from_radius(z8, r, 2.0);
  EXPECT_EQ(code([&] { refine_system(f, jumpy, 0.1, 1.0); }), ErrorCode::NonRegularInput);
}

TEST(AvgBound, ZeroResidualAndDensityBound) {
  FiniteAbelianGroup z16({16});
  auto H = Subgroup::generated_by(z16, {4});
  auto zero = avg_bound_check(coset_indicator(0, H), subgroup_system(H), 0.1, 1.0);
  EXPECT_LT(zero.max_value, 1e-20);
  EXPECT_TRUE(zero.passes());

  corpus::Rng rng(15);
  auto f = corpus::random_function(z16, rng).map([](Complex z) { return Complex(z.real(), 0.0); });
  auto S = regular_dilate_search(bohr_system(z16, {1}, 1.0)).system;
  auto rep = avg_bound_check(f, S, 0.1, 2.0);
  auto delta0 = sup_norm(f - psi_apply(S, f));
  EXPECT_LE(rep.max_value, delta0 * delta0 + 1e-12);
}

TEST(AvgBound, MatchesTripleSumOnZ32) {
  corpus::Rng rng(16);
  FiniteAbelianGroup z32({32});
  for (int rep = 0; rep < 3; ++rep) {
    auto f = corpus::random_function(z32, rng).map([](Complex z) { return Complex(z.real(), 0.0); });
    auto S = regular_dilate_search(corpus::random_bohr(z32, rng, 1)).system;
    auto r = avg_bound_check(f, S, 0.1, 3.0, 8);
    auto h = direct_residual(f, S);
    double best = 0.0;
    for (std::size_t i = 0; i < r.probes.size(); ++i) {
      double v = direct_avg(h, S, r.probes[i]);
      EXPECT_NEAR(v, r.probe_max[i], 1e-9);
      best = std::max(best, v);
    }
    EXPECT_NEAR(best, r.max_value, 1e-9);
  }
}
