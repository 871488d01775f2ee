#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cosetring/bourgain.hpp"
#include "cosetring/corpus.hpp"
#include "cosetring/spectral.hpp"
#include "oracles.hpp"

using namespace cosetring;

namespace {

// X_rho of a Bohr system by direct evaluation of the characters.
std::vector<Index> bohr_level(const FiniteAbelianGroup& g, const std::vector<Index>& chars,
                              const std::vector<double>& kappas, double rho) {
  std::vector<Index> out;
  for (Index x = 0; x < g.size(); ++x) {
    bool in = true;
    for (std::size_t j = 0; j < chars.size(); ++j) {
      in &= oracle::chord(oracle::character(g, chars[j], x)) <= kappas[j] * rho + 1e-12;
    }
    if (in) out.push_back(x);
  }
  return out;
}

double beta_hat_min(const SystemMeasure& m) {
  double lo = 1e300;
  for (auto z : m.beta_hat.values()) lo = std::min(lo, z.real());
  return lo;
}

}  // namespace

TEST(SubgroupSystem, Basics) {
  FiniteAbelianGroup z4({4});
  auto whole = subgroup_system(Subgroup::whole(z4));
  EXPECT_EQ(whole.dimension(), 0.0);
  EXPECT_EQ(whole.density(), 1.0);

  FiniteAbelianGroup z8({8});
  auto trivial = subgroup_system(Subgroup::trivial(z8));
  EXPECT_DOUBLE_EQ(trivial.density(), 1.0 / 8.0);
  EXPECT_TRUE(check_axioms(trivial).all_pass());

  auto s = subgroup_system(Subgroup::generated_by(z8, {4}));
  auto rep = check_axioms(s);
  EXPECT_TRUE(rep.all_pass());
  for (const auto& c : rep.covering) EXPECT_EQ(c.count, 1u);
  for (double rho : {0.0, 0.3, 1.0, 4.0}) EXPECT_EQ(s.level(rho), (std::vector<Index>{0, 4}));
  EXPECT_THROW(s.level(4.5), Error);
  EXPECT_THROW(s.level(-0.1), Error);
}

TEST(BohrSystem, TrivialCharacterGivesWholeGroup) {
  FiniteAbelianGroup z6({6});
  auto s = bohr_system(z6, {0}, 1.0);
  for (double rho : {0.0, 0.5, 2.0}) EXPECT_EQ(s.level_size(rho), 6u);
  EXPECT_EQ(s.dimension(), 3.0);
}

TEST(BohrSystem, Z12Example) {
  FiniteAbelianGroup z12({12});
  auto s = bohr_system(z12, {1}, 1.0);
  EXPECT_EQ(s.level(1.0), (std::vector<Index>{0, 1, 2, 10, 11}));
  EXPECT_EQ(s.level(1.0), bohr_level(z12, {1}, {1.0}, 1.0));
  EXPECT_TRUE(check_axioms(s).all_pass());
}

TEST(BohrSystem, SizeBoundTwoCharacters) {
  FiniteAbelianGroup g({16, 16});
  std::vector<Index> chars{g.index(std::vector<std::int64_t>{1, 0}), g.index(std::vector<std::int64_t>{3, 5})};
  auto s = bohr_system(g, chars, {0.5, 0.5});
  EXPECT_EQ(s.dimension(), 6.0);
  EXPECT_GE(static_cast<double>(s.size()), std::pow(8.0, -2) * 0.25 * 256.0);
  for (double rho : {0.25, 1.0, 3.0}) EXPECT_EQ(s.level(rho), bohr_level(g, chars, {0.5, 0.5}, rho));
}

TEST(BohrSystem, RandomCorpusPassesAxioms) {
  corpus::Rng rng(2);
  for (int rep = 0; rep < 15; ++rep) {
    auto g = corpus::random_group(rng, 512);
    std::size_t k = 1 + corpus::uniform_index(rng, 3);
    auto s = corpus::random_bohr(g, rng, k);
    EXPECT_EQ(s.dimension(), 3.0 * static_cast<double>(k));
    auto r = check_axioms(s);
    EXPECT_TRUE(r.all_pass()) << g.describe();
    EXPECT_EQ(s.level(1.0), bohr_level(g, s.recipe().characters, s.recipe().kappas, 1.0));
  }
}

TEST(Dilate, IdentityAndSubgroup) {
  FiniteAbelianGroup z64({64});
  auto s = bohr_system(z64, {1}, 0.8);
  EXPECT_EQ(dilate(s, 1.0).radius(), s.radius());
  auto sub = subgroup_system(Subgroup::generated_by(z64, {16}));
  EXPECT_EQ(dilate(sub, 0.37).level(1.0), sub.level(1.0));
  auto half = dilate(s, 0.5);
  EXPECT_EQ(half.level(1.0), s.level(0.5));
  EXPECT_GE(static_cast<double>(half.size()), std::pow(0.25, s.dimension()) * static_cast<double>(s.size()));
  EXPECT_THROW(dilate(s, 0.0), Error);
  EXPECT_THROW(dilate(s, 1.5), Error);
}

TEST(Join, Examples) {
  FiniteAbelianGroup z60({60});
  auto a = bohr_system(z60, {1}, 0.7);
  auto whole = subgroup_system(Subgroup::whole(z60));
  EXPECT_EQ(join(a, whole).radius(), a.radius());

  auto self = join(a, a);
  EXPECT_EQ(self.dimension(), 8.0 * a.dimension());
  EXPECT_EQ(self.radius(), a.radius());
  EXPECT_TRUE(check_axioms(self).axioms_pass());

  auto b = bohr_system(z60, {7}, 0.9);
  auto j = join(a, b);
  auto two = bohr_system(z60, {1, 7}, std::vector<double>{0.7, 0.9});
  for (double rho : {0.1, 0.5, 1.0, 2.0, 4.0}) EXPECT_EQ(j.level(rho), two.level(rho));
  EXPECT_GE(static_cast<double>(j.size()), join_size_lower_bound(a, b));

  FiniteAbelianGroup other({6, 10});
  EXPECT_THROW(join(a, subgroup_system(Subgroup::whole(other))), Error);
}

TEST(Axioms, SymmetryViolationReported) {
  FiniteAbelianGroup z5({5});
  std::vector<double> r(5, kInfiniteRadius);
  r[0] = 0.0;
  r[1] = 0.0;
  auto s = BourgainSystem::from_radius(z5, r, 1.0);
  auto rep = check_axioms(s);
  EXPECT_FALSE(rep.symmetry);
  EXPECT_FALSE(rep.axioms_pass());
  auto it = std::find_if(rep.failures.begin(), rep.failures.end(), [](const auto& f) { return f.axiom == "BS3"; });
  ASSERT_NE(it, rep.failures.end());
  EXPECT_FALSE(it->elements.empty());
}

TEST(Axioms, DoublingCertificateRejectedAtConstruction) {
  FiniteAbelianGroup z16({16});
  std::vector<double> r(16);
  for (Index x = 0; x < 16; ++x) r[x] = static_cast<double>(std::min<Index>(x, 16 - x)) / 2.0;
  try {
    BourgainSystem::from_radius(z16, r, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CertificateViolation);
  }
  EXPECT_NO_THROW(BourgainSystem::from_radius(z16, r, 3.0));
}

TEST(Regularity, SubgroupTakesFirstGridPoint) {
  FiniteAbelianGroup z12({12});
  auto reg = regular_dilate_search(subgroup_system(Subgroup::generated_by(z12, {3})));
  EXPECT_DOUBLE_EQ(reg.lambda, 0.5);
  EXPECT_TRUE(reg.report.regular);
  EXPECT_EQ(reg.report.max_ratio_violation, 0.0);
}

TEST(Regularity, SingleCharacterOnZ1024) {
  FiniteAbelianGroup g({1024});
  auto s = bohr_system(g, {1}, 1.0);
  auto reg = regular_dilate_search(s);
  EXPECT_GE(reg.lambda, 0.5);
  EXPECT_LE(reg.lambda, 1.0);
  EXPECT_TRUE(reg.report.regular);
  EXPECT_LE(reg.report.max_ratio_violation, 1e-9);
  EXPECT_EQ(reg.system.level(1.0), s.level(reg.lambda));

  // Independent recheck of the inequality on a fine kappa grid.
  const double d = reg.system.dimension();
  const double base = static_cast<double>(reg.system.level_size(1.0));
  for (int i = -400; i <= 400; ++i) {
    double kappa = static_cast<double>(i) / 400.0 / (10.0 * d);
    double ratio = base / static_cast<double>(s.level(std::min(4.0, reg.lambda * (1.0 + kappa))).size());
    EXPECT_GE(ratio, 1.0 - 10.0 * d * std::abs(kappa) - 1e-9);
    EXPECT_LE(ratio, 1.0 + 10.0 * d * std::abs(kappa) + 1e-9);
  }
}

TEST(Regularity, AvoidsJumpAtOne) {
  // r(x) = |x| on Z/16: every integer radius is a jump, in particular rho = 1.
  FiniteAbelianGroup z16({16});
  std::vector<double> r(16);
  for (Index x = 0; x < 16; ++x) r[x] = static_cast<double>(std::min<Index>(x, 16 - x));
  auto s = BourgainSystem::from_radius(z16, r, 2.0);
  EXPECT_FALSE(regularity_at(s, 1.0).regular);
  auto reg = regular_dilate_search(s);
  EXPECT_NE(reg.lambda, 1.0);
  EXPECT_TRUE(reg.report.regular);
}

TEST(Measures, SubgroupAndSingleton) {
  FiniteAbelianGroup z12({12});
  auto H = Subgroup::generated_by(z12, {4});
  auto m = beta_measure(subgroup_system(H), 1.0);
  auto expect = coset_indicator(0, H) * Complex(12.0 / 3.0);
  EXPECT_LT(max_abs_diff(m.beta, expect), 1e-12);

  auto point = beta_measure(subgroup_system(Subgroup::trivial(z12)), 1.0);
  EXPECT_NEAR(point.beta[0].real(), 12.0, 1e-12);
  for (auto z : point.beta_hat.values()) EXPECT_NEAR(z.real(), 1.0, 1e-12);
}

TEST(Measures, BohrZ12SupportAndPositivity) {
  FiniteAbelianGroup z12({12});
  auto s = bohr_system(z12, {1}, 1.0);
  auto m = beta_measure(s, 1.0);
  EXPECT_GE(beta_hat_min(m), -1e-12);
  EXPECT_NEAR(integral(m.beta).real(), 1.0, 1e-12);
  for (Index x = 0; x < 12; ++x) {
    if (!s.contains(x, 2.0)) {
      EXPECT_NEAR(std::abs(m.beta[x]), 0.0, 1e-12);
    }
    EXPECT_GE(m.beta[x].real(), -1e-12);
  }
  auto ref = oracle::dft(m.beta);
  for (Index c = 0; c < 12; ++c) EXPECT_NEAR(std::abs(ref[c] - m.beta_hat[c]), 0.0, 1e-12);

  EXPECT_THROW(beta_measure(s, 0.0), Error);
  EXPECT_THROW(beta_measure(s, 2.5), Error);
}

TEST(Psi, SubgroupAveragesAndCharacters) {
  FiniteAbelianGroup z12({12});
  auto H = Subgroup::generated_by(z12, {3});
  corpus::Rng rng(6);
  auto f = corpus::random_function(z12, rng);
  auto pf = psi_apply(subgroup_system(H), f);
  for (Index x = 0; x < 12; ++x) {
    Complex avg = 0.0;
    for (auto h : H.elements()) avg += f[z12.add(x, h)];
    EXPECT_NEAR(std::abs(pf[x] - avg / static_cast<double>(H.size())), 0.0, 1e-12);
  }

  auto s = bohr_system(z12, {1}, 1.0);
  auto m = beta_measure(s, 1.0);
  auto chi = character_function(z12, 5);
  EXPECT_LT(max_abs_diff(psi_apply(m, chi), chi * m.beta_hat[5]), 1e-12);
}

TEST(Psi, NormSplitIdentity) {
  corpus::Rng rng(12);
  FiniteAbelianGroup z32({32});
  for (int rep = 0; rep < 20; ++rep) {
    auto s = corpus::random_bohr(z32, rng, 1 + corpus::uniform_index(rng, 2));
    auto f = corpus::random_function(z32, rng);
    auto pf = psi_apply(s, f);
    double lhs = algebra_norm(f);
    EXPECT_NEAR(lhs, algebra_norm(pf) + algebra_norm(f - pf), 1e-9 * lhs);
  }
}

TEST(Invariance, SubgroupIsExact) {
  FiniteAbelianGroup z12({12});
  auto s = subgroup_system(Subgroup::generated_by(z12, {2}));
  corpus::Rng rng(1);
  auto rep = invariance_checks(s, 0.1, corpus::random_function(z12, rng));
  EXPECT_LT(rep.l1_shift_max, 1e-12);
  EXPECT_LT(rep.psi_shift_max, 1e-12);
  EXPECT_TRUE(rep.all_ok());
}

TEST(Invariance, RegularBohrOnZ128) {
  FiniteAbelianGroup g({128});
  auto reg = regular_dilate_search(bohr_system(g, {1}, 1.0));
  const double kappa = 1.0 / (20.0 * reg.system.dimension());
  auto rep = invariance_checks(reg.system, kappa, GroupFunction::constant(g, 1.0));
  EXPECT_TRUE(rep.regular);
  EXPECT_TRUE(rep.all_ok());
  EXPECT_LT(rep.psi_shift_max, 1e-12);

  // Lemma bound recomputed directly from beta_1.
  auto m = beta_measure(reg.system, 1.0);
  for (auto y : reg.system.level(kappa)) {
    double acc = 0.0;
    for (Index x = 0; x < 128; ++x) acc += std::abs(m.beta[g.add(x, y)] - m.beta[x]);
    EXPECT_LE(acc / 128.0, 20.0 * reg.system.dimension() * kappa + 1e-9);
  }
}

TEST(Freiman, RelabelledImage) {
  FiniteAbelianGroup z5({5});
  FiniteAbelianGroup target({5, 3});
  auto s = subgroup_system(Subgroup::whole(z5));
  std::vector<std::pair<Index, Index>> phi;
  for (Index x = 0; x < 5; ++x) phi.emplace_back(x, target.index(std::vector<std::int64_t>{static_cast<std::int64_t>(x), 0}));
  auto img = freiman_image(s, target, phi);
  EXPECT_EQ(img.size(), 5u);
  EXPECT_EQ(img.dimension(), 0.0);
  EXPECT_TRUE(check_axioms(img).axioms_pass());

  // A map that breaks additive structure is rejected.
  std::vector<std::pair<Index, Index>> bad{{0, 0}, {1, 1}, {2, 3}, {3, 9}, {4, 14}};
  EXPECT_THROW(freiman_image(s, FiniteAbelianGroup({15}), bad), Error);
}
