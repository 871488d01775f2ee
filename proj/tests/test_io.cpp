#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cosetring/config.hpp"
#include "cosetring/corpus.hpp"
#include "cosetring/io.hpp"

using namespace cosetring;
using io::Json;

namespace {

Json reparse(const Json& j) { return Json::parse(j.dump()); }

void expect_same_system(const BourgainSystem& a, const BourgainSystem& b) {
  EXPECT_EQ(a.group().orders(), b.group().orders());
  EXPECT_EQ(a.dimension(), b.dimension());
  ASSERT_EQ(a.radius().size(), b.radius().size());
  for (std::size_t i = 0; i < a.radius().size(); ++i) {
    if (std::isinf(a.radius()[i])) {
      EXPECT_TRUE(std::isinf(b.radius()[i]));
    } else {
      EXPECT_NEAR(a.radius()[i], b.radius()[i], 1e-12);
    }
  }
}

}  // namespace

TEST(Io, FunctionRoundTrip) {
  corpus::Rng rng(7);
  FiniteAbelianGroup g({3, 4});
  auto f = corpus::random_function(g, rng);
  auto back = io::function_from_json(reparse(io::function_json(f)));
  EXPECT_EQ(back.group().orders(), g.orders());
  EXPECT_EQ(back.domain(), Domain::Primal);
  EXPECT_EQ(max_abs_diff(f, back), 0.0);

  auto F = dft(f);
  auto back2 = io::function_from_json(reparse(io::function_json(F)));
  EXPECT_EQ(back2.domain(), Domain::Dual);
}

TEST(Io, FunctionAcceptsPlainNumbers) {
  auto j = Json::parse(R"({"orders":[4],"values":[1,0,[2,1],-1]})");
  auto f = io::function_from_json(j);
  EXPECT_EQ(f[0], Complex(1, 0));
  EXPECT_EQ(f[2], Complex(2, 1));
  EXPECT_EQ(f[3], Complex(-1, 0));
}

TEST(Io, FunctionRejectsMalformed) {
  EXPECT_THROW(io::function_from_json(Json::parse(R"({"orders":[4],"values":[1,0]})")), Error);
  EXPECT_THROW(io::function_from_json(Json::parse(R"({"values":[1]})")), Error);
  EXPECT_THROW(io::function_from_json(Json::parse(R"({"orders":[1],"values":[1],"domain":"x"})")), Error);
  EXPECT_THROW(io::function_from_json(Json::parse(R"({"orders":[2],"values":[[1,2,3],0]})")), Error);
}

TEST(Io, ElementsByIndexOrCoordinates) {
  FiniteAbelianGroup g({2, 8});
  EXPECT_EQ(io::element_from_json(g, Json(9)), g.index(std::vector<std::int64_t>{1, 1}));
  EXPECT_EQ(io::element_from_json(g, Json::parse("[1,1]")), 9u);
  EXPECT_THROW(io::element_from_json(g, Json(16)), Error);
  EXPECT_EQ(io::element_json(g, 9), Json::parse("[1,1]"));
}

TEST(Io, SubgroupRoundTrip) {
  FiniteAbelianGroup g({4, 6});
  auto H = Subgroup::generated_by(g, {g.index(std::vector<std::int64_t>{2, 3})});
  auto back = io::subgroup_from_json(reparse(io::subgroup_json(H)));
  EXPECT_EQ(back.elements(), H.elements());
}

TEST(Io, SystemRoundTrips) {
  FiniteAbelianGroup g({24});
  auto sub = subgroup_system(Subgroup::generated_by(g, {6}));
  auto bohr = bohr_system(g, {1, 5}, std::vector<double>{0.3, 0.6});
  auto dil = dilate(bohr, 0.75);
  auto both = join(sub, dil);
  for (const auto& S : {sub, bohr, dil, both}) {
    auto j = reparse(io::system_json(S));
    EXPECT_EQ(j.at("size").get<std::size_t>(), S.size());
    expect_same_system(S, io::system_from_json(j));
  }
}

TEST(Io, ExplicitAndFreimanSystems) {
  FiniteAbelianGroup z5({5});
  FiniteAbelianGroup target({5, 3});
  auto s = subgroup_system(Subgroup::whole(z5));
  std::vector<std::pair<Index, Index>> phi;
  for (Index x = 0; x < 5; ++x) phi.emplace_back(x, target.index(std::vector<std::int64_t>{static_cast<std::int64_t>(x), 0}));
  auto img = freiman_image(s, target, phi);
  auto j = reparse(io::system_json(img));
  EXPECT_EQ(j.at("kind"), "explicit");
  expect_same_system(img, io::system_from_json(j));

  auto spec = Json::parse(R"({"orders":[5],"kind":"freiman","params":{
      "source":{"orders":[5],"kind":"subgroup","params":{"generators":[1]}},
      "mapping":[[0,0],[1,2],[2,4],[3,1],[4,3]]}})");
  auto viaRecipe = io::system_from_json(spec);
  EXPECT_EQ(viaRecipe.size(), 5u);
}

TEST(Io, SystemRecertifiedWhenDimGiven) {
  auto j = Json::parse(R"({"orders":[12],"kind":"bohr","params":{"characters":[1],"kappas":0.5},"dim":7})");
  auto S = io::system_from_json(j);
  EXPECT_EQ(S.dimension(), 7.0);
  EXPECT_THROW(io::system_from_json(Json::parse(R"({"orders":[12],"kind":"cube","params":{}})")), Error);
}

TEST(Io, FrequencySpecAndLattice) {
  auto spec = io::frequency_spec_from_json(
      Json::parse(R"({"d":1,"finite_orders":[],"terms":[{"sign":1,"omega":[],"r":[0]},{"r":[1]}]})"));
  EXPECT_EQ(spec.d, 1u);
  ASSERT_EQ(spec.terms.size(), 2u);
  EXPECT_EQ(spec.terms[1].sign, 1);
  EXPECT_EQ(spec.terms[1].r, (IntVector{1}));

  auto l = io::lattice_from_json(Json::parse(R"({"generators":[[2,2],[2,-2]]})"));
  EXPECT_EQ(l.rank(), 2u);
  auto j = reparse(io::lattice_json(l));
  auto back = io::lattice_from_json({{"generators", j.at("basis")}, {"ambient", j.at("ambient")}});
  EXPECT_EQ(back, l);
}

TEST(Io, PiecesAndDecompositionRoundTrip) {
  FiniteAbelianGroup g({8});
  auto f = GroupFunction::indicator(g, std::vector<Index>{0, 2, 4, 6}) + GroupFunction::indicator(g, std::vector<Index>{0, 4});
  auto D = decompose(f);
  auto j = reparse(io::decomposition_json(D));
  EXPECT_TRUE(j.at("certificate").at("exact").get<bool>());
  auto pieces = io::pieces_from_json(g, j.at("pieces"));
  EXPECT_TRUE(verify_decomposition(f, pieces).exact);
  EXPECT_EQ(detail::recombine(g, pieces), detail::recombine(g, D.pieces));

  pieces.front().sign = -pieces.front().sign;
  auto r = verify_decomposition(f, pieces);
  auto vj = io::verification_json(g, r);
  EXPECT_FALSE(vj.at("exact").get<bool>());
  EXPECT_TRUE(vj.contains("mismatch"));
}

TEST(Io, DumpsAreDeterministic) {
  FiniteAbelianGroup g({16});
  auto f = GroupFunction::indicator(g, std::vector<Index>{0, 4, 8, 12});
  auto a = io::decomposition_json(decompose(f)).dump();
  auto b = io::decomposition_json(decompose(f)).dump();
  EXPECT_EQ(a, b);
  // Keys come out sorted.
  auto j = Json::parse(a);
  EXPECT_EQ(j.begin().key(), "certificate");
}

TEST(Config, MergeAndValidate) {
  RunConfig c;
  EXPECT_TRUE(c.auto_epsilon());
  EXPECT_DOUBLE_EQ(c.resolve_epsilon(1), 1.0 / 64);
  merge_config(c, Json::parse(R"({"epsilon":0.1,"m_cap":3,"seed":7,"tolerances":{"psd":1e-10}})"));
  EXPECT_EQ(c.epsilon, 0.1);
  EXPECT_EQ(c.m_cap, 3u);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.tol.psd, 1e-10);
  EXPECT_EQ(c.tol.float_eq, 1e-9);
  EXPECT_DOUBLE_EQ(c.resolve_epsilon(5), 0.1);
  merge_config(c, Json::parse(R"({"epsilon":"auto"})"));
  EXPECT_TRUE(c.auto_epsilon());

  EXPECT_THROW(merge_config(c, Json::parse(R"({"epsilon":"small"})")), Error);
  EXPECT_THROW(merge_config(c, Json::parse(R"({"rho_grid":0})")), Error);
  EXPECT_THROW(merge_config(c, Json::parse("[1]")), Error);
}

TEST(Config, RoundTrip) {
  RunConfig c;
  c.epsilon = 0.05;
  c.probe_count = 16;
  Json j = c;
  RunConfig d;
  merge_config(d, reparse(j));
  EXPECT_EQ(Json(d), j);
  EXPECT_EQ(Json(RunConfig{}).at("epsilon"), "auto");
}
