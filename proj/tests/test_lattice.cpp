#include <gtest/gtest.h>

#include <cstdint>
#include <set>
#include <vector>

#include "cosetring/lattice.hpp"

using namespace cosetring;

namespace {

Lattice lat(std::size_t d, IntMatrix gens) { return Lattice::from_generators(d, std::move(gens)); }

// Points of the box [-R, R]^2 that are integer combinations of the
// generators, found by enumerating bounded coefficients.
std::set<IntVector> box_members(const IntMatrix& gens, std::int64_t R, std::int64_t C) {
  std::set<IntVector> out;
  if (gens.size() == 1) {
    for (std::int64_t a = -C; a <= C; ++a) {
      IntVector v{a * gens[0][0], a * gens[0][1]};
      if (std::abs(v[0]) <= R && std::abs(v[1]) <= R) out.insert(v);
    }
    return out;
  }
  for (std::int64_t a = -C; a <= C; ++a) {
    for (std::int64_t b = -C; b <= C; ++b) {
      IntVector v{a * gens[0][0] + b * gens[1][0], a * gens[0][1] + b * gens[1][1]};
      if (std::abs(v[0]) <= R && std::abs(v[1]) <= R) out.insert(v);
    }
  }
  return out;
}

std::set<IntVector> box_members(const Lattice& l, std::int64_t R) {
  std::set<IntVector> out;
  for (std::int64_t x = -R; x <= R; ++x) {
    for (std::int64_t y = -R; y <= R; ++y) {
      if (l.contains({x, y})) out.insert({x, y});
    }
  }
  return out;
}

}  // namespace

TEST(Lattice, CanonicalFormIsGeneratorIndependent) {
  auto a = lat(2, {{2, 0}, {0, 2}});
  auto b = lat(2, {{2, 2}, {2, -2}, {4, 0}, {0, 2}});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rank(), 2u);
  auto c = lat(2, {{3, 6}, {-2, -4}});
  EXPECT_EQ(c.basis(), (IntMatrix{{1, 2}}));
  auto z = lat(3, {{0, 0, 0}});
  EXPECT_EQ(z.rank(), 0u);
}

TEST(Lattice, BasisIsEchelonWithPositivePivots) {
  auto l = lat(3, {{4, 6, -2}, {-6, 3, 9}, {2, 1, 1}});
  std::size_t last = 0;
  for (std::size_t i = 0; i < l.rank(); ++i) {
    std::size_t p = 0;
    while (l.basis()[i][p] == 0) ++p;
    if (i > 0) {
      EXPECT_GT(p, last);
    }
    EXPECT_GT(l.basis()[i][p], 0);
    for (std::size_t k = 0; k < i; ++k) {
      EXPECT_GE(l.basis()[k][p], 0);
      EXPECT_LT(l.basis()[k][p], l.basis()[i][p]);
    }
    last = p;
  }
}

TEST(Lattice, MembershipMatchesBoxEnumeration) {
  IntMatrix gens{{3, 1}, {1, 2}};
  auto l = lat(2, gens);
  EXPECT_EQ(box_members(l, 12), box_members(gens, 12, 40));
  EXPECT_EQ(lattice_index(lat(2, {{1, 0}, {0, 1}}), l), 5);
}

TEST(Lattice, IntersectOneDimensional) {
  auto six = lattice_intersect(lat(1, {{2}}), lat(1, {{3}}));
  EXPECT_EQ(six, lat(1, {{6}}));
  EXPECT_EQ(lattice_index(lat(1, {{2}}), six), 3);
  EXPECT_EQ(lattice_index(lat(1, {{3}}), six), 2);
  EXPECT_EQ(lattice_intersect(lat(1, {{4}}), lat(1, {{6}})), lat(1, {{12}}));
}

TEST(Lattice, IntersectIsIdempotent) {
  auto l = lat(3, {{2, 1, 0}, {0, 3, 1}});
  EXPECT_EQ(lattice_intersect(l, l), l);
}

TEST(Lattice, IntersectMatchesBoxOracle) {
  auto a = lat(2, {{2, 0}, {0, 2}});
  auto b = lat(2, {{1, 1}, {1, -1}});
  auto c = lattice_intersect(a, b);
  std::set<IntVector> both;
  auto ma = box_members(a, 20);
  auto mb = box_members(b, 20);
  for (const auto& v : ma) {
    if (mb.count(v)) both.insert(v);
  }
  EXPECT_EQ(box_members(c, 20), both);
  EXPECT_EQ(c, a);

  auto p = lat(2, {{3, 1}, {0, 4}});
  auto q = lat(2, {{2, 2}, {1, -3}});
  auto pq = lattice_intersect(p, q);
  std::set<IntVector> both2;
  auto mp = box_members(p, 20);
  auto mq = box_members(q, 20);
  for (const auto& v : mp) {
    if (mq.count(v)) both2.insert(v);
  }
  EXPECT_EQ(box_members(pq, 20), both2);
}

TEST(Lattice, IntersectCommutesAndAssociates) {
  std::vector<Lattice> ls{lat(2, {{2, 0}, {0, 3}}), lat(2, {{1, 1}, {0, 4}}), lat(2, {{6, 2}, {1, -1}}),
                          lat(2, {{1, 2}})};
  for (const auto& a : ls) {
    for (const auto& b : ls) {
      EXPECT_EQ(lattice_intersect(a, b), lattice_intersect(b, a));
      for (const auto& c : ls) {
        EXPECT_EQ(lattice_intersect(lattice_intersect(a, b), c), lattice_intersect(a, lattice_intersect(b, c)));
      }
    }
  }
}

TEST(Lattice, SumContainsBoth) {
  auto a = lat(2, {{4, 0}});
  auto b = lat(2, {{0, 6}, {2, 2}});
  auto s = lattice_sum(a, b);
  for (const auto& r : a.basis()) EXPECT_TRUE(s.contains(r));
  for (const auto& r : b.basis()) EXPECT_TRUE(s.contains(r));
  EXPECT_EQ(s, lat(2, {{2, 0}, {0, 2}}));
}

TEST(Lattice, IndexInfiniteAcrossRanks) {
  EXPECT_FALSE(lattice_index(lat(2, {{1, 0}, {0, 1}}), lat(2, {{1, 0}})).has_value());
  EXPECT_FALSE(lattice_index(lat(2, {{1, 0}}), lat(2, {{0, 1}})).has_value());
  EXPECT_EQ(lattice_index(lat(2, {{1, 1}}), lat(2, {{2, 2}})), 2);
}

TEST(Commensurability, TwoAndThree) {
  auto cls = commensurability_classes({lat(1, {{2}}), lat(1, {{3}})});
  ASSERT_EQ(cls.size(), 1u);
  EXPECT_EQ(cls[0].members, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(cls[0].omega, lat(1, {{6}}));
}

TEST(Commensurability, CoordinateAxesSeparate) {
  auto cls = commensurability_classes({lat(2, {{1, 0}}), lat(2, {{0, 1}})});
  EXPECT_EQ(cls.size(), 2u);
}

TEST(Commensurability, DiagonalLines) {
  auto cls = commensurability_classes({lat(2, {{1, 1}}), lat(2, {{2, 2}}), lat(2, {{1, -1}})});
  ASSERT_EQ(cls.size(), 2u);
  EXPECT_EQ(cls[0].members, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(cls[1].members, (std::vector<std::size_t>{2}));
  EXPECT_EQ(cls[0].omega, lat(2, {{2, 2}}));
}

TEST(Commensurability, EquivalenceRelationOnCorpus) {
  std::vector<Lattice> ls{lat(2, {{1, 0}}),         lat(2, {{3, 0}}),         lat(2, {{0, 2}}),
                          lat(2, {{1, 1}, {0, 2}}), lat(2, {{5, 0}, {0, 7}}), lat(2, {{2, 4}}),
                          lat(2, {{1, 2}}),         lat(2, {{0, 0}}),         lat(2, {{4, -2}})};
  const std::size_t n = ls.size();
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_TRUE(commensurable(ls[i], ls[i]));
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_EQ(commensurable(ls[i], ls[j]), commensurable(ls[j], ls[i]));
      for (std::size_t k = 0; k < n; ++k) {
        if (commensurable(ls[i], ls[j]) && commensurable(ls[j], ls[k])) {
          EXPECT_TRUE(commensurable(ls[i], ls[k]));
        }
      }
      // Both indices over the intersection are finite exactly when commensurable.
      auto meet = lattice_intersect(ls[i], ls[j]);
      bool finite = lattice_index(ls[i], meet).has_value() && lattice_index(ls[j], meet).has_value();
      EXPECT_EQ(finite, commensurable(ls[i], ls[j])) << i << " " << j;
    }
  }
  auto cls = commensurability_classes(ls);
  std::vector<int> seen(n, 0);
  for (const auto& c : cls) {
    for (auto m : c.members) {
      ++seen[m];
      EXPECT_TRUE(commensurable(ls[m], ls[c.members.front()]));
      for (const auto& r : c.omega.basis()) EXPECT_TRUE(ls[m].contains(r));
    }
  }
  for (auto s : seen) EXPECT_EQ(s, 1);
}

TEST(Lattice, OverflowIsReported) {
  std::int64_t big = std::int64_t{1} << 62;
  EXPECT_THROW(lattice_intersect(lat(1, {{big - 1}}), lat(1, {{big - 3}})), Error);
}
