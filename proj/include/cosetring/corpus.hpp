#pragma once

// Seeded instance generators. All randomness in the library lives here.

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "cosetring/bourgain.hpp"
#include "cosetring/decompose.hpp"
#include "cosetring/function.hpp"
#include "cosetring/group.hpp"
#include "cosetring/spectral.hpp"
#include "cosetring/subgroup.hpp"

namespace cosetring::corpus {

using Rng = std::mt19937_64;

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// A random product of cyclic groups with |G| <= max_size.
inline FiniteAbelianGroup random_group(Rng& rng, std::size_t max_size, std::size_t max_rank = 3) {
  static const std::int64_t kOrders[] = {2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 16, 24, 32, 64};
  std::vector<std::int64_t> orders;
  std::size_t size = 1;
  std::size_t rank = 1 + uniform_index(rng, max_rank);
  for (std::size_t i = 0; i < rank; ++i) {
    std::vector<std::int64_t> fits;
    for (auto n : kOrders) {
      if (size * static_cast<std::size_t>(n) <= max_size) fits.push_back(n);
    }
    if (fits.empty()) break;
    auto n = fits[uniform_index(rng, fits.size())];
    orders.push_back(n);
    size *= static_cast<std::size_t>(n);
  }
  if (orders.empty()) orders.push_back(2);
  return FiniteAbelianGroup(orders);
}

inline GroupFunction random_function(const FiniteAbelianGroup& g, Rng& rng) {
  std::vector<Complex> v(g.size());
  for (auto& z : v) z = Complex(uniform_real(rng, -1.0, 1.0), uniform_real(rng, -1.0, 1.0));
  return GroupFunction(g, std::move(v));
}

inline Index random_element(const FiniteAbelianGroup& g, Rng& rng) { return uniform_index(rng, g.size()); }

inline Subgroup random_subgroup(const FiniteAbelianGroup& g, Rng& rng, std::size_t max_generators = 2) {
  std::size_t k = uniform_index(rng, max_generators + 1);
  std::vector<Index> gens;
  for (std::size_t i = 0; i < k; ++i) gens.push_back(random_element(g, rng));
  return Subgroup::generated_by(g, gens);
}

inline std::vector<Index> random_set(const FiniteAbelianGroup& g, Rng& rng, std::size_t size) {
  std::vector<Index> all(g.size());
  for (Index x = 0; x < g.size(); ++x) all[x] = x;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(size, all.size()));
  std::sort(all.begin(), all.end());
  return all;
}

inline std::vector<CosetPiece> random_pieces(const FiniteAbelianGroup& g, Rng& rng, std::size_t count) {
  std::vector<CosetPiece> pieces;
  for (std::size_t i = 0; i < count; ++i) {
    CosetPiece p;
    p.sign = uniform_index(rng, 4) == 0 ? -1 : 1;
    p.subgroup = random_subgroup(g, rng);
    p.rep = random_element(g, rng);
    pieces.push_back(std::move(p));
  }
  return pieces;
}

inline GroupFunction function_of_pieces(const FiniteAbelianGroup& g, const std::vector<CosetPiece>& pieces) {
  auto values = detail::recombine(g, pieces);
  std::vector<Complex> v(values.begin(), values.end());
  return GroupFunction(g, std::move(v));
}

struct Instance {
  GroupFunction f;
  bool structured = false;  // a true signed coset sum
  std::size_t pieces = 0;
};

/// Integer-valued functions with algebra norm at most max_norm on groups of
/// size at most max_size. Even positions are signed sums of at most four
/// cosets; odd positions mix in sums of five cosets and small sets.
inline std::vector<Instance> integer_corpus(std::uint64_t seed, std::size_t count, std::size_t max_size = 512,
                                            double max_norm = 5.0) {
  Rng rng(seed);
  std::vector<Instance> out;
  while (out.size() < count) {
    auto g = random_group(rng, max_size);
    Instance inst;
    if (out.size() % 2 == 0) {
      inst.pieces = 1 + uniform_index(rng, 4);
      inst.f = function_of_pieces(g, random_pieces(g, rng, inst.pieces));
      inst.structured = true;
    } else if (uniform_index(rng, 2) == 0) {
      inst.pieces = 5;
      inst.f = function_of_pieces(g, random_pieces(g, rng, 5));
    } else {
      inst.f = GroupFunction::indicator(g, random_set(g, rng, 1 + uniform_index(rng, 3)));
    }
    double a = algebra_norm(inst.f);
    if (a > max_norm + 1e-9 || a < 1e-9) continue;
    out.push_back(std::move(inst));
  }
  return out;
}

/// Random Bohr system with k characters and widths in [lo, hi].
inline BourgainSystem random_bohr(const FiniteAbelianGroup& g, Rng& rng, std::size_t k, double lo = 0.2,
                                  double hi = 1.0) {
  std::vector<Index> chars;
  std::vector<double> kappas;
  for (std::size_t i = 0; i < k; ++i) {
    chars.push_back(random_element(g, rng));
    kappas.push_back(uniform_real(rng, lo, hi));
  }
  return bohr_system(g, chars, kappas);
}

}  // namespace cosetring::corpus
