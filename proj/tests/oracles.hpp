#pragma once

// Independent brute-force references for the unit and acceptance tests.
// Nothing here calls into the library's algorithms beyond group indexing.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <set>
#include <vector>

#include "cosetring/function.hpp"
#include "cosetring/group.hpp"

namespace oracle {

using cosetring::Complex;
using cosetring::FiniteAbelianGroup;
using cosetring::GroupFunction;
using cosetring::Index;

inline Complex character(const FiniteAbelianGroup& g, Index chi, Index x) {
  auto c = g.coords(chi);
  auto y = g.coords(x);
  double t = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    t += static_cast<double>((c[i] * y[i]) % g.orders()[i]) / static_cast<double>(g.orders()[i]);
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * t);
}

inline std::vector<Complex> dft(const GroupFunction& f) {
  const auto& g = f.group();
  const double n = static_cast<double>(g.size());
  std::vector<Complex> out(g.size());
  for (Index chi = 0; chi < g.size(); ++chi) {
    Complex s = 0.0;
    for (Index x = 0; x < g.size(); ++x) s += f[x] * std::conj(character(g, chi, x));
    out[chi] = s / n;
  }
  return out;
}

inline double algebra_norm(const GroupFunction& f) {
  double s = 0.0;
  for (auto z : oracle::dft(f)) s += std::abs(z);
  return s;
}

inline std::vector<Complex> convolve(const GroupFunction& a, const GroupFunction& b) {
  const auto& g = a.group();
  std::vector<Complex> out(g.size());
  for (Index t = 0; t < g.size(); ++t) {
    Complex s = 0.0;
    for (Index x = 0; x < g.size(); ++x) s += a[x] * b[g.sub(t, x)];
    out[t] = s / static_cast<double>(g.size());
  }
  return out;
}

/// Smallest set containing 0 and S closed under addition, by repeated sweeps.
inline std::set<Index> closure(const FiniteAbelianGroup& g, const std::vector<Index>& s) {
  std::set<Index> h{0};
  h.insert(s.begin(), s.end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Index> cur(h.begin(), h.end());
    for (auto a : cur) {
      for (auto b : cur) grew |= h.insert(g.add(a, b)).second;
    }
  }
  return h;
}

/// All sign vectors in {-1,0,1}^m, in lexicographic order.
inline std::vector<std::vector<int>> sign_vectors(std::size_t m) {
  std::vector<std::vector<int>> out{{}};
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::vector<int>> next;
    for (const auto& v : out) {
      for (int e : {-1, 0, 1}) {
        auto w = v;
        w.push_back(e);
        next.push_back(w);
      }
    }
    out = std::move(next);
  }
  return out;
}

inline Index combination(const FiniteAbelianGroup& g, const std::vector<Index>& a, const std::vector<int>& eps) {
  Index s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (eps[i] == 1) s = g.add(s, a[i]);
    if (eps[i] == -1) s = g.sub(s, a[i]);
  }
  return s;
}

inline bool dissociated(const FiniteAbelianGroup& g, const std::vector<Index>& a) {
  for (const auto& eps : sign_vectors(a.size())) {
    bool nonzero = false;
    for (int e : eps) nonzero |= e != 0;
    if (nonzero && combination(g, a, eps) == 0) return false;
  }
  return true;
}

inline std::set<Index> span(const FiniteAbelianGroup& g, const std::vector<Index>& a) {
  std::set<Index> out;
  for (const auto& eps : sign_vectors(a.size())) out.insert(combination(g, a, eps));
  return out;
}

inline std::uint64_t quadruples(const FiniteAbelianGroup& g, const std::vector<Index>& a) {
  std::uint64_t n = 0;
  for (auto a1 : a) {
    for (auto a2 : a) {
      for (auto a3 : a) {
        for (auto a4 : a) n += g.add(a1, a2) == g.add(a3, a4);
      }
    }
  }
  return n;
}

inline double chord(Complex z) { return std::abs(1.0 - z); }

}  // namespace oracle
