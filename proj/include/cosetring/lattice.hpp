#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cosetring/error.hpp"

namespace cosetring {

using IntVector = std::vector<std::int64_t>;
using IntMatrix = std::vector<IntVector>;  // list of rows

namespace detail {

inline std::int64_t checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw Error(ErrorCode::InvalidArgument, "integer overflow in lattice arithmetic");
  return static_cast<std::int64_t>(v);
}

// row_a <- row_a - q * row_b
inline void row_sub(IntVector& a, const IntVector& b, std::int64_t q) {
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = checked(static_cast<__int128>(a[j]) - static_cast<__int128>(q) * b[j]);
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Row-echelon Hermite normal form of the row lattice: zero rows dropped,
/// positive pivots, entries above each pivot reduced into [0, pivot).
inline IntMatrix hermite_form(IntMatrix rows, std::size_t width) {
  for (const auto& r : rows) require(r.size() == width, ErrorCode::InvalidArgument, "generator has wrong length");
  std::size_t top = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t col = 0; col < width && top < rows.size(); ++col) {
    // Euclid on column `col` among rows top..end until a single nonzero remains.
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = top; i < rows.size(); ++i) {
        if (rows[i][col] != 0 && (best == rows.size() || std::abs(rows[i][col]) < std::abs(rows[best][col]))) best = i;
      }
      if (best == rows.size()) break;
      std::swap(rows[top], rows[best]);
      bool done = true;
      for (std::size_t i = top + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        row_sub(rows[i], rows[top], rows[i][col] / rows[top][col]);
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[top][col] == 0) continue;
    if (rows[top][col] < 0) {
      for (auto& v : rows[top]) v = checked(-static_cast<__int128>(v));
    }
    for (std::size_t i = 0; i < top; ++i) row_sub(rows[i], rows[top], floor_div(rows[i][col], rows[top][col]));
    pivots.push_back(col);
    ++top;
  }
  rows.resize(top);
  return rows;
}

// |det| of a square integer matrix by fraction-free elimination.
inline std::int64_t abs_determinant(IntMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  __int128 prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        __int128 v = static_cast<__int128>(a[i][j]) * a[k][k] - static_cast<__int128>(a[i][k]) * a[k][j];
        a[i][j] = checked(v / prev);
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  std::int64_t d = a[n - 1][n - 1] * sign;
  return d < 0 ? -d : d;
}

}  // namespace detail

/// A subgroup of Z^d given by generators, stored in Hermite normal form so
/// that equal lattices have identical bases.
class Lattice {
 public:
  Lattice() = default;

  static Lattice from_generators(std::size_t ambient, IntMatrix generators) {
    Lattice l;
    l.ambient_ = ambient;
    l.basis_ = detail::hermite_form(std::move(generators), ambient);
    return l;
  }

  std::size_t ambient() const { return ambient_; }
  std::size_t rank() const { return basis_.size(); }
  const IntMatrix& basis() const { return basis_; }

  /// Integer coordinates of v in the basis, if v lies in the lattice.
  std::optional<IntVector> coordinates(IntVector v) const {
    detail::require(v.size() == ambient_, ErrorCode::InvalidArgument, "vector has wrong length");
    IntVector coeff(basis_.size(), 0);
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      std::size_t col = pivot(i);
      // Entries left of this pivot must already be cleared.
      for (std::size_t j = 0; j < col; ++j) {
        if (v[j] != 0) return std::nullopt;
      }
      if (v[col] % basis_[i][col] != 0) return std::nullopt;
      coeff[i] = v[col] / basis_[i][col];
      detail::row_sub(v, basis_[i], coeff[i]);
    }
    for (auto x : v) {
      if (x != 0) return std::nullopt;
    }
    return coeff;
  }

  bool contains(const IntVector& v) const { return coordinates(v).has_value(); }

  bool operator==(const Lattice& o) const { return ambient_ == o.ambient_ && basis_ == o.basis_; }

 private:
  std::size_t pivot(std::size_t row) const {
    std::size_t c = 0;
    while (basis_[row][c] == 0) ++c;
    return c;
  }

  std::size_t ambient_ = 0;
  IntMatrix basis_;
};

inline Lattice lattice_sum(const Lattice& a, const Lattice& b) {
  detail::require(a.ambient() == b.ambient(), ErrorCode::InvalidArgument, "ambient ranks differ");
  IntMatrix rows = a.basis();
  rows.insert(rows.end(), b.basis().begin(), b.basis().end());
  return Lattice::from_generators(a.ambient(), std::move(rows));
}

/// L1 intersect L2: the echelon form of the rows (b1, b1) and (b2, 0) ends
/// with rows (0, v), and those v generate the intersection.
inline Lattice lattice_intersect(const Lattice& a, const Lattice& b) {
  detail::require(a.ambient() == b.ambient(), ErrorCode::InvalidArgument, "ambient ranks differ");
  const std::size_t d = a.ambient();
  IntMatrix rows;
  for (const auto& r : a.basis()) {
    IntVector row(r);
    row.insert(row.end(), r.begin(), r.end());
    rows.push_back(std::move(row));
  }
  for (const auto& r : b.basis()) {
    IntVector row(r);
    row.resize(2 * d, 0);
    rows.push_back(std::move(row));
  }
  auto h = detail::hermite_form(std::move(rows), 2 * d);
  IntMatrix gens;
  for (const auto& r : h) {
    if (std::all_of(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(d), [](std::int64_t v) { return v == 0; })) {
      gens.emplace_back(r.begin() + static_cast<std::ptrdiff_t>(d), r.end());
    }
  }
  return Lattice::from_generators(d, std::move(gens));
}

/// |sup : sub| when sub is a full-rank sublattice of sup; nullopt when the
/// index is infinite.
inline std::optional<std::int64_t> lattice_index(const Lattice& sup, const Lattice& sub) {
  detail::require(sup.ambient() == sub.ambient(), ErrorCode::InvalidArgument, "ambient ranks differ");
  if (sup.rank() != sub.rank()) return std::nullopt;
  IntMatrix coords;
  for (const auto& r : sub.basis()) {
    auto c = sup.coordinates(r);
    if (!c) return std::nullopt;
    coords.push_back(*c);
  }
  return detail::abs_determinant(coords);
}

/// Both indices over the intersection are finite, i.e. the rational spans agree.
inline bool commensurable(const Lattice& a, const Lattice& b) {
  return a.rank() == b.rank() && lattice_sum(a, b).rank() == a.rank();
}

struct CommensurabilityClass {
  std::vector<std::size_t> members;  // indices into the input list
  Lattice omega;                     // intersection of the members
};

inline std::vector<CommensurabilityClass> commensurability_classes(const std::vector<Lattice>& lattices) {
  std::vector<CommensurabilityClass> classes;
  for (std::size_t i = 0; i < lattices.size(); ++i) {
    bool placed = false;
    for (auto& c : classes) {
      if (commensurable(lattices[c.members.front()], lattices[i])) {
        c.members.push_back(i);
        c.omega = lattice_intersect(c.omega, lattices[i]);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({{i}, lattices[i]});
  }
  return classes;
}

}  // namespace cosetring
