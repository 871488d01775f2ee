#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cosetring/error.hpp"

namespace cosetring {

using Index = std::size_t;

/// A finite abelian group Z/n_1 x ... x Z/n_k.
///
/// Elements and characters share the same mixed-radix index space
/// {0, ..., |G|-1}, with the last coordinate varying fastest. The character
/// with coordinates c acts by gamma_c(x) = e(sum_i c_i x_i / n_i), so the dual
/// group is identified with G itself.
class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() : FiniteAbelianGroup(std::vector<std::int64_t>{}) {}

  explicit FiniteAbelianGroup(std::vector<std::int64_t> orders) : orders_(std::move(orders)) {
    std::int64_t size = 1;
    std::int64_t exponent = 1;
    for (auto n : orders_) {
      detail::require(n >= 1, ErrorCode::InvalidArgument, "cyclic orders must be >= 1");
      size *= n;
      detail::require(size <= (std::int64_t{1} << 26), ErrorCode::InvalidArgument,
                      "group too large for dense representation");
      exponent = std::lcm(exponent, n);
    }
    size_ = static_cast<std::size_t>(size);
    exponent_ = exponent;
    strides_.assign(orders_.size(), 1);
    for (std::size_t i = orders_.size(); i-- > 1;) {
      strides_[i - 1] = strides_[i] * static_cast<std::size_t>(orders_[i]);
    }
    weights_.resize(orders_.size());
    for (std::size_t i = 0; i < orders_.size(); ++i) weights_[i] = exponent_ / orders_[i];

    auto tables = std::make_shared<Tables>();
    const auto L = static_cast<std::size_t>(exponent_);
    tables->unit.resize(L);
    tables->chord.resize(L);
    for (std::size_t k = 0; k < L; ++k) {
      // Mirror k > L/2 so that e(-k/L) == conj(e(k/L)) and chord(-k) == chord(k) bitwise.
      std::size_t j = (2 * k <= L) ? k : L - k;
      double t = static_cast<double>(j) / static_cast<double>(L);
      double angle = 2.0 * std::numbers::pi * t;
      std::complex<double> w(std::cos(angle), std::sin(angle));
      tables->unit[k] = (2 * k <= L) ? w : std::conj(w);
      tables->chord[k] = 2.0 * std::sin(std::numbers::pi * t);
    }
    tables->chord[0] = 0.0;
    tables->unit[0] = {1.0, 0.0};
    tables_ = std::move(tables);
  }

  const std::vector<std::int64_t>& orders() const { return orders_; }
  std::size_t rank() const { return orders_.size(); }
  std::size_t size() const { return size_; }
  /// Least common multiple of the cyclic orders.
  std::int64_t exponent() const { return exponent_; }
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }

  std::vector<std::int64_t> coords(Index idx) const {
    std::vector<std::int64_t> c(orders_.size());
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      c[i] = static_cast<std::int64_t>((idx / strides_[i]) % static_cast<std::size_t>(orders_[i]));
    }
    return c;
  }

  /// Index of the element with the given coordinates, reduced modulo the orders.
  Index index(std::span<const std::int64_t> c) const {
    detail::require(c.size() == orders_.size(), ErrorCode::InvalidArgument,
                    "coordinate vector has wrong length");
    Index idx = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      std::int64_t r = c[i] % orders_[i];
      if (r < 0) r += orders_[i];
      idx += static_cast<Index>(r) * strides_[i];
    }
    return idx;
  }

  Index add(Index a, Index b) const {
    Index out = 0;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      auto n = static_cast<std::size_t>(orders_[i]);
      std::size_t s = (a / strides_[i]) % n + (b / strides_[i]) % n;
      if (s >= n) s -= n;
      out += s * strides_[i];
    }
    return out;
  }

  Index neg(Index a) const {
    Index out = 0;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      auto n = static_cast<std::size_t>(orders_[i]);
      std::size_t r = (a / strides_[i]) % n;
      out += ((n - r) % n) * strides_[i];
    }
    return out;
  }

  Index sub(Index a, Index b) const { return add(a, neg(b)); }

  Index scale(Index a, std::int64_t k) const {
    auto c = coords(a);
    for (auto& v : c) v *= k;
    return index(c);
  }

  /// Phase numerator p with gamma_chi(x) = e(p / exponent()).
  std::int64_t phase(Index chi, Index x) const {
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      auto n = static_cast<std::size_t>(orders_[i]);
      auto ci = static_cast<std::int64_t>((chi / strides_[i]) % n);
      auto xi = static_cast<std::int64_t>((x / strides_[i]) % n);
      acc = (acc + (ci * xi % orders_[i]) * weights_[i]) % exponent_;
    }
    return acc;
  }

  /// Phases of one character at every element, in index order.
  std::vector<std::int64_t> phases(Index chi) const {
    std::vector<std::int64_t> out(size_);
    auto c = coords(chi);
    std::vector<std::int64_t> step(orders_.size());
    for (std::size_t i = 0; i < orders_.size(); ++i) step[i] = (c[i] * weights_[i]) % exponent_;
    // Odometer over x with a running phase; a full wrap of axis i adds
    // n_i * step[i] = c_i * exponent(), which is 0 modulo the exponent.
    std::vector<std::int64_t> x(orders_.size(), 0);
    std::int64_t ph = 0;
    for (Index idx = 0; idx < size_; ++idx) {
      out[idx] = ph;
      for (std::size_t i = orders_.size(); i-- > 0;) {
        ph = (ph + step[i]) % exponent_;
        if (++x[i] < orders_[i]) break;
        x[i] = 0;
      }
    }
    return out;
  }

  std::complex<double> unit_root(std::int64_t phase_numerator) const {
    return tables_->unit[static_cast<std::size_t>(phase_numerator)];
  }

  /// |1 - e(p / exponent())| for a phase numerator p.
  double chord(std::int64_t phase_numerator) const {
    return tables_->chord[static_cast<std::size_t>(phase_numerator)];
  }

  std::complex<double> character(Index chi, Index x) const { return unit_root(phase(chi, x)); }
  double distance_from_one(Index chi, Index x) const { return chord(phase(chi, x)); }

  bool operator==(const FiniteAbelianGroup& other) const { return orders_ == other.orders_; }

  std::string describe() const {
    std::string s = "G(";
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      if (i) s += "x";
      s += std::to_string(orders_[i]);
    }
    return s + ")";
  }

 private:
  struct Tables {
    std::vector<std::complex<double>> unit;
    std::vector<double> chord;
  };

  std::vector<std::int64_t> orders_;
  std::size_t size_ = 1;
  std::int64_t exponent_ = 1;
  std::vector<std::size_t> strides_;
  std::vector<std::int64_t> weights_;
  std::shared_ptr<const Tables> tables_;
};

inline void require_same_group(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
  detail::require(a == b, ErrorCode::GroupMismatch, a.describe() + " vs " + b.describe());
}

}  // namespace cosetring
