#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "cosetring/error.hpp"
#include "cosetring/fft.hpp"
#include "cosetring/group.hpp"

namespace cosetring {

using Complex = std::complex<double>;

/// Primal functions live on G with the normalised measure E_x; dual functions
/// live on the character group with counting measure.
enum class Domain { Primal, Dual };

class GroupFunction {
 public:
  GroupFunction() = default;

  GroupFunction(FiniteAbelianGroup group, std::vector<Complex> values, Domain domain = Domain::Primal)
      : group_(std::move(group)), values_(std::move(values)), domain_(domain) {
    detail::require(values_.size() == group_.size(), ErrorCode::InvalidArgument,
                    "value count does not match group size");
  }

  static GroupFunction zeros(const FiniteAbelianGroup& group, Domain domain = Domain::Primal) {
    return GroupFunction(group, std::vector<Complex>(group.size()), domain);
  }

  static GroupFunction constant(const FiniteAbelianGroup& group, Complex c,
                                Domain domain = Domain::Primal) {
    return GroupFunction(group, std::vector<Complex>(group.size(), c), domain);
  }

  static GroupFunction from_real(const FiniteAbelianGroup& group, std::span<const double> values,
                                 Domain domain = Domain::Primal) {
    std::vector<Complex> v(values.begin(), values.end());
    return GroupFunction(group, std::move(v), domain);
  }

  /// Indicator of a set of element indices.
  static GroupFunction indicator(const FiniteAbelianGroup& group, std::span<const Index> elements) {
    auto f = zeros(group);
    for (auto x : elements) f.values_.at(x) = 1.0;
    return f;
  }

  const FiniteAbelianGroup& group() const { return group_; }
  Domain domain() const { return domain_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<Complex>& values() const { return values_; }
  std::vector<Complex>& values() { return values_; }
  Complex operator[](Index i) const { return values_[i]; }
  Complex& operator[](Index i) { return values_[i]; }

  std::vector<double> real_values() const {
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(), [](Complex z) { return z.real(); });
    return out;
  }

  double max_imag() const {
    double m = 0.0;
    for (auto z : values_) m = std::max(m, std::abs(z.imag()));
    return m;
  }

  GroupFunction map(const std::function<Complex(Complex)>& fn) const {
    GroupFunction out = *this;
    for (auto& z : out.values_) z = fn(z);
    return out;
  }

  GroupFunction& operator+=(const GroupFunction& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  GroupFunction& operator-=(const GroupFunction& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  GroupFunction& operator*=(Complex c) {
    for (auto& z : values_) z *= c;
    return *this;
  }

  friend GroupFunction operator+(GroupFunction a, const GroupFunction& b) { return a += b; }
  friend GroupFunction operator-(GroupFunction a, const GroupFunction& b) { return a -= b; }
  friend GroupFunction operator*(GroupFunction a, Complex c) { return a *= c; }
  friend GroupFunction operator*(Complex c, GroupFunction a) { return a *= c; }

  /// Pointwise product.
  friend GroupFunction hadamard(const GroupFunction& a, const GroupFunction& b) {
    a.check_compatible(b);
    GroupFunction out = a;
    for (std::size_t i = 0; i < out.values_.size(); ++i) out.values_[i] *= b.values_[i];
    return out;
  }

 private:
  void check_compatible(const GroupFunction& o) const {
    require_same_group(group_, o.group_);
    detail::require(domain_ == o.domain_, ErrorCode::DomainMismatch, "mixing primal and dual functions");
  }

  FiniteAbelianGroup group_;
  std::vector<Complex> values_;
  Domain domain_ = Domain::Primal;
};

/// L^p norm with the measure of the function's domain (E_x on G, sum on the dual).
inline double norm(const GroupFunction& f, double p) {
  double acc = 0.0;
  for (auto z : f.values()) acc += std::pow(std::abs(z), p);
  if (f.domain() == Domain::Primal) acc /= static_cast<double>(f.size());
  return std::pow(acc, 1.0 / p);
}

inline double sup_norm(const GroupFunction& f) {
  double m = 0.0;
  for (auto z : f.values()) m = std::max(m, std::abs(z));
  return m;
}

inline double l1_norm(const GroupFunction& f) { return norm(f, 1.0); }

/// Mean (primal) or total (dual) of the function.
inline Complex integral(const GroupFunction& f) {
  Complex acc = 0.0;
  for (auto z : f.values()) acc += z;
  if (f.domain() == Domain::Primal) acc /= static_cast<double>(f.size());
  return acc;
}

namespace detail {

// Row-column transform: a 1-D DFT along every cyclic axis.
inline void transform_axes(const FiniteAbelianGroup& g, std::vector<Complex>& data, int sign) {
  std::vector<Complex> line;
  for (std::size_t axis = 0; axis < g.rank(); ++axis) {
    auto n = static_cast<std::size_t>(g.orders()[axis]);
    if (n == 1) continue;
    std::size_t stride = g.stride(axis);
    Fft1D plan(n);
    line.resize(n);
    std::size_t block = stride * n;
    for (std::size_t base = 0; base < g.size(); base += block) {
      for (std::size_t off = 0; off < stride; ++off) {
        std::size_t start = base + off;
        for (std::size_t k = 0; k < n; ++k) line[k] = data[start + k * stride];
        plan.transform(line.data(), sign);
        for (std::size_t k = 0; k < n; ++k) data[start + k * stride] = line[k];
      }
    }
  }
}

}  // namespace detail

/// Fourier transform f^(gamma) = E_x f(x) conj(gamma(x)).
inline GroupFunction dft(const GroupFunction& f) {
  detail::require(f.domain() == Domain::Primal, ErrorCode::DomainMismatch, "dft expects a primal function");
  std::vector<Complex> data = f.values();
  detail::transform_axes(f.group(), data, -1);
  const double scale = 1.0 / static_cast<double>(f.size());
  for (auto& z : data) z *= scale;
  return GroupFunction(f.group(), std::move(data), Domain::Dual);
}

/// Inversion f(x) = sum_gamma F(gamma) gamma(x).
inline GroupFunction inverse_dft(const GroupFunction& F) {
  detail::require(F.domain() == Domain::Dual, ErrorCode::DomainMismatch,
                  "inverse_dft expects a dual function");
  std::vector<Complex> data = F.values();
  detail::transform_axes(F.group(), data, +1);
  return GroupFunction(F.group(), std::move(data), Domain::Primal);
}

/// f * g (t) = E_x f(x) g(t - x), computed through the convolution identity.
inline GroupFunction convolve(const GroupFunction& f, const GroupFunction& g) {
  require_same_group(f.group(), g.group());
  detail::require(f.domain() == Domain::Primal && g.domain() == Domain::Primal, ErrorCode::DomainMismatch,
                  "convolve expects primal functions");
  return inverse_dft(hadamard(dft(f), dft(g)));
}

/// x -> f(x + t).
inline GroupFunction translate(const GroupFunction& f, Index t) {
  GroupFunction out = GroupFunction::zeros(f.group(), f.domain());
  for (Index x = 0; x < f.size(); ++x) out[x] = f[f.group().add(x, t)];
  return out;
}

/// x -> f(-x).
inline GroupFunction reflect(const GroupFunction& f) {
  GroupFunction out = GroupFunction::zeros(f.group(), f.domain());
  for (Index x = 0; x < f.size(); ++x) out[x] = f[f.group().neg(x)];
  return out;
}

/// The character gamma as a primal function.
inline GroupFunction character_function(const FiniteAbelianGroup& g, Index chi) {
  auto ph = g.phases(chi);
  std::vector<Complex> v(g.size());
  for (Index x = 0; x < g.size(); ++x) v[x] = g.unit_root(ph[x]);
  return GroupFunction(g, std::move(v));
}

inline double max_abs_diff(const GroupFunction& a, const GroupFunction& b) {
  require_same_group(a.group(), b.group());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace cosetring
