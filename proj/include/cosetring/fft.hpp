#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace cosetring::detail {

// Mixed-radix Cooley-Tukey DFT of a single length. Prime factors are handled
// by direct summation, so any length works; smooth lengths are fast.
class Fft1D {
 public:
  explicit Fft1D(std::size_t n) : n_(n), roots_(n) {
    for (std::size_t k = 0; k < n_; ++k) {
      // Mirror the upper half so that roots_[n-k] == conj(roots_[k]) exactly.
      std::size_t j = (2 * k <= n_) ? k : n_ - k;
      double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_);
      std::complex<double> w(std::cos(angle), std::sin(angle));
      roots_[k] = (2 * k <= n_) ? w : std::conj(w);
    }
    std::size_t m = n_;
    for (std::size_t p = 2; p * p <= m; ++p) {
      while (m % p == 0) {
        factors_.push_back(p);
        m /= p;
      }
    }
    if (m > 1) factors_.push_back(m);
    scratch_.resize(n_);
  }

  std::size_t size() const { return n_; }

  // In-place transform with kernel exp(sign * 2 pi i jk / n), unnormalized.
  void transform(std::complex<double>* data, int sign) {
    if (n_ <= 1) return;
    recurse(data, 1, scratch_.data(), n_, 0, sign);
    std::copy(scratch_.begin(), scratch_.end(), data);
  }

 private:
  // Root exp(sign * 2 pi i k / n_) for k taken mod n_.
  std::complex<double> root(std::size_t k, int sign) const {
    k %= n_;
    return sign > 0 ? roots_[k] : roots_[(n_ - k) % n_];
  }

  // Transform the length-len sequence in[0], in[stride], ... into out[0..len).
  void recurse(const std::complex<double>* in, std::size_t stride, std::complex<double>* out,
               std::size_t len, std::size_t depth, int sign) {
    if (len == 1) {
      out[0] = in[0];
      return;
    }
    std::size_t p = factors_[depth];
    std::size_t m = len / p;
    // Sub-transforms of the p decimated subsequences land in out[r*m ...].
    for (std::size_t r = 0; r < p; ++r) {
      recurse(in + r * stride, stride * p, out + r * m, m, depth + 1, sign);
    }
    // Butterfly: X[k + q m] = sum_r w_len^{r (k + q m)} Y_r[k].
    std::size_t root_step = n_ / len;
    std::vector<std::complex<double>> tmp(p);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t r = 0; r < p; ++r) tmp[r] = out[r * m + k];
      for (std::size_t q = 0; q < p; ++q) {
        std::size_t kk = k + q * m;
        std::complex<double> acc = tmp[0];
        for (std::size_t r = 1; r < p; ++r) {
          acc += root((r * kk % len) * root_step, sign) * tmp[r];
        }
        out[kk] = acc;
      }
      // Reading out[] for later k is safe: positions r*m+k' with k' > k are
      // untouched because each k only writes the indices k + q m.
    }
  }

  std::size_t n_;
  std::vector<std::complex<double>> roots_;
  std::vector<std::size_t> factors_;
  std::vector<std::complex<double>> scratch_;
};

}  // namespace cosetring::detail
