#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "cosetring/function.hpp"
#include "cosetring/group.hpp"

namespace cosetring {

inline constexpr std::size_t kDefaultDissociationCap = 16;

/// ||f||_A = sum_gamma |f^(gamma)|.
inline double algebra_norm(const GroupFunction& f) {
  auto F = dft(f);
  double acc = 0.0;
  for (auto z : F.values()) acc += std::abs(z);
  return acc;
}

struct SpectrumSet {
  double rho = 0.0;
  double base_norm = 0.0;  // ||f||_1
  std::vector<Index> members;
};

/// Spec_rho(f) = {gamma : |f^(gamma)| >= rho ||f||_1}. Membership is decided
/// with a relative slack of `tol` on the threshold to absorb transform rounding.
inline SpectrumSet spec(const GroupFunction& f, double rho, double tol = 1e-12) {
  detail::require(rho > 0.0 && rho <= 1.0, ErrorCode::InvalidArgument, "rho must lie in (0, 1]");
  SpectrumSet out;
  out.rho = rho;
  out.base_norm = l1_norm(f);
  auto F = dft(f);
  const double threshold = rho * out.base_norm * (1.0 - tol);
  for (Index chi = 0; chi < F.size(); ++chi) {
    if (std::abs(F[chi]) >= threshold) out.members.push_back(chi);
  }
  return out;
}

/// d(f, Z) = max_x distance from f(x) to the nearest integer (real part).
inline double distance_to_integers(const GroupFunction& f) {
  double d = 0.0;
  for (auto z : f.values()) d = std::max(d, std::abs(z.real() - std::nearbyint(z.real())));
  return d;
}

struct RoundingReport {
  GroupFunction rounded;  // f_Z
  double distance = 0.0;  // d(f, Z)
};

inline RoundingReport round_to_integers(const GroupFunction& f, double imag_tol = 1e-9) {
  detail::require(f.domain() == Domain::Primal, ErrorCode::DomainMismatch, "rounding expects a primal function");
  detail::require(f.max_imag() <= imag_tol, ErrorCode::InvalidArgument, "function is not real-valued");
  RoundingReport out;
  out.rounded = GroupFunction::zeros(f.group());
  for (Index x = 0; x < f.size(); ++x) {
    double v = f[x].real();
    double n = std::nearbyint(v);
    double dev = std::abs(v - n);
    if (dev >= 0.5 - 1e-12) {
      throw Error(ErrorCode::AmbiguousRounding, "value " + std::to_string(v) + " has no nearest integer");
    }
    out.rounded[x] = n;
    out.distance = std::max(out.distance, dev);
  }
  return out;
}

/// Rounded values as exact integers.
inline std::vector<std::int64_t> integer_values(const GroupFunction& f) {
  auto r = round_to_integers(f);
  std::vector<std::int64_t> out(f.size());
  for (Index x = 0; x < f.size(); ++x) out[x] = static_cast<std::int64_t>(r.rounded[x].real());
  return out;
}

struct DissociationResult {
  bool dissociated = true;
  /// On failure, a nontrivial vector in {-1,0,1}^m with sum eps_i a_i = 0.
  std::vector<int> witness;
};

namespace detail {

// Incrementally maintained epsilon-span <a_1, ..., a_k> with one
// representing sign vector per reached element.
class SignedSpan {
 public:
  SignedSpan(const FiniteAbelianGroup& g, std::size_t capacity)
      : group_(&g), capacity_(capacity), reached_(g.size(), 0), signs_(g.size()) {
    reached_[0] = 1;
    signs_[0].assign(capacity_, 0);
    members_.push_back(0);
  }

  bool contains(Index x) const { return reached_[x] != 0; }
  const std::vector<int8_t>& signs_of(Index x) const { return signs_[x]; }
  const std::vector<Index>& members() const { return members_; }
  std::size_t generators() const { return count_; }

  void adjoin(Index a) {
    const auto& g = *group_;
    std::vector<Index> snapshot = members_;
    for (int sign : {+1, -1}) {
      Index shift = sign > 0 ? a : g.neg(a);
      for (auto s : snapshot) {
        Index y = g.add(s, shift);
        if (reached_[y]) continue;
        reached_[y] = 1;
        signs_[y] = signs_[s];
        signs_[y][count_] = static_cast<int8_t>(sign);
        members_.push_back(y);
      }
    }
    ++count_;
  }

 private:
  const FiniteAbelianGroup* group_;
  std::size_t capacity_;
  std::size_t count_ = 0;
  std::vector<char> reached_;
  std::vector<std::vector<int8_t>> signs_;
  std::vector<Index> members_;
};

inline void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw Error(ErrorCode::CapExceeded,
                "set of size " + std::to_string(n) + " exceeds enumeration cap " + std::to_string(cap));
  }
}

}  // namespace detail

/// A list is dissociated iff each a_k lies outside <a_1, ..., a_{k-1}>.
inline DissociationResult is_dissociated(const FiniteAbelianGroup& g, const std::vector<Index>& a,
                                         std::size_t cap = kDefaultDissociationCap) {
  detail::check_cap(a.size(), cap);
  detail::SignedSpan span(g, a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (span.contains(a[k])) {
      DissociationResult r;
      r.dissociated = false;
      const auto& s = span.signs_of(a[k]);
      r.witness.assign(s.begin(), s.end());
      r.witness[k] = -1;
      return r;
    }
    span.adjoin(a[k]);
  }
  return {};
}

/// <A> = {sum eps_i a_i : eps_i in {-1, 0, 1}}, sorted.
inline std::vector<Index> span(const FiniteAbelianGroup& g, const std::vector<Index>& a,
                               std::size_t cap = kDefaultDissociationCap) {
  detail::check_cap(a.size(), cap);
  detail::SignedSpan s(g, a.size());
  for (auto x : a) s.adjoin(x);
  auto out = s.members();
  std::sort(out.begin(), out.end());
  return out;
}

struct ChangCover {
  std::vector<Index> lambda;  // dissociated, Gamma within <lambda>
  double size_bound = 0.0;    // 32 K ln(1/alpha)
  bool size_bound_exceeded = false;
};

/// Greedy cover: repeatedly adjoin the character outside the current span
/// whose adjunction covers the most elements of Gamma, smallest index on ties.
/// Adjoining an element outside the span keeps the set dissociated.
inline ChangCover chang_cover(const FiniteAbelianGroup& dual, std::vector<Index> gamma, double alpha, double K,
                              std::size_t cap = kDefaultDissociationCap) {
  detail::require(!gamma.empty(), ErrorCode::InvalidArgument, "Gamma must be nonempty");
  detail::require(alpha > 0.0 && alpha <= 1.0, ErrorCode::InvalidArgument, "alpha must lie in (0, 1]");
  detail::require(K >= 1.0, ErrorCode::InvalidArgument, "K must be >= 1");
  std::sort(gamma.begin(), gamma.end());
  gamma.erase(std::unique(gamma.begin(), gamma.end()), gamma.end());
  std::vector<char> in_gamma(dual.size(), 0);
  for (auto chi : gamma) in_gamma[chi] = 1;
  ChangCover out;
  detail::SignedSpan s(dual, cap);
  std::vector<std::size_t> mark(dual.size(), 0);
  std::size_t stamp = 0;
  while (true) {
    Index best = dual.size();
    std::size_t best_gain = 0;
    for (auto chi : gamma) {
      if (s.contains(chi)) continue;
      ++stamp;
      std::size_t gain = 0;
      for (auto m : s.members()) {
        for (Index y : {dual.add(m, chi), dual.sub(m, chi)}) {
          if (in_gamma[y] && !s.contains(y) && mark[y] != stamp) {
            mark[y] = stamp;
            ++gain;
          }
        }
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = chi;
      }
    }
    if (best == dual.size()) break;
    detail::check_cap(out.lambda.size() + 1, cap);
    out.lambda.push_back(best);
    s.adjoin(best);
  }
  std::sort(out.lambda.begin(), out.lambda.end());
  out.size_bound = 32.0 * K * std::log(1.0 / alpha);
  out.size_bound_exceeded = static_cast<double>(out.lambda.size()) > out.size_bound;
  return out;
}

struct RieszProduct {
  std::vector<Index> base;
  GroupFunction p;      // primal
  GroupFunction p_hat;  // dual
};

/// p^(gamma) = |G|^{-1} prod_i (1 + (gamma(a_i) + conj gamma(a_i)) / 2).
///
/// The 1/|G| factor makes p(x) = sum over eps with sum eps_i a_i = x of
/// 2^{-|eps|}, so that sum_gamma p^ = p(0) = 1 and p(a_i) >= 1/2.
inline RieszProduct riesz_product(const FiniteAbelianGroup& g, const std::vector<Index>& a,
                                  std::size_t cap = kDefaultDissociationCap) {
  auto d = is_dissociated(g, a, cap);
  detail::require(d.dissociated, ErrorCode::NotDissociated, "Riesz product needs a dissociated base");
  std::vector<Complex> hat(g.size(), 1.0 / static_cast<double>(g.size()));
  for (auto ai : a) {
    for (Index chi = 0; chi < g.size(); ++chi) {
      hat[chi] *= 1.0 + g.unit_root(g.phase(chi, ai)).real();
    }
  }
  RieszProduct out;
  out.base = a;
  out.p_hat = GroupFunction(g, std::move(hat), Domain::Dual);
  out.p = inverse_dft(out.p_hat);
  return out;
}

/// Number of (a1, a2, a3, a4) in A^4 with a1 + a2 = a3 + a4, via the
/// representation-count histogram of A + A.
inline std::uint64_t additive_energy(const FiniteAbelianGroup& g, std::vector<Index> a) {
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::vector<std::uint64_t> reps(g.size(), 0);
  for (auto x : a) {
    for (auto y : a) ++reps[g.add(x, y)];
  }
  std::uint64_t e = 0;
  for (auto r : reps) e += r * r;
  return e;
}

/// |G|^3 ||1_A^||_4^4, the Fourier-side value of the additive energy.
inline double fourier_energy(const FiniteAbelianGroup& g, const std::vector<Index>& a) {
  auto F = dft(GroupFunction::indicator(g, a));
  double acc = 0.0;
  for (auto z : F.values()) acc += std::pow(std::norm(z), 2);
  double n = static_cast<double>(g.size());
  return acc * n * n * n;
}

/// A + B as a sorted element list.
inline std::vector<Index> sumset(const FiniteAbelianGroup& g, const std::vector<Index>& a,
                                 const std::vector<Index>& b) {
  std::vector<char> hit(g.size(), 0);
  for (auto x : a) {
    for (auto y : b) hit[g.add(x, y)] = 1;
  }
  std::vector<Index> out;
  for (Index z = 0; z < g.size(); ++z) {
    if (hit[z]) out.push_back(z);
  }
  return out;
}

inline std::vector<Index> negated(const FiniteAbelianGroup& g, const std::vector<Index>& a) {
  std::vector<Index> out;
  out.reserve(a.size());
  for (auto x : a) out.push_back(g.neg(x));
  std::sort(out.begin(), out.end());
  return out;
}

/// K = |A + A| / |A|.
inline double doubling_constant(const FiniteAbelianGroup& g, const std::vector<Index>& a) {
  detail::require(!a.empty(), ErrorCode::InvalidArgument, "doubling constant of the empty set");
  return static_cast<double>(sumset(g, a, a).size()) / static_cast<double>(a.size());
}

}  // namespace cosetring
