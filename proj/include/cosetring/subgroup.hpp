#pragma once

#include <algorithm>
#include <deque>
#include <vector>

#include "cosetring/function.hpp"
#include "cosetring/group.hpp"

namespace cosetring {

/// A subgroup stored both as its sorted element set and a generating list.
class Subgroup {
 public:
  Subgroup() = default;

  /// Smallest subgroup containing the given elements (breadth-first closure).
  static Subgroup generated_by(const FiniteAbelianGroup& g, std::vector<Index> generators) {
    for (auto s : generators) {
      detail::require(s < g.size(), ErrorCode::InvalidArgument, "generator out of range");
    }
    std::vector<char> seen(g.size(), 0);
    std::deque<Index> queue{0};
    seen[0] = 1;
    std::vector<Index> elements;
    while (!queue.empty()) {
      Index x = queue.front();
      queue.pop_front();
      elements.push_back(x);
      for (auto s : generators) {
        Index y = g.add(x, s);
        if (!seen[y]) {
          seen[y] = 1;
          queue.push_back(y);
        }
      }
    }
    std::sort(elements.begin(), elements.end());
    return Subgroup(g, std::move(elements), std::move(generators));
  }

  /// Validates that the set is a subgroup and derives a generating list.
  static Subgroup from_elements(const FiniteAbelianGroup& g, std::vector<Index> elements) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    detail::require(!elements.empty() && elements.front() == 0, ErrorCode::InvalidArgument,
                    "subgroup must contain the identity");
    std::vector<char> member(g.size(), 0);
    for (auto x : elements) member.at(x) = 1;
    for (auto a : elements) {
      for (auto b : elements) {
        detail::require(member[g.add(a, b)], ErrorCode::InvalidArgument, "set is not closed under addition");
      }
    }
    std::vector<Index> gens;
    std::vector<char> reached(g.size(), 0);
    reached[0] = 1;
    for (auto x : elements) {
      if (reached[x]) continue;
      gens.push_back(x);
      auto h = generated_by(g, gens);
      for (auto y : h.elements()) reached[y] = 1;
    }
    return Subgroup(g, std::move(elements), std::move(gens));
  }

  static Subgroup trivial(const FiniteAbelianGroup& g) { return Subgroup(g, {0}, {}); }

  static Subgroup whole(const FiniteAbelianGroup& g) {
    std::vector<Index> gens;
    for (std::size_t i = 0; i < g.rank(); ++i) gens.push_back(g.stride(i));
    return generated_by(g, std::move(gens));
  }

  const FiniteAbelianGroup& group() const { return group_; }
  const std::vector<Index>& elements() const { return elements_; }
  const std::vector<Index>& generators() const { return generators_; }
  std::size_t size() const { return elements_.size(); }

  /// Generators in order, skipping each one already reached by the earlier ones.
  std::vector<Index> reduced_generators() const {
    std::vector<Index> gens;
    std::vector<char> reached(group_.size(), 0);
    reached[0] = 1;
    std::size_t count = 1;
    for (auto s : generators_) {
      if (count == elements_.size()) break;
      if (reached[s]) continue;
      gens.push_back(s);
      auto h = generated_by(group_, gens);
      for (auto y : h.elements()) {
        if (!reached[y]) {
          reached[y] = 1;
          ++count;
        }
      }
    }
    return gens;
  }

  bool contains(Index x) const { return std::binary_search(elements_.begin(), elements_.end(), x); }

  /// Smallest element index of the coset x + H.
  Index coset_representative(Index x) const {
    Index best = x;
    for (auto h : elements_) best = std::min(best, group_.add(x, h));
    return best;
  }

  bool operator==(const Subgroup& o) const { return group_ == o.group_ && elements_ == o.elements_; }

 private:
  Subgroup(FiniteAbelianGroup g, std::vector<Index> elements, std::vector<Index> gens)
      : group_(std::move(g)), elements_(std::move(elements)), generators_(std::move(gens)) {}

  FiniteAbelianGroup group_;
  std::vector<Index> elements_;
  std::vector<Index> generators_;
};

/// H^perp = {gamma : gamma(h) = 1 for all h in H}, as a subgroup of the dual.
inline Subgroup annihilator(const Subgroup& H) {
  const auto& g = H.group();
  std::vector<Index> chars;
  for (Index chi = 0; chi < g.size(); ++chi) {
    bool ok = true;
    for (auto h : H.generators()) {
      if (g.phase(chi, h) != 0) {
        ok = false;
        break;
      }
    }
    if (ok) chars.push_back(chi);
  }
  return Subgroup::from_elements(g, std::move(chars));
}

/// Indicator function of the coset x + H.
inline GroupFunction coset_indicator(Index x, const Subgroup& H) {
  const auto& g = H.group();
  auto f = GroupFunction::zeros(g);
  for (auto h : H.elements()) f[g.add(x, h)] = 1.0;
  return f;
}

}  // namespace cosetring
