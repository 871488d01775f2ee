// Decompose an integer-valued function on Z/4 x Z/6 into signed coset
// indicators and check the result.

#include <iostream>
#include <vector>

#include "cosetring/cosetring.hpp"

using namespace cosetring;

int main() {
  FiniteAbelianGroup g({4, 6});
  auto H = Subgroup::generated_by(g, {g.index(std::vector<std::int64_t>{2, 0}), g.index(std::vector<std::int64_t>{0, 2})});
  auto K = Subgroup::generated_by(g, {g.index(std::vector<std::int64_t>{0, 3})});
  Index shift = g.index(std::vector<std::int64_t>{1, 1});

  // 1_H + 1_{shift + K}; its algebra norm is below 2 after cancellation.
  auto f = coset_indicator(0, H) + coset_indicator(shift, K);
  std::cout << "||f||_A = " << algebra_norm(f) << "\n";

  auto D = decompose(f);
  for (const auto& p : D.pieces) {
    auto c = g.coords(p.rep);
    std::cout << (p.sign > 0 ? "+ " : "- ") << "(" << c[0] << "," << c[1] << ") + subgroup of order " << p.subgroup.size() << "\n";
  }
  std::cout << "pieces: " << D.certificate.L << ", distinct subgroups: " << D.certificate.distinct_subgroups << "\n";

  auto check = verify_decomposition(f, D.pieces);
  std::cout << "exact: " << (check.exact ? "yes" : "no") << "\n";
  return check.exact ? 0 : 1;
}
