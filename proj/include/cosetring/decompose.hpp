#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "cosetring/bourgain.hpp"
#include "cosetring/freiman.hpp"
#include "cosetring/refine.hpp"
#include "cosetring/spectral.hpp"
#include "cosetring/subgroup.hpp"

namespace cosetring {

struct CosetPiece {
  int sign = 1;
  Index rep = 0;
  Subgroup subgroup;
};

enum class Branch { NormDrop, CosetSum, Degenerate };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::NormDrop: return "norm-drop";
    case Branch::CosetSum: return "coset-sum";
    case Branch::Degenerate: return "degenerate";
  }
  return "unknown";
}

struct SplitConfig {
  ConcentrationConfig concentration;
  std::size_t probe_count = kDefaultProbeCount;
};

struct SplitReport {
  Branch branch = Branch::Degenerate;
  double epsilon = 0.0;
  double M = 0.0;
  double norm_f = 0.0;
  double norm_f1 = 0.0;
  double norm_f2 = 0.0;
  double distance_f = 0.0;
  double distance_f1 = 0.0;
  double distance_f2 = 0.0;
  bool norm_split_ok = false;  // ||f||_A = ||f1||_A + ||f2||_A
  bool ii_ok = false;
  bool iii_ok = false;
  bool constancy_ok = false;  // coset-sum branch only
  bool dense_path = false;
  std::size_t refine_iterations = 0;
  double system_dimension = 0.0;
  std::size_t subgroup_size = 0;
};

struct SplitResult {
  GroupFunction f1;
  GroupFunction f2;
  SplitReport report;
  std::optional<Subgroup> subgroup;
  std::vector<CosetPiece> pieces;  // (f1)_Z on the coset-sum branch
};

namespace detail {

inline std::vector<CosetPiece> pieces_from_values(const Subgroup& H, const std::vector<std::int64_t>& values) {
  std::vector<CosetPiece> out;
  const auto& g = H.group();
  std::vector<char> seen(g.size(), 0);
  for (Index x = 0; x < g.size(); ++x) {
    if (seen[x]) continue;
    for (auto h : H.elements()) seen[g.add(x, h)] = 1;
    std::int64_t v = values[x];
    for (std::int64_t k = 0; k < std::abs(v); ++k) out.push_back({v > 0 ? 1 : -1, x, H});
  }
  return out;
}

}  // namespace detail

/// f = f1 + f2 with f1 = psi_{S'} f for the concentrated, refined system S'.
/// Either ||f1||_A <= ||f||_A - 1/2 (norm-drop) or f_Z is constant on cosets
/// of H = <X'_{eps/20dM}> and (f1)_Z is the matching signed coset sum.
/// Throws SplitFailed when neither branch certifies.
inline SplitResult inductive_step(const GroupFunction& f, double epsilon, double M, const SplitConfig& cfg = {}) {
  const auto& g = f.group();
  SplitResult out;
  auto& rep = out.report;
  rep.epsilon = epsilon;
  rep.M = M;
  rep.norm_f = algebra_norm(f);
  rep.distance_f = distance_to_integers(f);
  detail::require(M >= 1.0 && rep.norm_f <= M + 1e-9, ErrorCode::InvalidArgument, "need ||f||_A <= M with M >= 1");
  auto fz = integer_values(f);
  if (std::all_of(fz.begin(), fz.end(), [](std::int64_t v) { return v == 0; })) {
    out.f1 = GroupFunction::zeros(g);
    out.f2 = f;
    rep.branch = Branch::Degenerate;
    rep.norm_f2 = rep.norm_f;
    rep.distance_f2 = rep.distance_f;
    rep.norm_split_ok = rep.ii_ok = rep.iii_ok = true;
    return out;
  }

  RefinementResult refined;
  try {
    auto conc = concentration_system(f, M, cfg.concentration);
    rep.dense_path = conc.report.dense_path;
    refined = refine_system(f, conc.system, epsilon, M, cfg.probe_count);
  } catch (const Error& e) {
    throw Error(ErrorCode::SplitFailed, e.what());
  }
  rep.refine_iterations = refined.certificate.iterations;
  const auto& S = refined.system;
  rep.system_dimension = S.dimension();

  out.f1 = detail::real_part(psi_apply(S, f));
  out.f2 = f - out.f1;
  rep.norm_f1 = algebra_norm(out.f1);
  rep.norm_f2 = algebra_norm(out.f2);
  rep.distance_f1 = distance_to_integers(out.f1);
  rep.distance_f2 = distance_to_integers(out.f2);
  rep.norm_split_ok = std::abs(rep.norm_f - rep.norm_f1 - rep.norm_f2) <= 1e-9 * std::max(1.0, rep.norm_f);
  rep.ii_ok = rep.norm_f2 <= rep.norm_f - 0.5 + 1e-9;
  rep.iii_ok = rep.distance_f1 <= rep.distance_f + epsilon + 1e-12 &&
               rep.distance_f2 <= 2.0 * rep.distance_f + epsilon + 1e-12;
  if (!rep.ii_ok || !rep.iii_ok) {
    throw Error(ErrorCode::SplitFailed, rep.ii_ok ? "almost-integrality not preserved" : "||f2||_A did not drop by 1/2");
  }

  if (rep.norm_f1 <= rep.norm_f - 0.5 + 1e-9) {
    rep.branch = Branch::NormDrop;
    return out;
  }

  rep.branch = Branch::CosetSum;
  const double d = std::max(S.dimension(), 2.0);
  auto H = Subgroup::generated_by(g, S.level(epsilon / (20.0 * d * M)));
  rep.subgroup_size = H.size();
  auto f1z = integer_values(out.f1);
  rep.constancy_ok = f1z == fz;
  for (Index x = 0; x < g.size() && rep.constancy_ok; ++x) {
    for (auto h : H.generators()) {
      if (fz[g.add(x, h)] != fz[x]) {
        rep.constancy_ok = false;
        break;
      }
    }
  }
  if (!rep.constancy_ok) throw Error(ErrorCode::SplitFailed, "f_Z is not constant on cosets of H");
  out.pieces = detail::pieces_from_values(H, fz);
  out.subgroup = std::move(H);
  return out;
}

struct SplitLogEntry {
  std::size_t node = 0;
  std::size_t parent = 0;
  std::size_t depth = 0;
  double norm = 0.0;
  double distance = 0.0;
  std::string outcome;  // norm-drop | coset-sum | zero | split-failed | depth-cap
  std::string detail;
};

struct DecompositionCertificate {
  bool exact = false;
  std::size_t L = 0;
  std::size_t leaves = 0;
  std::size_t distinct_subgroups = 0;
  double algebra_norm = 0.0;
  double M = 0.0;
  double epsilon = 0.0;
  bool structured_path = true;
  bool singleton_fallback = false;
  bool dense_path = false;
  bool residual_patch = false;
  double max_leaf_distance = 0.0;
  double distance_budget = 0.0;  // 2^{2M} eps
  std::size_t leaf_bound = 0;    // 2^{2M-1}
  std::size_t distinct_bound = 0;  // floor(||f||_A + 1/100)
  bool distinct_ok = false;
  bool leaves_ok = false;
  std::vector<SplitLogEntry> log;
};

struct CosetDecomposition {
  FiniteAbelianGroup group;
  std::vector<CosetPiece> pieces;
  DecompositionCertificate certificate;
};

struct VerificationReport {
  bool exact = false;
  std::optional<Index> mismatch;
  std::int64_t expected = 0;
  std::int64_t actual = 0;
  std::size_t L = 0;
  std::size_t distinct_subgroups = 0;
  double algebra_norm = 0.0;
  std::size_t distinct_bound = 0;
  bool distinct_ok = false;
};

namespace detail {

inline std::size_t count_distinct_subgroups(const std::vector<CosetPiece>& pieces) {
  std::set<std::vector<Index>> seen;
  for (const auto& p : pieces) seen.insert(p.subgroup.elements());
  return seen.size();
}

inline std::vector<std::int64_t> recombine(const FiniteAbelianGroup& g, const std::vector<CosetPiece>& pieces) {
  std::vector<std::int64_t> sum(g.size(), 0);
  for (const auto& p : pieces) {
    for (auto h : p.subgroup.elements()) sum[g.add(p.rep, h)] += p.sign;
  }
  return sum;
}

inline std::size_t distinct_bound(double anorm) {
  return static_cast<std::size_t>(std::floor(anorm + 0.01 + 1e-9));
}

}  // namespace detail

/// Checks f = sum of the signed coset indicators in exact integer arithmetic
/// and recounts the certificate quantities.
inline VerificationReport verify_decomposition(const GroupFunction& f, const std::vector<CosetPiece>& pieces) {
  const auto& g = f.group();
  VerificationReport rep;
  for (const auto& p : pieces) {
    require_same_group(g, p.subgroup.group());
    detail::require(p.sign == 1 || p.sign == -1, ErrorCode::InvalidArgument, "piece sign must be +1 or -1");
    detail::require(p.rep < g.size(), ErrorCode::InvalidArgument, "piece representative out of range");
  }
  auto sum = detail::recombine(g, pieces);
  rep.exact = true;
  for (Index x = 0; x < g.size(); ++x) {
    double v = f[x].real();
    auto expected = static_cast<std::int64_t>(std::llround(v));
    bool integral = std::abs(v - static_cast<double>(expected)) <= 1e-9 && std::abs(f[x].imag()) <= 1e-9;
    if (!integral || expected != sum[x]) {
      rep.exact = false;
      rep.mismatch = x;
      rep.expected = expected;
      rep.actual = sum[x];
      break;
    }
  }
  rep.L = pieces.size();
  rep.distinct_subgroups = detail::count_distinct_subgroups(pieces);
  rep.algebra_norm = algebra_norm(f);
  rep.distinct_bound = detail::distinct_bound(rep.algebra_norm);
  rep.distinct_ok = rep.distinct_subgroups <= rep.distinct_bound;
  return rep;
}

struct DecomposeConfig {
  double epsilon = 0.0;  // 0 selects 2^{-4M-2}
  SplitConfig split;
};

/// Signed coset decomposition of an integer-valued f.
///
/// Pieces are split by the inductive step in order of decreasing A-norm, to
/// depth 2M - 1. Leaves whose rounding vanishes are dropped; leaves that
/// cannot be split are written as signed singletons. The sum is checked
/// exactly and any residual is patched with singletons, so the result is
/// always exact; the certificate records which guarantees survived.
inline CosetDecomposition decompose(const GroupFunction& f, const DecomposeConfig& cfg = {}) {
  const auto& g = f.group();
  detail::require(f.domain() == Domain::Primal, ErrorCode::DomainMismatch, "decompose expects a primal function");
  detail::require(f.max_imag() <= 1e-9 && distance_to_integers(f) <= 1e-9, ErrorCode::InvalidArgument,
                  "decompose expects an integer-valued function");
  auto target = integer_values(f);
  auto fr = GroupFunction::zeros(g);
  for (Index x = 0; x < g.size(); ++x) fr[x] = static_cast<double>(target[x]);

  CosetDecomposition out;
  out.group = g;
  auto& cert = out.certificate;
  cert.algebra_norm = algebra_norm(fr);
  cert.M = std::max(1.0, std::ceil(cert.algebra_norm - 1e-9));
  cert.epsilon = cfg.epsilon > 0.0 ? cfg.epsilon : std::exp2(-4.0 * cert.M - 2.0);
  cert.distance_budget = std::exp2(2.0 * cert.M) * cert.epsilon;
  cert.leaf_bound = static_cast<std::size_t>(std::exp2(2.0 * cert.M - 1.0));
  cert.distinct_bound = detail::distinct_bound(cert.algebra_norm);
  const auto depth_cap = static_cast<std::size_t>(2.0 * cert.M - 1.0);

  struct Node {
    double norm;
    std::size_t id;
    std::size_t parent;
    std::size_t depth;
    GroupFunction h;
  };
  auto cmp = [](const Node& a, const Node& b) { return a.norm < b.norm || (a.norm == b.norm && a.id > b.id); };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> queue(cmp);
  std::size_t next_id = 0;
  queue.push({cert.algebra_norm, next_id++, 0, 0, fr});

  auto singleton_leaf = [&](const GroupFunction& h) {
    auto vals = integer_values(h);
    auto pieces = detail::pieces_from_values(Subgroup::trivial(g), vals);
    out.pieces.insert(out.pieces.end(), pieces.begin(), pieces.end());
    cert.singleton_fallback = true;
    cert.structured_path = false;
    cert.max_leaf_distance = std::max(cert.max_leaf_distance, distance_to_integers(h));
    ++cert.leaves;
  };

  while (!queue.empty()) {
    Node node = queue.top();
    queue.pop();
    SplitLogEntry entry{node.id, node.parent, node.depth, node.norm, distance_to_integers(node.h), "", ""};
    std::vector<std::int64_t> hz;
    try {
      hz = integer_values(node.h);
    } catch (const Error& e) {
      entry.outcome = "split-failed";
      entry.detail = e.what();
      cert.log.push_back(entry);
      cert.structured_path = false;
      cert.singleton_fallback = true;
      continue;  // the residual patch accounts for this leaf
    }
    if (std::all_of(hz.begin(), hz.end(), [](std::int64_t v) { return v == 0; })) {
      entry.outcome = "zero";
      cert.log.push_back(entry);
      continue;
    }
    if (node.depth >= depth_cap) {
      entry.outcome = "depth-cap";
      cert.log.push_back(entry);
      singleton_leaf(node.h);
      continue;
    }
    try {
      auto split = inductive_step(node.h, cert.epsilon, cert.M, cfg.split);
      cert.dense_path = cert.dense_path || split.report.dense_path;
      entry.outcome = to_string(split.report.branch);
      if (split.report.branch == Branch::CosetSum) {
        entry.detail = "|H|=" + std::to_string(split.report.subgroup_size);
        out.pieces.insert(out.pieces.end(), split.pieces.begin(), split.pieces.end());
        cert.max_leaf_distance = std::max(cert.max_leaf_distance, split.report.distance_f1);
        ++cert.leaves;
        queue.push({split.report.norm_f2, next_id++, node.id, node.depth + 1, split.f2});
      } else {
        queue.push({split.report.norm_f1, next_id++, node.id, node.depth + 1, split.f1});
        queue.push({split.report.norm_f2, next_id++, node.id, node.depth + 1, split.f2});
      }
      cert.log.push_back(entry);
    } catch (const Error& e) {
      entry.outcome = "split-failed";
      entry.detail = e.what();
      cert.log.push_back(entry);
      singleton_leaf(node.h);
    }
  }

  auto sum = detail::recombine(g, out.pieces);
  std::vector<std::int64_t> residual(g.size());
  bool mismatch = false;
  for (Index x = 0; x < g.size(); ++x) {
    residual[x] = target[x] - sum[x];
    mismatch = mismatch || residual[x] != 0;
  }
  if (mismatch) {
    auto patch = detail::pieces_from_values(Subgroup::trivial(g), residual);
    out.pieces.insert(out.pieces.end(), patch.begin(), patch.end());
    cert.residual_patch = true;
    cert.singleton_fallback = true;
    cert.structured_path = false;
  }

  auto check = verify_decomposition(fr, out.pieces);
  cert.exact = check.exact;
  cert.L = out.pieces.size();
  cert.distinct_subgroups = check.distinct_subgroups;
  cert.distinct_ok = cert.distinct_subgroups <= cert.distinct_bound;
  cert.leaves_ok = cert.leaves <= cert.leaf_bound;
  return out;
}

}  // namespace cosetring
