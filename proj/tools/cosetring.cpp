// cosetring command-line front end. Every subcommand reads JSON (a file path
// or "-" for stdin) and writes one sorted JSON document to stdout.
//
// Exit codes: 0 ok, 1 report-level failure, 2 usage error.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cosetring/config.hpp"
#include "cosetring/corpus.hpp"
#include "cosetring/cosetring.hpp"
#include "cosetring/io.hpp"

using namespace cosetring;
using io::Json;

namespace {

constexpr int kOk = 0;
constexpr int kReportFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json read_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

int emit(const Json& j, bool ok = true) {
  std::cout << j.dump(2) << '\n';
  return ok ? kOk : kReportFailure;
}

// Options shared by all subcommands; flags override the --config file.
struct Globals {
  std::string config_path;
  std::optional<double> epsilon;
  std::optional<std::size_t> max_m;
  std::optional<double> budget;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> probes;

  RunConfig resolve() const {
    RunConfig c;
    if (!config_path.empty()) merge_config(c, read_json(config_path));
    if (epsilon) c.epsilon = *epsilon;
    if (max_m) c.m_cap = *max_m;
    if (budget) c.budget = *budget;
    if (seed) c.seed = *seed;
    if (probes) c.probe_count = *probes;
    c.validate();
    return c;
  }
};

// A subset of a group: {"orders", "set"} or a function whose support is taken.
std::pair<FiniteAbelianGroup, std::vector<Index>> read_set(const Json& j) {
  if (j.contains("set")) {
    auto g = io::group_from_json(j);
    auto a = io::elements_from_json(g, j.at("set"));
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return {g, a};
  }
  auto f = io::function_from_json(j);
  std::vector<Index> a;
  for (Index x = 0; x < f.size(); ++x) {
    if (std::abs(f[x]) > 1e-9) a.push_back(x);
  }
  return {f.group(), a};
}

double auto_M(const GroupFunction& f) { return std::max(1.0, std::ceil(algebra_norm(f) - 1e-9)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coset-ring toolkit: Fourier analysis, Bourgain systems and coset decompositions on finite abelian groups"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals globals;
  app.add_option("--config", globals.config_path, "JSON run configuration; flags take precedence");
  app.add_option("--epsilon", globals.epsilon, "epsilon (default: 2^(-4M-2))");
  app.add_option("--max-m", globals.max_m, "cap on the connectedness parameter m");
  app.add_option("--budget", globals.budget, "enumeration budget");
  app.add_option("--seed", globals.seed, "seed for corpus generation");
  app.add_option("--probes", globals.probes, "number of rho probes in the averaging test");

  std::string input = "-";
  auto add_input = [&](CLI::App* sub) { sub->add_option("input", input, "input JSON file, '-' for stdin"); };

  std::function<int()> action;

  auto* dft_cmd = app.add_subcommand("dft", "Fourier transform of a function");
  add_input(dft_cmd);
  bool inverse = false;
  dft_cmd->add_flag("--inverse", inverse, "invert a dual-domain function");
  dft_cmd->callback([&] {
    action = [&] {
      auto f = io::function_from_json(read_json(input));
      return emit(io::function_json(inverse ? inverse_dft(f) : dft(f)));
    };
  });

  auto* anorm_cmd = app.add_subcommand("anorm", "algebra norm and distance to the integers");
  add_input(anorm_cmd);
  anorm_cmd->callback([&] {
    action = [&] {
      auto f = io::function_from_json(read_json(input));
      Json out = {{"A_norm", algebra_norm(f)}, {"l1", l1_norm(f)}, {"sup", sup_norm(f)}};
      if (f.max_imag() <= 1e-9) out["distance_to_integers"] = distance_to_integers(f);
      return emit(out);
    };
  });

  auto* spec_cmd = app.add_subcommand("spec", "large spectrum Spec_rho(f)");
  add_input(spec_cmd);
  double rho = 0.5;
  spec_cmd->add_option("--rho", rho, "threshold relative to ||f||_1")->capture_default_str();
  spec_cmd->callback([&] {
    action = [&] {
      auto f = io::function_from_json(read_json(input));
      auto s = spec(f, rho);
      return emit({{"rho", s.rho}, {"l1", s.base_norm}, {"members", s.members},
                   {"characters", io::elements_json(f.group(), s.members)}});
    };
  });

  auto* energy_cmd = app.add_subcommand("energy", "additive energy of a set");
  add_input(energy_cmd);
  energy_cmd->callback([&] {
    action = [&] {
      auto [g, a] = read_set(read_json(input));
      if (a.empty()) throw UsageError("set is empty");
      auto e = additive_energy(g, a);
      auto fe = fourier_energy(g, a);
      return emit({{"size", a.size()}, {"energy", e}, {"fourier_energy", fe},
                   {"relative_error", std::abs(fe - static_cast<double>(e)) / static_cast<double>(e)},
                   {"doubling", doubling_constant(g, a)}});
    };
  });

  auto* riesz_cmd = app.add_subcommand("riesz", "Riesz product on a dissociated set");
  add_input(riesz_cmd);
  riesz_cmd->callback([&] {
    action = [&] {
      auto [g, a] = read_set(read_json(input));
      auto d = is_dissociated(g, a);
      if (!d.dissociated) return emit({{"dissociated", false}, {"witness", d.witness}}, false);
      auto r = riesz_product(g, a);
      double total = 0.0;
      for (auto z : r.p_hat.values()) total += z.real();
      return emit({{"dissociated", true}, {"base", io::elements_json(g, r.base)}, {"p", io::function_json(r.p)},
                   {"p_hat", io::function_json(r.p_hat)}, {"p_hat_sum", total}});
    };
  });

  auto* bohr_cmd = app.add_subcommand("bohr", "build a Bohr system and check its axioms");
  add_input(bohr_cmd);
  bohr_cmd->callback([&] {
    action = [&] {
      auto j = read_json(input);
      auto g = io::group_from_json(j);
      Json recipe = {{"orders", g.orders()}, {"kind", "bohr"},
                     {"params", {{"characters", io::field(j, "characters")}, {"kappas", io::field(j, "kappas")}}}};
      auto S = io::system_from_json(recipe);
      auto rep = check_axioms(S);
      return emit({{"system", io::system_json(S)}, {"axioms", io::axiom_report_json(g, rep)}}, rep.axioms_pass());
    };
  });

  auto* reg_cmd = app.add_subcommand("regularize", "find a regular dilate in [1/2, 1]");
  add_input(reg_cmd);
  reg_cmd->callback([&] {
    action = [&] {
      auto cfg = globals.resolve();
      auto S = io::system_from_json(read_json(input));
      auto r = regular_dilate_search(S, cfg.rho_grid);
      return emit({{"lambda", r.lambda}, {"regularity", io::regularity_json(r.report)},
                   {"system", io::system_json(r.system)}},
                  r.report.regular);
    };
  });

  auto* axioms_cmd = app.add_subcommand("axioms", "check BS1-BS5, covering and entropy bounds");
  add_input(axioms_cmd);
  axioms_cmd->callback([&] {
    action = [&] {
      auto S = io::system_from_json(read_json(input));
      auto rep = check_axioms(S);
      return emit(io::axiom_report_json(S.group(), rep), rep.axioms_pass());
    };
  });

  auto* refine_cmd = app.add_subcommand("refine", "refine a system until psi f passes the averaging test");
  std::string function_path;
  std::string system_path;
  std::optional<double> M_opt;
  refine_cmd->add_option("--function", function_path, "function JSON")->required();
  refine_cmd->add_option("--system", system_path, "regular system JSON")->required();
  refine_cmd->add_option("--M", M_opt, "algebra norm bound (default: ceil ||f||_A)");
  refine_cmd->callback([&] {
    action = [&] {
      auto cfg = globals.resolve();
      auto f = io::function_from_json(read_json(function_path));
      auto S = io::system_from_json(read_json(system_path));
      double M = M_opt ? *M_opt : auto_M(f);
      double eps = cfg.auto_epsilon() ? 0.1 : cfg.epsilon;
      auto r = refine_system(f, S, eps, M, cfg.probe_count);
      return emit({{"system", io::system_json(r.system)}, {"certificate", io::refinement_json(f.group(), r.certificate)}},
                  r.certificate.all_ok());
    };
  });

  auto* freiman_cmd = app.add_subcommand("freiman", "dense Bogolyubov-Chang system for a set");
  add_input(freiman_cmd);
  freiman_cmd->callback([&] {
    action = [&] {
      auto [g, a] = read_set(read_json(input));
      auto o = bogolyubov_chang(g, a);
      return emit(io::freiman_json(g, o), o.all_ok());
    };
  });

  auto* conc_cmd = app.add_subcommand("concentrate", "system on which psi f is large");
  add_input(conc_cmd);
  conc_cmd->add_option("--M", M_opt, "algebra norm bound (default: ceil ||f||_A)");
  conc_cmd->callback([&] {
    action = [&] {
      auto cfg = globals.resolve();
      auto f = io::function_from_json(read_json(input));
      double M = M_opt ? *M_opt : auto_M(f);
      try {
        auto r = concentration_system(f, M, concentration_config(cfg));
        return emit({{"system", io::system_json(r.system)}, {"report", io::concentration_json(f.group(), r.report)}},
                    r.report.sup_ok());
      } catch (const NotConnectedError& e) {
        Json subset = Json::array();
        for (auto i : e.refuting_subset()) subset.push_back(i);
        return emit({{"error", "NotConnected"}, {"message", e.what()}, {"refuting_subset", subset}}, false);
      }
    };
  });

  auto* dec_cmd = app.add_subcommand("decompose", "signed coset decomposition of an integer-valued function");
  add_input(dec_cmd);
  dec_cmd->callback([&] {
    action = [&] {
      auto cfg = globals.resolve();
      auto f = io::function_from_json(read_json(input));
      DecomposeConfig dc;
      dc.epsilon = cfg.epsilon;
      dc.split.concentration = concentration_config(cfg);
      dc.split.probe_count = cfg.probe_count;
      auto D = decompose(f, dc);
      return emit(io::decomposition_json(D), D.certificate.exact);
    };
  });

  auto* verify_cmd = app.add_subcommand("verify", "check a decomposition against its function");
  std::string decomposition_path;
  verify_cmd->add_option("--function", function_path, "function JSON")->required();
  verify_cmd->add_option("--decomposition", decomposition_path, "decomposition JSON")->required();
  verify_cmd->callback([&] {
    action = [&] {
      auto f = io::function_from_json(read_json(function_path));
      auto d = read_json(decomposition_path);
      if (d.contains("orders") && d.at("orders") != Json(f.group().orders())) {
        throw UsageError("decomposition and function live on different groups");
      }
      auto pieces = io::pieces_from_json(f.group(), io::field(d, "pieces"));
      auto r = verify_decomposition(f, pieces);
      return emit(io::verification_json(f.group(), r), r.exact);
    };
  });

  auto* lca_cmd = app.add_subcommand("lca-model", "finite model of a trigonometric polynomial; lattice classes");
  add_input(lca_cmd);
  std::int64_t modulus = 10007;
  std::size_t resolution = 1 << 14;
  lca_cmd->add_option("--modulus", modulus, "lower bound for the prime modulus N")->capture_default_str();
  lca_cmd->add_option("--resolution", resolution, "quadrature points per torus coordinate")->capture_default_str();
  lca_cmd->callback([&] {
    action = [&] {
      auto j = read_json(input);
      Json out = Json::object();
      if (j.contains("terms")) {
        auto spec = io::frequency_spec_from_json(j);
        auto rep = build_finite_model(spec, next_prime(modulus));
        auto q = norm_quadrature(spec, resolution);
        out["model"] = {{"N", rep.N}, {"norm_estimate", rep.norm_estimate}, {"target_norm", q.value},
                        {"quadrature_error_bound", q.error_bound}, {"resolution", q.resolution},
                        {"gap", std::abs(rep.norm_estimate - q.value)}};
      }
      if (j.contains("lattices")) {
        std::vector<Lattice> ls;
        for (const auto& l : j.at("lattices")) ls.push_back(io::lattice_from_json(l));
        Json classes = Json::array();
        for (const auto& c : commensurability_classes(ls)) {
          classes.push_back({{"members", c.members}, {"omega", io::lattice_json(c.omega)}});
        }
        out["classes"] = classes;
      }
      if (out.empty()) throw UsageError("input needs \"terms\" or \"lattices\"");
      return emit(out);
    };
  });

  auto* corpus_cmd = app.add_subcommand("corpus", "seeded integer-valued test functions");
  std::size_t count = 10;
  std::size_t max_size = 512;
  double max_norm = 5.0;
  corpus_cmd->add_option("--count", count, "number of instances")->capture_default_str();
  corpus_cmd->add_option("--max-size", max_size, "largest group order")->capture_default_str();
  corpus_cmd->add_option("--max-norm", max_norm, "largest algebra norm")->capture_default_str();
  corpus_cmd->callback([&] {
    action = [&] {
      auto cfg = globals.resolve();
      Json items = Json::array();
      for (const auto& inst : corpus::integer_corpus(cfg.seed, count, max_size, max_norm)) {
        items.push_back({{"function", io::function_json(inst.f)}, {"structured", inst.structured},
                         {"pieces", inst.pieces}, {"A_norm", algebra_norm(inst.f)}});
      }
      return emit({{"seed", cfg.seed}, {"instances", items}});
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::InvalidArgument:
      case ErrorCode::GroupMismatch:
      case ErrorCode::DomainMismatch:
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
      default:
        emit({{"error", to_string(e.code())}, {"message", e.what()}}, false);
        return kReportFailure;
    }
  }
}
