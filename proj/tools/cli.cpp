#include "cli.hpp"

#include "ccn/branches.hpp"
#include "ccn/commutant.hpp"
#include "ccn/decomposition.hpp"
#include "ccn/errors.hpp"
#include "ccn/genericity.hpp"
#include "ccn/monoid.hpp"
#include "ccn/network.hpp"
#include "ccn/poly_field.hpp"
#include "ccn/report.hpp"
#include "ccn/verifier.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace ccnbif {
namespace {

const char* command_name(Command c) {
  switch (c) {
    case Command::Analyze: return "analyze";
    case Command::Verify: return "verify";
    case Command::Continue: return "continue";
  }
  return "?";
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ccn::ModelError("cannot read file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// Parse errors carry no file name; prefix it so diagnostics are actionable.
template <class F>
auto parse_with_path(const std::string& path, F&& parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ccn::ParseError& e) {
    throw ccn::ParseError(e.line(), e.column(), path + ": " + e.detail());
  }
}

ccn::Tolerances tolerances(const RunConfig& cfg) {
  ccn::Tolerances tol;
  if (cfg.rank_tol) tol.rank = *cfg.rank_tol;
  return tol;
}

nlohmann::json config_json(const RunConfig& cfg) {
  nlohmann::json j = {{"command", command_name(cfg.command)},
                      {"input", cfg.input},
                      {"seed", cfg.seed},
                      {"format", cfg.format == Format::Text ? "text" : "records"}};
  if (cfg.generators) j["generators"] = *cfg.generators;
  if (cfg.field) j["field"] = *cfg.field;
  if (cfg.command == Command::Verify) j["trials"] = cfg.trials;
  if (cfg.command == Command::Verify) {
    const ccn::ScanConfig scan;
    const auto w = cfg.window.value_or(std::make_pair(scan.lambda_min, scan.lambda_max));
    j["lambda_window"] = {w.first, w.second};
    j["grid"] = scan.grid;
  } else if (cfg.command == Command::Continue) {
    const ccn::BranchConfig bc;
    const auto w = cfg.window.value_or(std::make_pair(bc.lambda_min, bc.lambda_max));
    j["lambda_window"] = {w.first, w.second};
    j["continuation"] = {{"epsilon", bc.epsilon}, {"delta", bc.delta}, {"range", bc.range}};
  }
  const ccn::Tolerances tol = tolerances(cfg);
  j["tolerances"] = {{"rank", tol.rank},           {"nilpotent", tol.nilpotent},
                     {"cluster", tol.cluster},     {"zero_cluster", tol.zero_cluster},
                     {"invariance", tol.invariance}, {"closure", tol.closure},
                     {"invertible", tol.invertible}, {"intertwining", tol.intertwining}};
  return j;
}

struct Symmetry {
  ccn::InputSummary summary;
  std::optional<ccn::Network> network;
  ccn::GeneratorSet generators;
};

std::string tuple_of(const ccn::CellMap& m) { return m.to_string(); }

/// Reads the positional input and settles which cell maps generate the
/// symmetry monoid: an explicit generator file wins; a network contributes
/// its hidden symmetries when it is its own fundamental network and
/// otherwise its arrows when those are closed under composition.
Symmetry load_symmetry(const RunConfig& cfg) {
  Symmetry s;
  s.summary.path = cfg.input;
  const ccn::InputKind kind = parse_with_path(cfg.input, [](const std::string& t) { return ccn::detect_input_kind(t); });
  if (kind == ccn::InputKind::Generators) {
    s.summary.kind = "generators";
    s.generators = parse_with_path(cfg.input, [](const std::string& t) { return ccn::parse_generators(t); });
    s.summary.cells = s.generators.n_cells;
    for (std::size_t i = 0; i < s.generators.maps.size(); ++i)
      s.summary.maps.emplace_back(s.generators.names[i], tuple_of(s.generators.maps[i]));
  } else {
    s.summary.kind = "network";
    s.network = parse_with_path(cfg.input, [](const std::string& t) { return ccn::parse_network(t); });
    const auto& net = *s.network;
    s.summary.cells = net.n_cells();
    for (const auto& a : net.arrows()) s.summary.maps.emplace_back(a.name, tuple_of(a.map));
    if (!cfg.generators) {
      const auto sf = ccn::check_self_fundamental(net);
      if (auto hidden = ccn::hidden_symmetries(net)) {
        s.summary.structure_note = "arrows closed under composition; symmetries: hidden symmetries of the network";
        s.generators = std::move(*hidden);
      } else if (sf.closed) {
        s.summary.structure_note = "arrows closed under composition; symmetries: the arrow monoid";
        s.generators.n_cells = net.n_cells();
        for (const auto& a : net.arrows()) {
          if (a.map.is_identity()) continue;
          s.generators.names.push_back(a.name);
          s.generators.maps.push_back(a.map);
        }
      } else {
        const auto [p, q] = *sf.violation;
        throw ccn::ModelError("arrows are not closed under composition (" + net.arrows()[p].name + " * " +
                              net.arrows()[q].name + " is not an arrow); supply --generators");
      }
    }
  }
  if (cfg.generators) {
    s.generators = parse_with_path(*cfg.generators, [](const std::string& t) { return ccn::parse_generators(t); });
    if (s.generators.n_cells != s.summary.cells)
      throw ccn::ModelError("generator file has " + std::to_string(s.generators.n_cells) + " cells, input has " +
                            std::to_string(s.summary.cells));
    s.summary.structure_note = "symmetries: " + *cfg.generators;
  }
  for (std::size_t i = 0; i < s.generators.maps.size(); ++i)
    s.summary.generators.emplace_back(s.generators.names[i], tuple_of(s.generators.maps[i]));
  return s;
}

ccn::MonoidRep representation(const Symmetry& s) {
  std::vector<ccn::CellMap> maps = s.generators.maps;
  if (maps.empty()) maps.push_back(ccn::CellMap::identity(s.summary.cells));
  return ccn::build_representation(ccn::close_monoid(maps), s.summary.cells);
}

std::string execute_once(const RunConfig& cfg) {
  if (cfg.command == Command::Continue && !cfg.field) throw ccn::ModelError("continue requires --field");
  const ccn::Tolerances tol = tolerances(cfg);
  Symmetry sym = load_symmetry(cfg);
  const ccn::MonoidRep rep = representation(sym);
  sym.summary.monoid_size = rep.monoid.size();
  const ccn::Decomposition dec = ccn::decompose(rep, cfg.seed, tol);
  const auto strata = ccn::enumerate_strata(dec);
  const auto pred = ccn::predict_generic_bifurcations(dec);
  const bool text = cfg.format == Format::Text;

  std::ostringstream os;
  os << "# ccnbif " << kVersion << "\n";
  os << "# config " << config_json(cfg).dump() << "\n";
  if (text) {
    os << ccn::input_section(sym.summary);
    os << ccn::decomposition_section(dec);
    os << ccn::genericity_section(dec, strata, pred);
  } else {
    os << ccn::decomposition_records(dec) << ccn::genericity_records(dec, strata);
  }

  if (cfg.command == Command::Verify) {
    ccn::VerifierConfig vc;
    vc.trials = cfg.trials;
    vc.seed = cfg.seed;
    vc.tol = tol;
    if (cfg.window) {
      vc.scan.lambda_min = cfg.window->first;
      vc.scan.lambda_max = cfg.window->second;
    }
    const ccn::EquiAlgebra alg = ccn::end_algebra(dec.ambient, tol);
    const auto report = ccn::run_experiment(dec, alg, vc);
    os << (text ? ccn::verification_section(dec, report) : ccn::verification_records(report));
  }

  if (cfg.command == Command::Continue) {
    if (!sym.network) throw ccn::ModelError("continue requires a network file as input");
    const ccn::PolyField poly = parse_with_path(*cfg.field, [](const std::string& t) { return ccn::parse_field(t); });
    const ccn::NetworkField field(*sym.network, poly);
    ccn::BranchConfig bc;
    bc.tol = tol;
    if (cfg.window) {
      bc.lambda_min = cfg.window->first;
      bc.lambda_max = cfg.window->second;
    }
    ccn::Rng rng(ccn::mix_seed(cfg.seed, 0xB1F));
    ccn::ContinuationResult res;
    res.config = bc;
    res.field_text = ccn::serialize_field(poly);
    res.equivariance_residual = field.equivariance_residual(dec.ambient.generators, rng);
    if (res.equivariance_residual > 1e-8)
      throw ccn::ModelError("field is not equivariant under the symmetry monoid (residual " +
                            ccn::fmt_num(res.equivariance_residual) + ")");
    res.bifurcation = ccn::detect_bifurcation(field, dec, bc, rng);
    std::optional<ccn::Mat> seed_basis;
    if (res.bifurcation.kernel.cols() == 3) {
      try {
        res.coefficients = ccn::estimate_reduced_coefficients(field, res.bifurcation, dec.ambient.generators, rng);
        seed_basis = res.coefficients->basis;
      } catch (const ccn::ModelError& e) {
        res.coefficients_note = e.what();
      }
    } else {
      res.coefficients_note = "kernel is not 3-dimensional";
    }
    res.branches = ccn::trace_branches(field, res.bifurcation, bc, seed_basis);
    os << (text ? ccn::branches_section(dec, res) : ccn::branches_records(res));
  }
  return os.str();
}

}  // namespace

std::string execute(const RunConfig& cfg) {
  std::string report = execute_once(cfg);
  if (cfg.check_replay && execute_once(cfg) != report) throw ReplayMismatch();
  return report;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bifurcation analysis of coupled cell networks with monoid symmetry", "ccnbif"};
  app.set_version_flag("--version", std::string("ccnbif ") + kVersion);
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "text";
  std::vector<double> window;
  std::string generators, field, outpath;
  double rank_tol = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input, "network or generator file")->required()->check(CLI::ExistingFile);
    sub->add_option("--generators", generators, "generator file overriding the input's symmetries")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", cfg.seed, "random seed (default 0)");
    sub->add_option("--tol", rank_tol, "relative rank tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", outpath, "write the report to this file");
    sub->add_option("--format", format, "text or records")->check(CLI::IsMember({"text", "records"}));
    sub->add_option("--lambda-window", window, "parameter window a b")->expected(2);
    sub->add_flag("--check-replay", cfg.check_replay, "run twice and require identical reports");
  };
  auto* analyze = app.add_subcommand("analyze", "decomposition and genericity prediction");
  add_common(analyze);
  auto* verify = app.add_subcommand("verify", "Monte Carlo check of generic kernel isotypes");
  add_common(verify);
  verify->add_option("--trials", cfg.trials, "number of random families")->check(CLI::NonNegativeNumber);
  auto* cont = app.add_subcommand("continue", "steady-state branches of a network vector field");
  add_common(cont);
  cont->add_option("--field", field, "vector field file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitInput;
  }

  cfg.command = analyze->parsed() ? Command::Analyze : verify->parsed() ? Command::Verify : Command::Continue;
  cfg.format = format == "records" ? Format::Records : Format::Text;
  if (!generators.empty()) cfg.generators = generators;
  if (!field.empty()) cfg.field = field;
  if (!outpath.empty()) cfg.out = outpath;
  if (rank_tol > 0.0) cfg.rank_tol = rank_tol;
  if (!window.empty()) {
    if (!(window[0] < window[1])) {
      err << "error: --lambda-window requires a < b\n";
      return kExitInput;
    }
    cfg.window = std::make_pair(window[0], window[1]);
  }

  try {
    const std::string report = execute(cfg);
    if (cfg.out) {
      std::ofstream f(*cfg.out, std::ios::binary);
      if (!f) throw ccn::ModelError("cannot write " + *cfg.out);
      f << report;
    } else {
      out << report;
    }
    return kExitOk;
  } catch (const ccn::ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ccn::ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ccn::NoBifurcation& e) {
    err << "no bifurcation: " << e.what() << "\n";
    return kExitNoBifurcation;
  } catch (const ccn::NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ReplayMismatch& e) {
    err << "replay mismatch: " << e.what() << "\n";
    return kExitReplay;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"ccnbif"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ccnbif
