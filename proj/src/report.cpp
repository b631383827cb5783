#include "ccn/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ccn {
namespace {

double snap(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

std::string isotype_cells(const Decomposition& dec, const std::vector<std::pair<int, int>>& iso) {
  if (iso.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < iso.size(); ++i) {
    if (i) s += "+";
    s += class_label(iso[i].first);
    if (iso[i].second != 1) s += "^" + std::to_string(iso[i].second);
  }
  (void)dec;
  return s;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

nlohmann::json vec_json(const Vec& v) {
  auto a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(snap(v(i)));
  return a;
}

std::vector<int> one_based(const std::vector<int>& cells) {
  std::vector<int> out;
  for (int c : cells) out.push_back(c + 1);
  return out;
}

}  // namespace

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.11e", snap(v) == 0.0 ? 0.0 : v);
  return buf;
}

std::string fmt_cells(const std::vector<int>& cells) { return join_ints(one_based(cells)); }

std::string fmt_vector(const Vec& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt_num(v(i));
  return s + ")";
}

std::string input_section(const InputSummary& in) {
  std::ostringstream os;
  os << "== INPUT ==\n";
  os << "file: " << in.path << "\n";
  os << "kind: " << in.kind << "\n";
  os << "cells: " << in.cells << "\n";
  for (const auto& [name, tuple] : in.maps) os << (in.kind == "network" ? "arrow " : "generator ") << name << " = " << tuple << "\n";
  if (!in.structure_note.empty()) os << in.structure_note << "\n";
  os << "generators used:";
  for (const auto& [name, tuple] : in.generators) os << " " << name << " = " << tuple;
  os << "\n";
  os << "monoid elements: " << in.monoid_size << "\n";
  return os.str();
}

std::string decomposition_section(const Decomposition& dec) {
  std::ostringstream os;
  os << "== DECOMPOSITION ==\n";
  os << "ambient dimension: " << dec.ambient_dim << "\n";
  os << "components: " << dec.components.size() << "\n";
  os << "isotypic classes: " << dec.classes.size() << "\n";
  os << "completeness (smallest singular value of stacked carriers): " << fmt_num(dec.completeness_sigma) << "\n";
  for (std::size_t k = 0; k < dec.classes.size(); ++k) {
    const auto& c = dec.classes[k];
    os << "class " << class_label(static_cast<int>(k)) << ": dimension " << c.dim << ", type " << type_name(c.type)
       << ", index " << c.index << ", multiplicity " << c.multiplicity() << ", character " << fmt_vector(c.character)
       << "\n";
  }
  for (std::size_t i = 0; i < dec.components.size(); ++i) {
    const auto& c = dec.components[i];
    os << "component " << i + 1 << ": dimension " << c.dim() << ", type " << type_name(c.type) << ", index "
       << c.index << ", class " << class_label(c.iso_class) << ", End dimension " << c.end_alg.dim() << ", radical "
       << c.end_alg.radical_dim() << ", invariance residual " << fmt_num(dec.ambient.invariance(c.carrier.basis))
       << "\n";
    for (Eigen::Index j = 0; j < c.carrier.basis.cols(); ++j)
      os << "  basis " << j + 1 << ": " << fmt_vector(c.carrier.basis.col(j)) << "\n";
  }
  return os.str();
}

std::string genericity_section(const Decomposition& dec, const StrataEnumeration& strata, const Prediction& pred) {
  std::ostringstream os;
  os << "== GENERICITY ==\n";
  os << "strata: " << strata.strata.size() << (strata.truncated ? " (truncated at the cap)" : "") << "\n";
  os << "kernel isotype | kernel dimension | codimensions | verdict\n";
  for (const auto& st : strata.strata) {
    std::string codims;
    for (std::size_t i = 0; i < st.codim_options.size(); ++i) codims += (i ? "," : "") + std::to_string(st.codim_options[i]);
    os << isotype_cells(dec, st.kernel_isotype) << " | " << st.kernel_dim << " | {" << codims << "} | "
       << (st.kernel_isotype.empty() ? "INVERTIBLE" : st.generic ? "GENERIC" : "NON-GENERIC") << "\n";
  }
  os << "predicted generic bifurcation kernels:";
  if (pred.generic.empty()) os << " none";
  for (const auto& st : pred.generic) os << " " << class_label(st.kernel_isotype.front().first);
  os << "\n";
  if (pred.generic.empty())
    os << "note: no absolutely indecomposable class; one-parameter families generically avoid singular points "
          "(minimum codimension "
       << pred.min_nongeneric_codim << ")\n";
  else if (pred.min_nongeneric_codim > 0)
    os << "other nonempty kernels have codimension >= " << pred.min_nongeneric_codim << "\n";
  return os.str();
}

std::string verification_section(const Decomposition& dec, const ExperimentReport& rep) {
  std::ostringstream os;
  const auto& c = rep.config;
  os << "== VERIFICATION ==\n";
  os << "trials: " << rep.trials << "\n";
  os << "seed: " << c.seed << "\n";
  os << "parameter window: [" << fmt_num(c.scan.lambda_min) << ", " << fmt_num(c.scan.lambda_max) << "]\n";
  os << "grid points: " << c.scan.grid << "\n";
  os << "singular points: " << rep.singular_points << "\n";
  os << "indeterminate: " << rep.indeterminate << " (fraction " << fmt_num(rep.indeterminate_fraction()) << ")\n";
  os << "classified: " << rep.singular_points - rep.indeterminate << "\n";
  os << "single absolutely indecomposable kernel: " << rep.single_absolute << "\n";
  os << "anomalies: " << rep.anomalies.size() << " (fraction " << fmt_num(rep.anomaly_fraction()) << ")\n";
  os << "kernel isotype histogram:\n";
  if (rep.histogram.empty()) os << "  (empty)\n";
  for (const auto& [iso, n] : rep.histogram) os << "  " << iso << ": " << n << "\n";
  if (!rep.anomalies.empty()) {
    os << "anomaly seeds:\n";
    for (const auto& [trial, k] : rep.anomalies)
      os << "  trial " << trial << " seed " << rep.records[static_cast<std::size_t>(trial)].seed << " L* "
         << fmt_num(k.lambda) << " isotype " << k.isotype_string() << "\n";
  }
  if (rep.indeterminate > 0) {
    os << "indeterminate points:\n";
    for (const auto& r : rep.records)
      for (const auto& k : r.points)
        if (k.indeterminate)
          os << "  trial " << r.trial << " seed " << r.seed << " L* " << fmt_num(k.lambda) << ": " << k.note << "\n";
  }
  (void)dec;
  return os.str();
}

std::string branches_section(const Decomposition& dec, const ContinuationResult& res) {
  std::ostringstream os;
  const auto& b = res.bifurcation;
  os << "== BRANCHES ==\n";
  os << "field:\n";
  std::istringstream fs(res.field_text);
  for (std::string line; std::getline(fs, line);) os << "  " << line << "\n";
  os << "equivariance residual: " << fmt_num(res.equivariance_residual) << "\n";
  os << "bifurcation point L0: " << fmt_num(b.lambda0) << "\n";
  os << "kernel dimension: " << b.kernel.cols() << "\n";
  os << "kernel isotype: " << b.isotype.isotype_string() << (b.generic ? " (generic)" : " (non-generic)") << "\n";
  os << "eigenvalue crossing: " << crossing_name(b.crossing) << " (speed " << fmt_num(b.crossing_speed) << ")\n";
  if (res.coefficients) {
    const auto& rc = *res.coefficients;
    os << "reduced coefficients: alpha " << fmt_num(rc.alpha) << ", beta " << fmt_num(rc.beta) << ", gamma "
       << fmt_num(rc.gamma) << "\n";
    if (rc.beta != 0.0) os << "predicted slope -alpha/beta: " << fmt_num(rc.slope_single()) << "\n";
    if (rc.beta + rc.gamma != 0.0) os << "predicted slope -alpha/(beta+gamma): " << fmt_num(rc.slope_pair()) << "\n";
    os << "reduced equivariance residual: " << fmt_num(rc.hidden_residual) << "\n";
    for (Eigen::Index j = 0; j < rc.basis.cols(); ++j) os << "  model basis " << j + 1 << ": " << fmt_vector(rc.basis.col(j)) << "\n";
    for (const auto& w : rc.warnings) os << "warning: " << w << "\n";
  } else if (!res.coefficients_note.empty()) {
    os << "reduced coefficients: not computed (" << res.coefficients_note << ")\n";
  }
  os << "branches: " << res.branches.size() << "\n";
  for (std::size_t i = 0; i < res.branches.size(); ++i) {
    const auto& br = res.branches[i];
    os << "branch " << i + 1 << (br.trivial ? " (trivial)" : "") << ":\n";
    os << "  synchrony:";
    for (const auto& blk : br.synchrony) {
      os << " " << fmt_cells(blk.cells);
      if (blk.zero) {
        os << "=0";
      } else {
        os << " slope " << fmt_num(blk.slope);
      }
    }
    os << "\n";
    if (!br.points.empty()) {
      const auto& lo = br.points.front();
      const auto& hi = br.points.back();
      os << "  L " << fmt_num(lo.lambda) << ": x " << fmt_vector(lo.x) << "\n";
      os << "  L " << fmt_num(hi.lambda) << ": x " << fmt_vector(hi.x) << "\n";
    }
    for (const auto& w : br.warnings) os << "  warning: " << w << "\n";
  }
  (void)dec;
  return os.str();
}

std::string decomposition_records(const Decomposition& dec) {
  std::ostringstream os;
  for (std::size_t k = 0; k < dec.classes.size(); ++k) {
    const auto& c = dec.classes[k];
    nlohmann::json j = {{"record", "class"}, {"label", class_label(static_cast<int>(k))}, {"dimension", c.dim},
                        {"type", type_name(c.type)}, {"index", c.index}, {"multiplicity", c.multiplicity()}};
    os << j.dump() << "\n";
  }
  for (std::size_t i = 0; i < dec.components.size(); ++i) {
    const auto& c = dec.components[i];
    auto basis = nlohmann::json::array();
    for (Eigen::Index j = 0; j < c.carrier.basis.cols(); ++j) basis.push_back(vec_json(c.carrier.basis.col(j)));
    nlohmann::json j = {{"record", "component"}, {"number", i + 1}, {"dimension", c.dim()},
                        {"type", type_name(c.type)}, {"index", c.index}, {"class", class_label(c.iso_class)},
                        {"basis", basis}};
    os << j.dump() << "\n";
  }
  return os.str();
}

std::string genericity_records(const Decomposition& dec, const StrataEnumeration& strata) {
  std::ostringstream os;
  for (const auto& st : strata.strata) {
    nlohmann::json j = {{"record", "stratum"}, {"kernel", isotype_cells(dec, st.kernel_isotype)},
                        {"kernel_dimension", st.kernel_dim}, {"codimensions", st.codim_options},
                        {"min_codimension", st.min_codim}, {"generic", st.generic}};
    os << j.dump() << "\n";
  }
  return os.str();
}

std::string verification_records(const ExperimentReport& rep) {
  std::ostringstream os;
  for (const auto& r : rep.records)
    for (const auto& k : r.points) {
      nlohmann::json j = {{"record", "singular_point"}, {"trial", r.trial}, {"seed", r.seed},
                          {"lambda", snap(k.lambda)}, {"isotype", k.isotype_string()},
                          {"kernel_dimension", k.kernel_dim}, {"sigma_min", snap(k.sigma_min)},
                          {"indeterminate", k.indeterminate}};
      os << j.dump() << "\n";
    }
  nlohmann::json summary = {{"record", "verification_summary"},
                            {"trials", rep.trials},
                            {"singular_points", rep.singular_points},
                            {"indeterminate", rep.indeterminate},
                            {"anomalies", rep.anomalies.size()},
                            {"histogram", rep.histogram}};
  os << summary.dump() << "\n";
  return os.str();
}

std::string branches_records(const ContinuationResult& res) {
  std::ostringstream os;
  const auto& b = res.bifurcation;
  nlohmann::json bif = {{"record", "bifurcation"}, {"lambda0", snap(b.lambda0)}, {"kernel_dimension", b.kernel.cols()},
                        {"isotype", b.isotype.isotype_string()}, {"crossing", crossing_name(b.crossing)}};
  if (res.coefficients)
    bif["coefficients"] = {{"alpha", snap(res.coefficients->alpha)},
                           {"beta", snap(res.coefficients->beta)},
                           {"gamma", snap(res.coefficients->gamma)}};
  os << bif.dump() << "\n";
  for (std::size_t i = 0; i < res.branches.size(); ++i) {
    const auto& br = res.branches[i];
    auto blocks = nlohmann::json::array();
    for (const auto& blk : br.synchrony)
      blocks.push_back({{"cells", one_based(blk.cells)}, {"zero", blk.zero}, {"slope", snap(blk.slope)}});
    auto pts = nlohmann::json::array();
    for (const auto& p : br.points) pts.push_back({{"lambda", snap(p.lambda)}, {"x", vec_json(p.x)}});
    nlohmann::json j = {{"record", "branch"}, {"number", i + 1}, {"trivial", br.trivial}, {"synchrony", blocks},
                        {"points", pts}};
    os << j.dump() << "\n";
  }
  return os.str();
}

}  // namespace ccn
