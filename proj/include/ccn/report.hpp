#pragma once

#include "ccn/branches.hpp"
#include "ccn/decomposition.hpp"
#include "ccn/genericity.hpp"
#include "ccn/verifier.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ccn {

/// Fixed-width scientific notation with 12 significant digits; magnitudes
/// below 1e-12 print as zero so rounding noise never reaches a report.
std::string fmt_num(double v);
/// 1-based cell set, e.g. {1,4}.
std::string fmt_cells(const std::vector<int>& cells);
std::string fmt_vector(const Vec& v);

struct InputSummary {
  std::string path;
  std::string kind;                                      // "network" or "generators"
  int cells = 0;
  std::vector<std::pair<std::string, std::string>> maps; // name, 1-based image tuple
  std::string structure_note;                            // self-fundamental verdict etc.
  std::vector<std::pair<std::string, std::string>> generators;
  int monoid_size = 0;
};

struct ContinuationResult {
  std::string field_text;          // canonical serialization
  double equivariance_residual = 0.0;
  Bifurcation bifurcation;
  std::optional<ReducedCoefficients> coefficients;
  std::string coefficients_note;   // why coefficients are absent
  std::vector<Branch> branches;
  BranchConfig config;
};

std::string input_section(const InputSummary& in);
std::string decomposition_section(const Decomposition& dec);
std::string genericity_section(const Decomposition& dec, const StrataEnumeration& strata, const Prediction& pred);
std::string verification_section(const Decomposition& dec, const ExperimentReport& rep);
std::string branches_section(const Decomposition& dec, const ContinuationResult& res);

/// Machine-readable variants: one JSON object per line.
std::string decomposition_records(const Decomposition& dec);
std::string genericity_records(const Decomposition& dec, const StrataEnumeration& strata);
std::string verification_records(const ExperimentReport& rep);
std::string branches_records(const ContinuationResult& res);

}  // namespace ccn
