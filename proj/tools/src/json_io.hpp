#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include <nlx/discretize.hpp>
#include <nlx/solve.hpp>
#include <nlx/systems.hpp>

namespace nlx::cli {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Deterministic text form: sorted keys, doubles as %.17g, non-finite doubles as null.
// Parsing the output and writing it again reproduces it byte for byte.
std::string to_text(const json& j);

// A non-finite double becomes null.
json num(double x);
// null reads back as `missing`.
double read_num(const json& j, double missing);

// Everything needed to rebuild the operator and system of a branch.
struct BranchConfig {
  std::string family = "gelfand";
  double p = 2.0;
  double q = 2.0;
  double s = 0.5;
  double sigma = 1.0;
  int N = 400;
  double R = 1.0;
  std::string rule = "cell_exact";
  double tol = 1e-10;
  double resolution = 1e-4;
  int max_steps = 400;
  double initial_lambda = 0.0;
  bool scalar_reduction = false;
  std::uint64_t seed = 0;

  // Throws nlx::Error(InvalidArgument) on the first out-of-range field.
  void validate() const;
  SystemSpec system() const;
  DiscreteOperator op() const;
  SolverOptions solver_options() const;
  StepPolicy step_policy() const;
};

json config_to_json(const BranchConfig& c);
BranchConfig config_from_json(const json& j);

json branch_to_json(const BranchConfig& c, const Branch& b);
// Throws nlx::Error(InvalidArgument) when the document does not follow the schema.
Branch branch_from_json(const json& j, BranchConfig& config);

// lambda,gamma,sup_u,sup_v,stability_indicator,residual
std::string branch_csv(const Branch& b);

}  // namespace nlx::cli
