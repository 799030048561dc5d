// Experiment configuration shared by the latbump subcommands.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "latbump/bumps.hpp"
#include "latbump/lattice.hpp"
#include "latbump/norms.hpp"
#include "latbump/transference.hpp"

namespace latbump::cli {

/// Bad or inconsistent configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode { kPass = 0, kRuntime = 1, kConfig = 2, kHypothesis = 3, kAssertion = 4 };

struct CoefficientSource {
  /// "random", "explicit" or "delta"
  std::string mode = "random";
  LatticeCoefficients entries;
  int support = 5;
  int radius = 1;
  /// number of random members; member i uses seed + i
  int family = 1;
};

struct ExperimentConfig {
  int dimension = 1;
  int L = 8;
  int s = 32;
  std::uint64_t seed = 42;
  int threads = 0;
  /// fixture name, or "custom" with `phi` taken from the JSON object
  std::string phi_name = "tensor-0.4";
  BumpProfile phi;
  CoefficientSource a;
  ExponentTuple exponents;
  SpaceKind space = SpaceKind::amalgam;
  SearchParams search;
  double window_outer = 0.6;
  /// cm_decompose period and truncation; <= 0 picks the defaults
  int period = 0;
  int truncation = 0;
  double stability_bound = 10.0;
  std::vector<double> epsilons{0.5, 0.25, 0.125};
  double xi0 = 1.0;
  double eta0 = -2.0;
  /// scaling: also run the bilinear necessity experiment for `exponents`
  bool necessity = true;
  std::string out = "out";
};

std::vector<std::string> fixture_names();
/// 2n-dimensional Phi fixture; throws ConfigError for unknown names.
BumpProfile fixture(const std::string& name, int n);

nlohmann::json profile_to_json(const BumpProfile& b);
BumpProfile profile_from_json(const nlohmann::json& j);

nlohmann::json coefficients_to_json(const LatticeCoefficients& a);
LatticeCoefficients coefficients_from_json(const nlohmann::json& j, int n);

nlohmann::json exponent_to_json(double p);
double exponent_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ExperimentConfig& c);
/// Missing keys keep their defaults. Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// The a-family described by the config.
std::vector<LatticeCoefficients> coefficient_family(const ExperimentConfig& c);

/// "L,s" -> (L, s).
std::pair<int, int> parse_grid(const std::string& text);

}  // namespace latbump::cli
