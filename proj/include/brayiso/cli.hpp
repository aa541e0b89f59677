#pragma once

// bray-iso command line: subcommands for every module, parameter sweeps and a
// verification suite. JSON reports follow json_io.hpp; sweeps may emit CSV.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace brayiso {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitUsage = 2, kExitNumeric = 3 };

/// start:stop:*k (geometric) or start:stop:+k (arithmetic), stop inclusive
/// up to a relative slack of 1e-9.
struct SweepRange {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
  bool geometric = false;

  std::vector<double> values() const;
};

SweepRange parse_sweep(const std::string& text);
/// A sweep range, a comma-separated list, or a single number.
std::vector<double> parse_values(const std::string& text);

struct RunConfig {
  std::string subcommand;
  std::string sweep_kind;
  double mass = 1.0;
  std::optional<double> radius;
  std::optional<double> volume;
  double tau = 2.0;
  std::optional<double> eta;
  double theta = 100.0;
  int n_theta = 64;
  int graph_n_theta = 16;
  double ode_tol = 1e-10;
  double grad_tol = 1e-6;
  double volume_tol = 1e-12;
  double step_size = 1.0;
  int max_iters = 500;
  std::uint64_t seed = 0;
  std::string output;
  std::string format = "json";
  // region selection
  std::string region_file;
  std::optional<double> centered;
  std::optional<double> shift;
  std::optional<double> offset;
  std::optional<double> rho;
  std::optional<double> chart_radius;
  // perturbation and module options
  std::string perturbation_file;
  std::string radii = "50:400:*2";
  std::string offsets = "10:320:*2";
  std::string taus = "1.5,2,4";
  std::string gammas = "2.5,3,4,6";
  std::string alphas = "1.5,2,2.5";
  double beta = 1.0;
  double r0 = 1.0;
  double annulus = std::numeric_limits<double>::infinity();
  double shell = 100.0;
  double eps = 0.2;
  std::optional<double> random_amplitude;
  int l_max = 4;
  std::string initial_file;
  bool emit_surface = false;
  int samples = 50;
};

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace brayiso
