#ifndef ADND_CLI_HPP
#define ADND_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

#include "adnd/conformal.hpp"
#include "adnd/variational.hpp"

namespace adnd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

struct RunConfig {
  double eta = 1.0;
  double gamma = 1.0;
  double tau = 1.0;
  int k_h = 50;
  int k_a = 15;
  int k_b = 15;
  double calib_fraction = 0.5;
  double epsilon = 0.05;
  Orientation orientation = Orientation::PowerCorrected;
  std::uint64_t seed = 0;
  int max_sweeps = 200;
  double rel_tol = 1e-5;

  HyperParams hyper() const { return {eta, gamma, tau}; }
  TruncationLevels trunc() const { return {k_h, k_a, k_b}; }
  // Throws std::invalid_argument on any out-of-range setting.
  void validate() const;
};

// Runs one command. args excludes the program name. Returns an exit code:
// 0 success, 1 usage error, 2 data error.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace adnd::cli

#endif  // ADND_CLI_HPP
