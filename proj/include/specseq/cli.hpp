// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace specseq {

/// One parsed subcommand invocation.
struct ExperimentConfig {
  std::string command;
  std::map<std::string, std::string> inputs;  // role -> path (A, f, u, F, x, problem, grid)
  double rho = 0.0;                           // 0 means "command default"
  double gamma = 1.0;
  long n_samples = 0;
  long horizon = 64;
  long lo = 0;
  long hi = 63;
  double fp_tol = 0.0;
  int max_iter = 10000;
  int quad_points = 256;
  int probes = 8;
  int threads = 0;
  std::string mode = "causal";
  std::string method = "all";
  std::uint64_t seed = 0;
  std::string out;  // empty: standard output
  std::string format = "json";
};

/// Executes the command; writes the artifact to config.out or `out`. Module
/// errors become a JSON diagnostic on `err` and the error code as status.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into an ExperimentConfig and calls run.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace specseq
