#pragma once

#include <string>

namespace klab {

/// Parsed command configuration shared by the CLI subcommands. Exactly one
/// model is selected; numeric fields are validated finite by the parser.
struct RunConfig {
  std::string command;
  std::string model = "lmg";          // lmg | fp
  double spin = 25.0;                 // half-integer S (per site for fp)
  double coupling = 2.0;              // J (lmg) or c (fp)
  std::string seed = "z";             // z | x | x1+x2
  std::string seed_file;              // optional custom operator file
  std::string inner = "infinite";     // infinite | micro
  double energy = 1.0;                // micro window center (units of H)
  double window = 0.1;                // micro window half-width
  long long max_n = 0;                // 0 = run to breakdown / dimension bound
  double breakdown_tol = 1e-8;
  double t_max = 20.0;
  long long points = 2001;
  double fit_from = -1.0;             // <0 = command-specific default
  double fit_to = -1.0;
  long long degree_cap = 40;          // classical polynomial lanczos
  double e_min = 0.0, e_max = 0.0;    // classical-alpha sweep range
  double c_min = -0.95, c_max = 0.95; // fp-bound sweep range
  std::string output;                 // empty = stdout
  std::string format = "csv";         // csv | json
  bool gnuplot = false;
};

}  // namespace klab
