#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qeit/engine.hpp"
#include "qeit/oracle.hpp"

namespace qeit {

/// Engine-versus-oracle comparison over a fixed grid of small instances:
/// probe in {coherent:1, fock:1}, coupling in {coherent, squeezed r = 0.5, 1.0},
/// gamma0 in {0, 1e-3, 1e-2}, omega in {0, 1e-2}.
struct ValidationOptions {
  double g = 0.05;
  double alpha = 50.0;
  cplx omega_c{0.5, 0.0};
  double bound = 1e-3;
  std::optional<int> dims;  ///< force dim_p = dim_c (otherwise sized per state, >= 30)
};

struct ValidationEntry {
  std::string probe;
  std::string coupling;
  double gamma0 = 0.0;
  double omega = 0.0;
  double T_engine = 0.0;
  double T_oracle = 0.0;
  double F_engine = 0.0;
  double F_oracle = 0.0;
  int dim_p = 0;
  int dim_c = 0;

  double dev_T() const;
  double dev_F() const;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  double max_dev_T = 0.0;
  double max_dev_F = 0.0;
  double bound = 0.0;
  bool passed = false;
};

std::vector<ProbeState> validation_probes();
std::vector<CouplingState> validation_couplings();
std::vector<double> validation_gamma0s();
std::vector<double> validation_omegas();

/// Throws TruncationError when a forced dimension is too small for a state.
ValidationReport run_validation(const ValidationOptions& options = {});

}  // namespace qeit
