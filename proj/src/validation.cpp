#include "qeit/validation.hpp"

#include <algorithm>
#include <cmath>

#include "qeit/sweep.hpp"

namespace qeit {

namespace {

constexpr int kMinOracleDim = 30;
constexpr double kOracleCouplingTail = 1e-10;

}  // namespace

double ValidationEntry::dev_T() const { return std::abs(T_engine - T_oracle); }
double ValidationEntry::dev_F() const { return std::abs(F_engine - F_oracle); }

std::vector<ProbeState> validation_probes() { return {CoherentProbe{1.0}, FockProbe{1}}; }

std::vector<CouplingState> validation_couplings() {
  return {CoherentCoupling{}, SqueezedCoupling{1.0, 0.5, 0.0}, SqueezedCoupling{1.0, 1.0, 0.0}};
}

std::vector<double> validation_gamma0s() { return {0.0, 1e-3, 1e-2}; }
std::vector<double> validation_omegas() { return {0.0, 1e-2}; }

ValidationReport run_validation(const ValidationOptions& options) {
  ValidationReport report;
  report.bound = options.bound;
  EvaluateOptions eval;
  eval.with_deltas = false;
  eval.eigen_diagnostics = false;

  for (const auto& probe : validation_probes()) {
    for (const auto& coupling : validation_couplings()) {
      oracle::TruncatedSpace space;
      if (options.dims) {
        space.dim_p = *options.dims;
        space.dim_c = *options.dims;
      } else {
        space.dim_p = std::max(kMinOracleDim, basis_dim(probe, {}));
        space.dim_c = std::max(kMinOracleDim, oracle::fluctuation_dim(coupling, kOracleCouplingTail));
      }
      for (double gamma0 : validation_gamma0s()) {
        for (double omega : validation_omegas()) {
          EitConfig cfg;
          cfg.gamma0 = gamma0;
          cfg.alpha = options.alpha;
          cfg.omega_c = options.omega_c;
          cfg.g = options.g;

          const auto oracle_result = oracle::oracle_output_rho(cfg, omega, probe, coupling, space);
          const auto engine_result = evaluate(cfg, omega, probe, coupling, {}, eval);

          ValidationEntry e;
          e.probe = to_string(probe);
          e.coupling = to_string(coupling);
          e.gamma0 = gamma0;
          e.omega = omega;
          e.T_engine = engine_result.T;
          e.T_oracle = oracle_result.T;
          e.F_engine = engine_result.F;
          e.F_oracle = oracle_result.F;
          e.dim_p = space.dim_p;
          e.dim_c = space.dim_c;
          report.max_dev_T = std::max(report.max_dev_T, e.dev_T());
          report.max_dev_F = std::max(report.max_dev_F, e.dev_F());
          report.entries.push_back(std::move(e));
        }
      }
    }
  }
  report.passed = report.max_dev_T < options.bound && report.max_dev_F < options.bound;
  return report;
}

}  // namespace qeit
