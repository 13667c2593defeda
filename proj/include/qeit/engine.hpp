#pragma once

#include <optional>
#include <variant>

#include <Eigen/Dense>

#include "qeit/coefficients.hpp"
#include "qeit/config.hpp"
#include "qeit/moments.hpp"

namespace qeit {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct CoherentProbe {
  cplx beta{1.0, 0.0};
};

struct FockProbe {
  int n = 1;
};

using ProbeState = std::variant<CoherentProbe, FockProbe>;

/// Mean photon number of the input probe.
double mean_photon_number(const ProbeState& probe);

/// <a_p0>: beta for a coherent probe, zero for a Fock probe.
cplx probe_amplitude(const ProbeState& probe);

/// Density matrix in the truncated Fock basis |0>, ..., |dim - 1>.
struct DensityMatrix {
  ComplexMatrix entries;

  int dim() const { return static_cast<int>(entries.rows()); }
  double trace_defect() const;       ///< |Tr rho - 1|
  double hermiticity_defect() const; ///< max |rho_mn - conj(rho_nm)|
  double min_eigenvalue() const;
};

struct TruncationPolicy {
  int dim = 0;              ///< Fock basis size; 0 selects it automatically
  double tail_tol = 1e-10;  ///< max coherent-state mass allowed outside the basis
  double l_tol = 1e-12;     ///< l-sum terms below l_tol * (largest term) count as converged
  int l_window = 5;         ///< consecutive small terms required to stop
  int l_cap = 500;          ///< l-sum failure threshold
};

/// Poisson mass of a coherent state with mean photon number `mean` on |n>, n >= dim.
double coherent_tail_mass(double mean, int dim);

/// Basis size for the probe: the explicit policy dim if set (tail-mass checked),
/// otherwise max(20, ceil(n + 8 sqrt(n + 1))) grown until the tail falls below
/// 1e-15. Throws TruncationError if an explicit dim leaves too much tail mass.
int basis_dim(const ProbeState& probe, const TruncationPolicy& policy);

struct EngineDiagnostics {
  int l_max_used = 0;
  int dim_used = 0;
  double trace_defect = 0.0;
  double min_eigenvalue = 0.0;  ///< reported, never clipped
};

struct EngineResult {
  double T = 0.0;
  double F = 0.0;
  double delta_T = 0.0;
  double delta_F = 0.0;
  PropagationCoefficients coefficients{};
  std::optional<DensityMatrix> rho;
  EngineDiagnostics diagnostics;
};

/// Output transmittance n_pL / n_p0. Throws DomainError for a zero-photon probe.
double transmittance(const EitConfig& cfg, double omega, const ProbeState& probe,
                     const CouplingState& coupling);

DensityMatrix output_density_matrix(const EitConfig& cfg, double omega, const ProbeState& probe,
                                    const CouplingState& coupling,
                                    const TruncationPolicy& trunc = {});

/// sqrt(|<psi_in| rho_out |psi_in>|). This is the overlap with the input pure
/// state, not the Uhlmann fidelity. Fock probes use the exact |c1|^n.
double fidelity(const EitConfig& cfg, double omega, const ProbeState& probe,
                const CouplingState& coupling, const TruncationPolicy& trunc = {});

/// (T - T|_{mu=0}, F - F|_{mu=0}); both zero for Fock probes.
std::pair<double, double> delta_metrics(const EitConfig& cfg, double omega,
                                        const ProbeState& probe,
                                        const CouplingState& coupling,
                                        const TruncationPolicy& trunc = {});

struct EvaluateOptions {
  bool keep_rho = false;
  bool with_deltas = true;
  bool eigen_diagnostics = true;
};

/// One full engine pass: T, F, the fluctuation differences and diagnostics.
EngineResult evaluate(const EitConfig& cfg, double omega, const ProbeState& probe,
                      const CouplingState& coupling, const TruncationPolicy& trunc = {},
                      const EvaluateOptions& options = {});

// Lower-level pieces, exposed for testing and for the oracle comparison.
namespace detail {

struct LSumStats {
  int l_max_used = 0;
};

/// rho_mn for a coherent input beta propagating with transmission c1 and
/// fluctuation gains (mu_b, mu_c), using moments to total order two.
ComplexMatrix coherent_output_rho(cplx c1, cplx beta, cplx mu_b, cplx mu_c,
                                  const SecondMoments& moments, int dim,
                                  const TruncationPolicy& trunc, LSumStats* stats = nullptr);

/// Diagonal output state of an n-photon Fock input.
ComplexMatrix fock_output_rho(cplx c1, int n_photons, int dim);

/// Truncated coherent-state amplitudes e^{-|beta|^2/2} beta^n / sqrt(n!).
ComplexVector coherent_amplitudes(cplx beta, int dim);

/// exp(-|beta|^2 |1 - c1|^2 / 2): overlap fidelity of |beta> and |c1 beta>.
double coherent_baseline_fidelity(cplx c1, cplx beta);

}  // namespace detail

}  // namespace qeit
