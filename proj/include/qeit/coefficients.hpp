#pragma once

#include "qeit/config.hpp"

namespace qeit {

/// |x_a - x_0| below which the degenerate (omega = 0) solution is used.
inline constexpr double kBranchThreshold = 1e-9;

/// Dimensionless propagation quantities for one (config, omega, probe mean)
/// point. Every kappa is multiplied by the medium length, so x_a = kappa_a L.
struct PropagationCoefficients {
  cplx x0;    ///< Lambda_0 L, decay rate of the fluctuation source term
  cplx xa;    ///< kappa_a L (free-space -i omega L / c phase dropped)
  cplx xb;    ///< kappa_b L, weight of delta a_c
  cplx xc;    ///< kappa_c L, weight of delta a_c^dagger
  cplx c1;    ///< exp(-x_a), amplitude transmission
  cplx mu_b;  ///< gain of delta a_c in the output operator c2
  cplx mu_c;  ///< gain of delta a_c^dagger in c2
};

/// Evaluates the closed-form coefficients. `probe_amp` is the input mean
/// field <a_p0>: beta_p for a coherent probe, zero for a Fock probe.
/// Throws DomainError when the two-photon denominator vanishes.
PropagationCoefficients propagation_coefficients(const EitConfig& cfg, double omega,
                                                 cplx probe_amp);

struct SteadyStateMeans {
  cplx probe_out;  ///< <a_pL>
  cplx sigma13;    ///< <sigma_13>
  cplx sigma12;    ///< <sigma_12>
};

/// Mean-field steady state at omega = 0. For gamma0 = 0 the ground-state
/// coherence takes its dark-state value -g <a_pL> / Omega_c.
SteadyStateMeans steady_state_means(const EitConfig& cfg, cplx beta_p);

}  // namespace qeit
