#pragma once

#include "qeit/engine.hpp"

namespace qeit::oracle {

// Brute-force reference: the output density matrix evaluated with explicit
// matrices on a truncated probe (x) coupling-fluctuation space, keeping every
// fluctuation order.

/// Sign convention of the squeeze generator.
enum class SqueezeConvention {
  /// exp[(xi a^dagger^2 - xi^* a^2) / 2]; its moments reproduce the published
  /// <da da> = +sinh(2r) e^{i theta} / 2, consistent with the engine.
  MatchPublishedMoments,
  /// exp[(xi^* a^2 - xi a^dagger^2) / 2] as written for S(xi); gives
  /// <da da> = -sinh(2r) e^{i theta} / 2.
  PublishedOperator,
};

struct TruncatedSpace {
  int dim_p = 30;  ///< probe basis size
  int dim_c = 40;  ///< coupling-fluctuation basis size
};

/// Largest supported dim_p * dim_c.
inline constexpr int kMaxJointDim = 10000;

/// Annihilation operator on |0>, ..., |dim - 1>. Throws std::invalid_argument for dim < 2.
ComplexMatrix ladder(int dim);

/// Matrix exponential (scaling and squaring).
ComplexMatrix expm(const ComplexMatrix& a);

/// Smallest fluctuation basis whose squeezed-vacuum tail is below `tail_tol`.
int fluctuation_dim(const CouplingState& coupling, double tail_tol = 1e-10);

/// Coupling-field state in the displaced frame (delta a statistics): vacuum for
/// a coherent coupling, squeezed vacuum otherwise. The squeeze is exponentiated
/// on an enlarged basis and truncated to dim_c; throws TruncationError if the
/// discarded mass exceeds tail_tol.
ComplexVector fluctuation_state(int dim_c, const CouplingState& coupling,
                                SqueezeConvention convention = SqueezeConvention::MatchPublishedMoments,
                                double tail_tol = 1e-8);

/// The four second moments as matrix expectation values on fluctuation_state.
SecondMoments oracle_moments(const CouplingState& coupling, int dim_c,
                             SqueezeConvention convention = SqueezeConvention::MatchPublishedMoments);

/// <(c2^dagger)^j c2^k> to all orders, c2 = mu_b da + mu_c da^dagger.
cplx oracle_c2_moment(int j, int k, cplx mu_b, cplx mu_c, const CouplingState& coupling,
                      int dim_c,
                      SqueezeConvention convention = SqueezeConvention::MatchPublishedMoments);

struct OracleResult {
  DensityMatrix rho;     ///< dim_p x dim_p
  double T = 0.0;        ///< <A^dagger A> / n_p0
  double F = 0.0;
  int l_max_used = 0;
};

/// Output state with A = c1 a_p (x) I + I (x) (mu_b da + mu_c da^dagger):
/// rho_mn = sum_l chi(m,n,l) <psi| (A^dagger)^{l+n} A^{l+m} |psi>.
/// Throws TruncationError if the probe or coupling state does not fit the
/// space, or if the l-sum does not converge by trunc.l_cap.
OracleResult oracle_output_rho(const EitConfig& cfg, double omega, const ProbeState& probe,
                               const CouplingState& coupling, const TruncatedSpace& space,
                               const TruncationPolicy& trunc = {},
                               SqueezeConvention convention = SqueezeConvention::MatchPublishedMoments);

/// Same computation with the propagation coefficients supplied directly.
OracleResult oracle_output_rho(const PropagationCoefficients& coefficients,
                               const ProbeState& probe, const CouplingState& coupling,
                               const TruncatedSpace& space, const TruncationPolicy& trunc = {},
                               SqueezeConvention convention = SqueezeConvention::MatchPublishedMoments);

}  // namespace qeit::oracle
