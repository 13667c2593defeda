#pragma once

#include <complex>

namespace qeit {

using cplx = std::complex<double>;

/// Medium and field parameters of the Lambda-type EIT model. All rates are in
/// units of the excited-state decay rate Gamma; the medium length only enters
/// through the optical depth (|g|^2 N L / c = alpha * Gamma / 4).
struct EitConfig {
  double gamma0 = 0.0;            ///< ground-state dephasing
  cplx omega_c{0.5, 0.0};         ///< coupling Rabi frequency (phase allowed)
  double alpha = 200.0;           ///< optical depth
  double g = 0.05;                ///< single-photon coupling constant

  /// Excited-state coherence decay, gamma_1 = gamma_2 = Gamma / 2.
  static constexpr double gamma = 0.5;

  /// Throws DomainError unless gamma0 >= 0, alpha > 0 and g > 0.
  void validate() const;
};

}  // namespace qeit
