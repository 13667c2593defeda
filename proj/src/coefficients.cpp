#include "qeit/coefficients.hpp"

#include <cmath>
#include <string>

#include "qeit/errors.hpp"

namespace qeit {

void EitConfig::validate() const {
  if (!(gamma0 >= 0.0) || !std::isfinite(gamma0))
    throw DomainError("gamma0 must be a finite value >= 0, got " + std::to_string(gamma0));
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw DomainError("alpha must be > 0, got " + std::to_string(alpha));
  if (!(g > 0.0) || !std::isfinite(g))
    throw DomainError("g must be > 0, got " + std::to_string(g));
  if (!std::isfinite(omega_c.real()) || !std::isfinite(omega_c.imag()))
    throw DomainError("omega_c must be finite");
}

PropagationCoefficients propagation_coefficients(const EitConfig& cfg, double omega,
                                                 cplx probe_amp) {
  cfg.validate();
  constexpr cplx i{0.0, 1.0};
  const double gamma = EitConfig::gamma;
  const double rabi2 = std::norm(cfg.omega_c);
  const double quarter_depth = cfg.alpha / 4.0;

  // D(0) = gamma0 gamma + |Omega_c|^2 and the detuned D(omega).
  const double d0 = cfg.gamma0 * gamma + rabi2;
  const cplx dephasing = cfg.gamma0 - i * omega;
  const cplx d = dephasing * (gamma - i * omega) + rabi2;
  if (d0 == 0.0 || d == 0.0)
    throw DomainError("two-photon denominator vanishes (gamma0 = 0 with Omega_c = 0 at omega = 0)");

  PropagationCoefficients out;
  out.x0 = quarter_depth * cfg.gamma0 / d0;
  out.xa = omega == 0.0 ? out.x0 : quarter_depth * dephasing / d;
  const cplx drive = cfg.g * probe_amp / d0;
  out.xb = quarter_depth * (dephasing / d) * std::conj(cfg.omega_c) * drive;
  out.xc = quarter_depth * (cfg.gamma0 / d) * cfg.omega_c * drive;
  out.c1 = std::exp(-out.xa);

  const cplx split = out.xa - out.x0;
  const cplx gain = std::abs(split) > kBranchThreshold
                        ? (std::exp(-out.xa) - std::exp(-out.x0)) / split
                        : -std::exp(-out.xa);
  out.mu_b = gain * out.xb;
  out.mu_c = gain * out.xc;
  return out;
}

SteadyStateMeans steady_state_means(const EitConfig& cfg, cplx beta_p) {
  cfg.validate();
  constexpr cplx i{0.0, 1.0};
  const double d0 = cfg.gamma0 * EitConfig::gamma + std::norm(cfg.omega_c);
  if (d0 == 0.0) throw DomainError("steady state undefined for gamma0 = 0 and Omega_c = 0");

  SteadyStateMeans out;
  const double x0 = cfg.alpha / 4.0 * cfg.gamma0 / d0;
  out.probe_out = std::exp(-x0) * beta_p;
  out.sigma13 = i * cfg.g * cfg.gamma0 / d0 * out.probe_out;
  if (cfg.gamma0 > 0.0)
    out.sigma12 = i * std::conj(cfg.omega_c) / cfg.gamma0 * out.sigma13;
  else
    out.sigma12 = -cfg.g * out.probe_out / cfg.omega_c;
  return out;
}

}  // namespace qeit
