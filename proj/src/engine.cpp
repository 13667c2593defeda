#include "qeit/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qeit/errors.hpp"

namespace qeit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr int kMinAutoDim = 20;
constexpr double kAutoTailTarget = 1e-15;

double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace

double mean_photon_number(const ProbeState& probe) {
  return std::visit(overloaded{[](const CoherentProbe& p) { return std::norm(p.beta); },
                               [](const FockProbe& p) { return static_cast<double>(p.n); }},
                    probe);
}

cplx probe_amplitude(const ProbeState& probe) {
  return std::visit(overloaded{[](const CoherentProbe& p) { return p.beta; },
                               [](const FockProbe&) { return cplx{}; }},
                    probe);
}

double DensityMatrix::trace_defect() const { return std::abs(entries.trace() - 1.0); }

double DensityMatrix::hermiticity_defect() const {
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(entries, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double coherent_tail_mass(double mean, int dim) {
  if (dim <= 0) return 1.0;
  if (mean <= 0.0) return 0.0;
  const double log_mean = std::log(mean);
  double total = 0.0;
  for (int n = dim;; ++n) {
    const double term = std::exp(-mean + n * log_mean - log_factorial(n));
    total += term;
    if (n > mean && (term < 1e-18 * total || term < 1e-300)) break;
    if (n > dim + 100000) break;
  }
  return total;
}

int basis_dim(const ProbeState& probe, const TruncationPolicy& policy) {
  const double n = mean_photon_number(probe);
  const bool fock = std::holds_alternative<FockProbe>(probe);
  if (policy.dim > 0) {
    if (fock && std::get<FockProbe>(probe).n >= policy.dim)
      throw TruncationError("basis dim " + std::to_string(policy.dim) + " cannot hold |" +
                            std::to_string(std::get<FockProbe>(probe).n) + ">");
    if (!fock) {
      const double tail = coherent_tail_mass(n, policy.dim);
      if (tail > policy.tail_tol)
        throw TruncationError("coherent tail mass " + std::to_string(tail) +
                              " beyond dim " + std::to_string(policy.dim) +
                              " exceeds tolerance");
    }
    return policy.dim;
  }
  int dim = std::max(kMinAutoDim, static_cast<int>(std::ceil(n + 8.0 * std::sqrt(n + 1.0))));
  if (fock) return std::max(dim, std::get<FockProbe>(probe).n + 1);
  while (coherent_tail_mass(n, dim) > kAutoTailTarget) ++dim;
  return dim;
}

namespace detail {

ComplexMatrix coherent_output_rho(cplx c1, cplx beta, cplx mu_b, cplx mu_c,
                                  const SecondMoments& moments, int dim,
                                  const TruncationPolicy& trunc, LSumStats* stats) {
  // rho_mn = sum_l chi(m,n,l) sum_{j+k<=2} C(l+n,j) C(l+m,k)
  //          (z^*)^{l+n-j} z^{l+m-k} <(c2^dag)^j c2^k>,   z = c1 beta.
  std::array<std::array<cplx, 3>, 3> c2{};
  for (int j = 0; j <= 2; ++j)
    for (int k = 0; j + k <= 2; ++k) c2[j][k] = c2_moments(j, k, mu_b, mu_c, moments);

  std::vector<double> lf(static_cast<std::size_t>(trunc.l_cap + dim + 2));
  for (std::size_t i = 0; i < lf.size(); ++i) lf[i] = log_factorial(static_cast<int>(i));
  auto lbin = [&](int n, int k) { return lf[n] - lf[k] - lf[n - k]; };

  const cplx z = c1 * beta;
  const double abs_z = std::abs(z);
  const double log_z = abs_z > 0.0 ? std::log(abs_z) : 0.0;
  const double arg_z = std::arg(z);

  // |z|^a e^{i b arg z}; handles z = 0 with 0^0 = 1.
  auto power_term = [&](int conj_power, int power, double log_weight) -> cplx {
    if (abs_z == 0.0) return (conj_power == 0 && power == 0) ? std::exp(log_weight) : 0.0;
    return std::polar(std::exp(log_weight + (conj_power + power) * log_z),
                      (power - conj_power) * arg_z);
  };

  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  int l_max_used = 0;
  for (int n = 0; n < dim; ++n) {
    for (int m = 0; m <= n; ++m) {
      cplx sum = 0.0;
      double largest = 0.0;
      int quiet = 0;
      int l = 0;
      for (;; ++l) {
        if (l > trunc.l_cap)
          throw TruncationError("l-sum for rho(" + std::to_string(m) + "," + std::to_string(n) +
                                ") did not converge by l = " + std::to_string(trunc.l_cap));
        const int p = l + n;  // power of the creation side
        const int q = l + m;
        const double log_chi = -0.5 * (lf[m] + lf[n]) - lf[l];
        cplx term = 0.0;
        for (int j = 0; j <= std::min(2, p); ++j) {
          for (int k = 0; j + k <= 2 && k <= q; ++k) {
            if (c2[j][k] == 0.0) continue;
            const double w = log_chi + lbin(p, j) + lbin(q, k);
            term += power_term(p - j, q - k, w) * c2[j][k];
          }
        }
        if (l % 2 == 1) term = -term;
        sum += term;
        const double mag = std::abs(term);
        largest = std::max(largest, mag);
        quiet = (mag <= trunc.l_tol * largest) ? quiet + 1 : 0;
        if (quiet >= trunc.l_window) break;
      }
      l_max_used = std::max(l_max_used, l);
      rho(m, n) = sum;
      rho(n, m) = std::conj(sum);
    }
    rho(n, n) = rho(n, n).real();
  }
  if (stats) stats->l_max_used = l_max_used;
  return rho;
}

ComplexMatrix fock_output_rho(cplx c1, int n_photons, int dim) {
  if (n_photons < 0) throw DomainError("Fock photon number must be >= 0");
  if (dim <= n_photons)
    throw TruncationError("basis dim " + std::to_string(dim) + " cannot hold |" +
                          std::to_string(n_photons) + ">");
  const double t = std::norm(c1);
  const double log_t = t > 0.0 ? std::log(t) : 0.0;
  const double log_nfact = log_factorial(n_photons);

  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  for (int n = 0; n <= n_photons; ++n) {
    // sum_{k=n}^{N} chi(n,n,k-n) N!/(N-k)! |c1|^{2k}
    double sum = 0.0;
    for (int k = n; k <= n_photons; ++k) {
      if (k > 0 && t == 0.0) continue;
      const double w = log_abs_chi(n, n, k - n) + log_nfact - log_factorial(n_photons - k) +
                       (k > 0 ? k * log_t : 0.0);
      const double term = std::exp(w);
      sum += ((k - n) % 2 == 0) ? term : -term;
    }
    rho(n, n) = sum;
  }
  return rho;
}

ComplexVector coherent_amplitudes(cplx beta, int dim) {
  ComplexVector w = ComplexVector::Zero(dim);
  const double mean = std::norm(beta);
  if (mean == 0.0) {
    w(0) = 1.0;
    return w;
  }
  const double log_abs = std::log(std::abs(beta));
  const double arg = std::arg(beta);
  for (int n = 0; n < dim; ++n)
    w(n) = std::polar(std::exp(-0.5 * mean + n * log_abs - 0.5 * log_factorial(n)), n * arg);
  return w;
}

double coherent_baseline_fidelity(cplx c1, cplx beta) {
  return std::exp(-0.5 * std::norm(beta) * std::norm(1.0 - c1));
}

}  // namespace detail

namespace {

double overlap_fidelity(const ComplexMatrix& rho, cplx beta) {
  const ComplexVector w = detail::coherent_amplitudes(beta, static_cast<int>(rho.rows()));
  return std::sqrt(std::abs(w.dot(rho * w)));
}

void require_photons(const ProbeState& probe) {
  if (!(mean_photon_number(probe) > 0.0))
    throw DomainError("probe mean photon number must be > 0");
}

}  // namespace

double transmittance(const EitConfig& cfg, double omega, const ProbeState& probe,
                     const CouplingState& coupling) {
  require_photons(probe);
  const auto co = propagation_coefficients(cfg, omega, probe_amplitude(probe));
  const double n = mean_photon_number(probe);
  // Cross terms vanish: <da> = <da^dag> = 0 and the probe is independent of the coupling.
  const cplx fluct = c2_moments(1, 1, co.mu_b, co.mu_c, second_moments(coupling));
  return std::norm(co.c1) + fluct.real() / n;
}

DensityMatrix output_density_matrix(const EitConfig& cfg, double omega, const ProbeState& probe,
                                    const CouplingState& coupling,
                                    const TruncationPolicy& trunc) {
  require_photons(probe);
  const auto co = propagation_coefficients(cfg, omega, probe_amplitude(probe));
  const int dim = basis_dim(probe, trunc);
  if (const auto* fock = std::get_if<FockProbe>(&probe))
    return {detail::fock_output_rho(co.c1, fock->n, dim)};
  const auto& coh = std::get<CoherentProbe>(probe);
  return {detail::coherent_output_rho(co.c1, coh.beta, co.mu_b, co.mu_c,
                                      second_moments(coupling), dim, trunc)};
}

double fidelity(const EitConfig& cfg, double omega, const ProbeState& probe,
                const CouplingState& coupling, const TruncationPolicy& trunc) {
  require_photons(probe);
  if (const auto* fock = std::get_if<FockProbe>(&probe)) {
    const auto co = propagation_coefficients(cfg, omega, cplx{});
    return std::pow(std::abs(co.c1), fock->n);
  }
  const auto rho = output_density_matrix(cfg, omega, probe, coupling, trunc);
  return overlap_fidelity(rho.entries, std::get<CoherentProbe>(probe).beta);
}

std::pair<double, double> delta_metrics(const EitConfig& cfg, double omega,
                                        const ProbeState& probe,
                                        const CouplingState& coupling,
                                        const TruncationPolicy& trunc) {
  if (std::holds_alternative<FockProbe>(probe)) {
    require_photons(probe);
    return {0.0, 0.0};
  }
  EvaluateOptions options;
  options.eigen_diagnostics = false;
  const auto r = evaluate(cfg, omega, probe, coupling, trunc, options);
  return {r.delta_T, r.delta_F};
}

EngineResult evaluate(const EitConfig& cfg, double omega, const ProbeState& probe,
                      const CouplingState& coupling, const TruncationPolicy& trunc,
                      const EvaluateOptions& options) {
  require_photons(probe);
  EngineResult out;
  out.coefficients = propagation_coefficients(cfg, omega, probe_amplitude(probe));
  const auto& co = out.coefficients;
  const double n = mean_photon_number(probe);
  const SecondMoments moments = second_moments(coupling);
  const double baseline_T = std::norm(co.c1);
  out.T = baseline_T + c2_moments(1, 1, co.mu_b, co.mu_c, moments).real() / n;

  const int dim = basis_dim(probe, trunc);
  ComplexMatrix rho;
  if (const auto* fock = std::get_if<FockProbe>(&probe)) {
    rho = detail::fock_output_rho(co.c1, fock->n, dim);
    out.F = std::pow(std::abs(co.c1), fock->n);
  } else {
    const cplx beta = std::get<CoherentProbe>(probe).beta;
    detail::LSumStats stats;
    rho = detail::coherent_output_rho(co.c1, beta, co.mu_b, co.mu_c, moments, dim, trunc, &stats);
    out.F = overlap_fidelity(rho, beta);
    out.diagnostics.l_max_used = stats.l_max_used;
    if (options.with_deltas) {
      const ComplexMatrix rho0 =
          detail::coherent_output_rho(co.c1, beta, 0.0, 0.0, moments, dim, trunc);
      out.delta_T = out.T - baseline_T;
      out.delta_F = out.F - overlap_fidelity(rho0, beta);
    }
  }

  DensityMatrix dm{std::move(rho)};
  out.diagnostics.dim_used = dim;
  out.diagnostics.trace_defect = dm.trace_defect();
  if (options.eigen_diagnostics) out.diagnostics.min_eigenvalue = dm.min_eigenvalue();
  if (options.keep_rho) out.rho = std::move(dm);
  return out;
}

}  // namespace qeit
