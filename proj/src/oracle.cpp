#include "qeit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "qeit/errors.hpp"

namespace qeit::oracle {

namespace {

constexpr int kSqueezePadding = 40;
constexpr double kWorkTailTarget = 1e-16;

// Photon-number distribution of squeezed vacuum: only even n populated,
// P(2k) = tanh^{2k} r (2k)! / (4^k k!^2 cosh r).
double squeezed_vacuum_tail(double r, int dim) {
  if (r == 0.0) return dim > 0 ? 0.0 : 1.0;
  const double log_t2 = 2.0 * std::log(std::tanh(r));
  const double log_norm = -std::log(std::cosh(r));
  double total = 0.0;
  for (int k = (dim + 1) / 2;; ++k) {
    const double term = std::exp(log_norm + k * log_t2 + std::lgamma(2.0 * k + 1.0) -
                                 2.0 * k * std::log(2.0) - 2.0 * std::lgamma(k + 1.0));
    total += term;
    if (term < 1e-20 * total || term < 1e-300 || k > 1000000) break;
  }
  return total;
}

ComplexMatrix squeeze_generator(int dim, double r, double theta, SqueezeConvention convention) {
  const ComplexMatrix a = ladder(dim);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix ad2 = a2.adjoint();
  const cplx xi = std::polar(r, theta);
  ComplexMatrix gen = 0.5 * (std::conj(xi) * a2 - xi * ad2);
  if (convention == SqueezeConvention::MatchPublishedMoments) gen = -gen;
  return gen;
}

}  // namespace

ComplexMatrix ladder(int dim) {
  if (dim < 2) throw std::invalid_argument("ladder: dim must be >= 2, got " + std::to_string(dim));
  ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

ComplexMatrix expm(const ComplexMatrix& a) { return a.exp(); }

int fluctuation_dim(const CouplingState& coupling, double tail_tol) {
  const auto* sq = std::get_if<SqueezedCoupling>(&coupling);
  if (!sq || sq->r == 0.0) return 2;
  int dim = 2;
  while (squeezed_vacuum_tail(sq->r, dim) > tail_tol) dim += 2;
  return dim;
}

ComplexVector fluctuation_state(int dim_c, const CouplingState& coupling,
                                SqueezeConvention convention, double tail_tol) {
  if (dim_c < 2)
    throw std::invalid_argument("fluctuation_state: dim_c must be >= 2, got " +
                                std::to_string(dim_c));
  ComplexVector state = ComplexVector::Zero(dim_c);
  const auto* sq = std::get_if<SqueezedCoupling>(&coupling);
  if (!sq || sq->r == 0.0) {
    state(0) = 1.0;
    return state;
  }
  if (sq->r < 0.0) throw std::invalid_argument("squeeze parameter r must be >= 0");

  // Exponentiate on a basis large enough that the boundary does not feed back
  // into the first dim_c levels, then check what falls outside dim_c.
  const int work = std::max(dim_c, fluctuation_dim(coupling, kWorkTailTarget)) + kSqueezePadding;
  const ComplexMatrix s = expm(squeeze_generator(work, sq->r, sq->theta, convention));
  const ComplexVector full = s.col(0);
  const double outside = full.tail(work - dim_c).squaredNorm();
  if (outside > tail_tol)
    throw TruncationError("squeezed fluctuation state: mass " + std::to_string(outside) +
                          " outside dim_c = " + std::to_string(dim_c) + " exceeds tolerance");
  state = full.head(dim_c);
  state.normalize();
  return state;
}

SecondMoments oracle_moments(const CouplingState& coupling, int dim_c,
                             SqueezeConvention convention) {
  const ComplexVector psi = fluctuation_state(dim_c, coupling, convention);
  const ComplexMatrix a = ladder(dim_c);
  const ComplexMatrix ad = a.adjoint();
  auto expect = [&](const ComplexMatrix& op) { return psi.dot(op * psi); };
  return {expect(ad * a), expect(a * a), expect(ad * ad), expect(a * ad)};
}

cplx oracle_c2_moment(int j, int k, cplx mu_b, cplx mu_c, const CouplingState& coupling,
                      int dim_c, SqueezeConvention convention) {
  if (j < 0 || k < 0) throw std::invalid_argument("oracle_c2_moment: negative order");
  const ComplexVector psi = fluctuation_state(dim_c, coupling, convention);
  const ComplexMatrix a = ladder(dim_c);
  const ComplexMatrix c2 = mu_b * a + mu_c * a.adjoint();
  ComplexVector left = psi;
  ComplexVector right = psi;
  for (int i = 0; i < j; ++i) left = c2 * left;
  for (int i = 0; i < k; ++i) right = c2 * right;
  return left.dot(right);
}

OracleResult oracle_output_rho(const EitConfig& cfg, double omega, const ProbeState& probe,
                               const CouplingState& coupling, const TruncatedSpace& space,
                               const TruncationPolicy& trunc, SqueezeConvention convention) {
  return oracle_output_rho(propagation_coefficients(cfg, omega, probe_amplitude(probe)), probe,
                           coupling, space, trunc, convention);
}

OracleResult oracle_output_rho(const PropagationCoefficients& co, const ProbeState& probe,
                               const CouplingState& coupling, const TruncatedSpace& space,
                               const TruncationPolicy& trunc, SqueezeConvention convention) {
  const int dp = space.dim_p;
  const int dc = space.dim_c;
  if (dp < 2 || dc < 2) throw std::invalid_argument("oracle: dim_p and dim_c must be >= 2");
  if (static_cast<long>(dp) * dc > kMaxJointDim)
    throw std::invalid_argument("oracle: dim_p * dim_c exceeds " + std::to_string(kMaxJointDim));
  const double n_p0 = mean_photon_number(probe);
  if (!(n_p0 > 0.0)) throw DomainError("probe mean photon number must be > 0");

  // Probe input vector.
  ComplexVector probe_vec = ComplexVector::Zero(dp);
  if (const auto* fock = std::get_if<FockProbe>(&probe)) {
    if (fock->n >= dp)
      throw TruncationError("oracle: dim_p = " + std::to_string(dp) + " cannot hold |" +
                            std::to_string(fock->n) + ">");
    probe_vec(fock->n) = 1.0;
  } else {
    const cplx beta = std::get<CoherentProbe>(probe).beta;
    const double tail = coherent_tail_mass(std::norm(beta), dp);
    if (tail > trunc.tail_tol)
      throw TruncationError("oracle: coherent probe tail mass " + std::to_string(tail) +
                            " beyond dim_p = " + std::to_string(dp) + " exceeds tolerance");
    const double log_abs = std::log(std::abs(beta));
    for (int n = 0; n < dp; ++n)
      probe_vec(n) = std::polar(std::exp(-0.5 * n_p0 + n * log_abs - 0.5 * std::lgamma(n + 1.0)),
                                n * std::arg(beta));
  }
  const ComplexVector fluct = fluctuation_state(dc, coupling, convention);

  // Joint states are stored as dim_p x dim_c matrices: (X (x) Y) psi == X psi Y^T.
  const ComplexMatrix a_p = co.c1 * ladder(dp);
  const ComplexMatrix a_c = ladder(dc);
  const ComplexMatrix c2_t = (co.mu_b * a_c + co.mu_c * a_c.adjoint()).transpose();
  auto apply = [&](const ComplexMatrix& x) -> ComplexMatrix { return a_p * x + x * c2_t; };

  // powers[k] = A^k psi, gram(i, j) = <A^i psi | A^j psi>.
  std::vector<ComplexMatrix> powers;
  powers.push_back(probe_vec * fluct.transpose());
  ComplexMatrix gram = ComplexMatrix::Zero(0, 0);
  auto ensure = [&](int k) {
    while (static_cast<int>(powers.size()) <= k) powers.push_back(apply(powers.back()));
    const int have = static_cast<int>(gram.rows());
    const int need = static_cast<int>(powers.size());
    if (have == need) return;
    gram.conservativeResize(need, need);
    for (int j = have; j < need; ++j)
      for (int i = 0; i <= j; ++i) {
        const cplx v = (powers[i].conjugate().cwiseProduct(powers[j])).sum();
        gram(i, j) = v;
        gram(j, i) = std::conj(v);
      }
  };

  OracleResult out;
  ensure(1);
  out.T = gram(1, 1).real() / n_p0;

  ComplexMatrix rho = ComplexMatrix::Zero(dp, dp);
  for (int n = 0; n < dp; ++n) {
    for (int m = 0; m <= n; ++m) {
      cplx sum = 0.0;
      double largest = 0.0;
      int quiet = 0;
      int l = 0;
      for (;; ++l) {
        if (l > trunc.l_cap)
          throw TruncationError("oracle: l-sum did not converge by l = " +
                                std::to_string(trunc.l_cap));
        ensure(l + n);
        const double weight = std::exp(-0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0)) -
                                       std::lgamma(l + 1.0));
        const cplx term = (l % 2 == 0 ? weight : -weight) * gram(l + n, l + m);
        sum += term;
        const double mag = std::abs(term);
        largest = std::max(largest, mag);
        quiet = (mag <= trunc.l_tol * largest) ? quiet + 1 : 0;
        if (quiet >= trunc.l_window) break;
      }
      out.l_max_used = std::max(out.l_max_used, l);
      rho(m, n) = sum;
      rho(n, m) = std::conj(sum);
    }
    rho(n, n) = rho(n, n).real();
  }

  if (const auto* fock = std::get_if<FockProbe>(&probe)) {
    out.F = std::sqrt(std::abs(rho(fock->n, fock->n)));
  } else {
    out.F = std::sqrt(std::abs(probe_vec.dot(rho * probe_vec)));
  }
  out.rho = DensityMatrix{std::move(rho)};
  return out;
}

}  // namespace qeit::oracle
