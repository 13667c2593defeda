#include "qeit/moments.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qeit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::pair<cplx, cplx> first_moments(const CouplingState&) { return {cplx{}, cplx{}}; }

SecondMoments second_moments(const CouplingState& state) {
  return std::visit(
      overloaded{
          [](const CoherentCoupling&) { return SecondMoments{0.0, 0.0, 0.0, 1.0}; },
          [](const SqueezedCoupling& s) {
            if (s.r < 0.0) throw std::invalid_argument("squeeze parameter r must be >= 0");
            const double sh = std::sinh(s.r);
            const double half_sh2 = 0.5 * std::sinh(2.0 * s.r);
            // an - 1 is exact, so an - nn == 1 holds bit for bit.
            const double an = 1.0 + sh * sh;
            const double nn = an - 1.0;
            return SecondMoments{nn, std::polar(half_sh2, s.theta),
                                 std::polar(half_sh2, -s.theta), an};
          }},
      state);
}

cplx c2_moments(int j, int k, cplx mu_b, cplx mu_c, const SecondMoments& m) {
  if (j < 0 || k < 0) throw std::invalid_argument("c2_moments: negative order");
  if (j + k > 2)
    throw std::invalid_argument("c2_moments: total order " + std::to_string(j + k) +
                                " exceeds the second-order expansion");
  const cplx bs = std::conj(mu_b);
  const cplx cs = std::conj(mu_c);
  switch (j * 3 + k) {
    case 0:  // (0,0)
      return 1.0;
    case 1:  // (0,1)
    case 3:  // (1,0)
      return 0.0;
    case 4:  // (1,1)
      return std::norm(mu_b) * m.nn + bs * mu_c * m.cc + cs * mu_b * m.aa + std::norm(mu_c) * m.an;
    case 6:  // (2,0)
      return bs * bs * m.cc + bs * cs * (m.nn + m.an) + cs * cs * m.aa;
    case 2:  // (0,2)
      return mu_b * mu_b * m.aa + mu_b * mu_c * (m.nn + m.an) + mu_c * mu_c * m.cc;
  }
  return 0.0;
}

double log_abs_chi(int m, int n, int l) {
  if (m < 0 || n < 0 || l < 0) throw std::invalid_argument("chi: indices must be >= 0");
  return -0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0)) - std::lgamma(l + 1.0);
}

double chi(int m, int n, int l) {
  const double mag = std::exp(log_abs_chi(m, n, l));
  return (l % 2 == 0) ? mag : -mag;
}

}  // namespace qeit
