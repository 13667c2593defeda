#pragma once

#include <utility>
#include <variant>

#include "qeit/config.hpp"

namespace qeit {

struct CoherentCoupling {
  cplx beta{1.0, 0.0};
};

/// D(beta) S(xi) |0> with xi = r e^{i theta}.
struct SqueezedCoupling {
  cplx beta{1.0, 0.0};
  double r = 0.0;
  double theta = 0.0;
};

using CouplingState = std::variant<CoherentCoupling, SqueezedCoupling>;

/// Normal- and anti-normal-ordered second moments of the coupling-field
/// fluctuation operator delta a = a_c - <a_c>.
struct SecondMoments {
  cplx nn;  ///< <da^dagger da>
  cplx aa;  ///< <da da>
  cplx cc;  ///< <da^dagger da^dagger>
  cplx an;  ///< <da da^dagger>
};

/// (<da>, <da^dagger>); zero for every supported coupling state.
std::pair<cplx, cplx> first_moments(const CouplingState& state);

/// Squeezed moments follow the published convention
/// <da da> = +sinh(2r) e^{i theta} / 2.
SecondMoments second_moments(const CouplingState& state);

/// <(c2^dagger)^j c2^k> for c2 = mu_b da + mu_c da^dagger, using moments up to
/// total order two. Throws std::invalid_argument for j + k > 2.
cplx c2_moments(int j, int k, cplx mu_b, cplx mu_c, const SecondMoments& m);

/// Expansion coefficient of the density-matrix-element operator,
/// (1 / sqrt(m! n!)) (-1)^l / l!, evaluated through log-gamma.
double chi(int m, int n, int l);

/// log |chi(m, n, l)|.
double log_abs_chi(int m, int n, int l);

}  // namespace qeit
