// Acceptance gate: one PASS/FAIL line per criterion. `--only N` runs a single
// criterion; the exit status is nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qeit/engine.hpp"
#include "qeit/moments.hpp"
#include "qeit/oracle.hpp"
#include "qeit/sweep.hpp"
#include "qeit/validation.hpp"

using namespace qeit;

namespace {

struct Outcome {
  bool passed = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    if (!ok) passed = false;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("note " + what); }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

EitConfig make_cfg(double gamma0, double alpha = 200.0, cplx omega_c = 0.5, double g = 0.05) {
  EitConfig cfg;
  cfg.gamma0 = gamma0;
  cfg.alpha = alpha;
  cfg.omega_c = omega_c;
  cfg.g = g;
  return cfg;
}

struct Point {
  double gamma0;
  double omega;
};

std::vector<Point> random_points(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gamma0(0.0, 0.05), omega(-0.05, 0.05);
  std::vector<Point> pts;
  for (int i = 0; i < count; ++i) pts.push_back({gamma0(rng), omega(rng)});
  return pts;
}

double overlap(const ComplexMatrix& rho, cplx beta) {
  const ComplexVector w = detail::coherent_amplitudes(beta, static_cast<int>(rho.rows()));
  return std::sqrt(std::abs(w.dot(rho * w)));
}

// 1. gamma0 = 0, omega = 0 is lossless and fluctuation-free for every state pair.
Outcome perfect_eit() {
  Outcome o;
  const std::vector<ProbeState> probes{CoherentProbe{1.0}, CoherentProbe{2.0},
                                       CoherentProbe{cplx{0.5, 0.5}}, FockProbe{1}, FockProbe{3}};
  const std::vector<CouplingState> couplings{CoherentCoupling{}, SqueezedCoupling{1.0, 0.5, 0.0},
                                             SqueezedCoupling{1.0, 1.0, 0.7}};
  double worst = 0.0;
  for (const auto& p : probes)
    for (const auto& c : couplings) {
      const auto r = evaluate(make_cfg(0.0), 0.0, p, c);
      worst = std::max({worst, std::abs(r.T - 1.0), std::abs(r.F - 1.0), std::abs(r.delta_T),
                        std::abs(r.delta_F)});
    }
  o.require(worst < 1e-12, "max |T-1|, |F-1|, |dT|, |dF| = " + sci(worst) + " < 1e-12");
  return o;
}

// 2. F = |c1|^n for Fock probes, and equal to sqrt(rho_nn).
Outcome fock_fidelity() {
  Outcome o;
  double law = 0.0, route = 0.0;
  for (int n : {1, 2, 3, 5})
    for (const auto& pt : random_points(202 + n, 20)) {
      const auto cfg = make_cfg(pt.gamma0);
      const double f = fidelity(cfg, pt.omega, FockProbe{n}, CoherentCoupling{});
      const auto co = propagation_coefficients(cfg, pt.omega, 0.0);
      law = std::max(law, std::abs(f - std::pow(std::abs(co.c1), n)));
      const auto rho = output_density_matrix(cfg, pt.omega, FockProbe{n}, CoherentCoupling{});
      route = std::max(route, std::abs(f - std::sqrt(rho.entries(n, n).real())));
    }
  o.require(law < 1e-12, "max |F - |c1|^n| = " + sci(law) + " < 1e-12");
  o.require(route < 1e-10, "max |F - sqrt(rho_nn)| = " + sci(route) + " < 1e-10");
  return o;
}

// 3. The Fock output state is binomial thinning of the input.
Outcome fock_state() {
  Outcome o;
  double dev = 0.0, trace = 0.0;
  const auto pts = random_points(303, 20);
  for (int n0 = 1; n0 <= 10; ++n0)
    for (const auto& pt : pts) {
      const auto cfg = make_cfg(pt.gamma0);
      const auto rho = output_density_matrix(cfg, pt.omega, FockProbe{n0}, CoherentCoupling{});
      const double t = std::norm(propagation_coefficients(cfg, pt.omega, 0.0).c1);
      for (int n = 0; n < rho.dim(); ++n)
        for (int m = 0; m < rho.dim(); ++m) {
          double expected = 0.0;
          if (m == n && n <= n0)
            expected = std::exp(std::lgamma(n0 + 1.0) - std::lgamma(n + 1.0) -
                                std::lgamma(n0 - n + 1.0)) *
                       std::pow(t, n) * std::pow(1.0 - t, n0 - n);
          dev = std::max(dev, std::abs(rho.entries(m, n) - expected));
        }
      trace = std::max(trace, rho.trace_defect());
    }
  o.require(dev < 1e-10, "max |rho - binomial| = " + sci(dev) + " < 1e-10");
  o.require(trace < 1e-12, "max |Tr rho - 1| = " + sci(trace) + " < 1e-12");
  return o;
}

// 4. Coherent baseline with mu forced to zero against the closed form.
Outcome coherent_baseline() {
  Outcome o;
  double quarter = 0.0, half = 0.0;
  const SecondMoments vacuum = second_moments(CoherentCoupling{});
  for (double mean : {0.25, 1.0, 4.0})
    for (const auto& pt : random_points(404, 20)) {
      const cplx beta = std::sqrt(mean);
      const auto co = propagation_coefficients(make_cfg(pt.gamma0), pt.omega, beta);
      const int dim = basis_dim(CoherentProbe{beta}, {});
      const ComplexMatrix rho = detail::coherent_output_rho(co.c1, beta, 0.0, 0.0, vacuum, dim, {});
      const double f = overlap(rho, beta);
      const double gap = mean * std::norm(1.0 - co.c1);
      quarter = std::max(quarter, std::abs(f - std::exp(-gap / 4.0)));
      half = std::max(half, std::abs(f - std::exp(-gap / 2.0)));
    }
  o.require(quarter < 1e-8, "max |F - exp(-|b|^2|1-c1|^2/4)| = " + sci(quarter) + " < 1e-8");
  o.note("max |F - exp(-|b|^2|1-c1|^2/2)| = " + sci(half) +
         " (overlap of |b> with |c1 b>, for comparison)");
  return o;
}

// 5. Engine against the brute-force oracle, and the g^k scaling of the residual.
Outcome engine_vs_oracle() {
  Outcome o;
  const auto base = run_validation();
  o.require(base.max_dev_T < 1e-3 && base.max_dev_F < 1e-3,
            "g = 0.05: max dev_T = " + sci(base.max_dev_T) + ", max dev_F = " +
                sci(base.max_dev_F) + " < 1e-3 (" + std::to_string(base.entries.size()) +
                " entries)");
  std::vector<double> xs, ys;
  for (double g : {0.1, 0.05, 0.025}) {
    ValidationOptions opt;
    opt.g = g;
    const auto r = run_validation(opt);
    const double dev = std::max(r.max_dev_T, r.max_dev_F);
    o.note("g = " + fmt("%g", g) + ": max deviation " + sci(dev));
    o.require(r.max_dev_T < 1e-3 && r.max_dev_F < 1e-3, "g = " + fmt("%g", g) + " within 1e-3");
    xs.push_back(std::log(g));
    ys.push_back(std::log(dev));
  }
  const double mx = (xs[0] + xs[1] + xs[2]) / 3.0, my = (ys[0] + ys[1] + ys[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  o.require(slope >= 2.5, "log-log slope of deviation vs g = " + fmt("%.3f", slope) + " >= 2.5");
  return o;
}

// 6. Oracle moment tables.
Outcome moment_tables() {
  Outcome o;
  const auto coh = oracle::oracle_moments(CoherentCoupling{}, 30);
  const double dev_coh = std::max({std::abs(coh.nn), std::abs(coh.aa), std::abs(coh.cc),
                                   std::abs(coh.an - 1.0)});
  o.require(dev_coh < 1e-6, "coherent (0,0,0,1): dev " + sci(dev_coh) + " < 1e-6");
  for (double r : {0.25, 0.5, 1.0})
    for (double theta : {0.0, 1.1}) {
      const SqueezedCoupling s{1.0, r, theta};
      const auto m = oracle::oracle_moments(s, oracle::fluctuation_dim(s, 1e-14));
      const double sh2 = std::sinh(r) * std::sinh(r);
      const double dev = std::max({std::abs(m.nn - sh2), std::abs(m.an - (1.0 + sh2)),
                                   std::abs(std::abs(m.aa) - 0.5 * std::sinh(2.0 * r)),
                                   std::abs(std::abs(m.cc) - 0.5 * std::sinh(2.0 * r))});
      o.require(dev < 1e-6, "squeezed r = " + fmt("%g", r) + ", theta = " + fmt("%g", theta) +
                                ": dev " + sci(dev) + " < 1e-6");
      const auto a = second_moments(s);
      o.require(a.an - a.nn == cplx{1.0}, "analytic m_an - m_nn == 1 exactly (r = " +
                                              fmt("%g", r) + ")");
    }
  return o;
}

struct Curve {
  std::vector<double> x, dT, dF;
};

Curve gamma0_curve(const SweepSpec& spec) {
  Curve c;
  for (const auto& row : run_sweep(spec)) {
    c.x.push_back(row.gamma0);
    c.dT.push_back(row.dT);
    c.dF.push_back(row.dF);
  }
  return c;
}

std::size_t argmax_abs(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  return best;
}

void check_shape(Outcome& o, const std::string& name, const std::vector<double>& x,
                 const std::vector<double>& y, const std::string& label) {
  const std::size_t peak = argmax_abs(y);
  const double top = std::abs(y[peak]);
  const bool zero_start = x.front() == 0.0 && std::abs(y.front()) < 1e-12;
  const bool interior = peak > 0 && peak + 1 < y.size() && top > 0.0;
  const bool decays = std::abs(y.back()) < 0.05 * top;
  o.require(zero_start && interior && decays,
            name + " " + label + ": starts at " + sci(y.front()) + ", peak " + sci(y[peak]) +
                " at gamma0 = " + sci(x[peak]) + ", end " + sci(y.back()));
}

// 7. Structural features of the gamma0 scans.
Outcome structure() {
  Outcome o;
  const Curve c4a = gamma0_curve(preset("fig4a"));
  const Curve c4b = gamma0_curve(preset("fig4b"));
  const Curve c5b = gamma0_curve(preset("fig5b"));
  const Curve c6b = gamma0_curve(preset("fig6b"));
  for (const auto& [name, c] : {std::pair<std::string, const Curve&>{"fig4a", c4a},
                                {"fig4b", c4b}, {"fig5b", c5b}, {"fig6b", c6b}}) {
    check_shape(o, name, c.x, c.dT, "dT");
    check_shape(o, name, c.x, c.dF, "dF");
  }

  const double p4a = std::abs(c4a.dT[argmax_abs(c4a.dT)]);
  const double p4b = std::abs(c4b.dT[argmax_abs(c4b.dT)]);
  o.require(p4b > p4a, "(b) peak dT at Omega_c = 0.25 (" + sci(p4b) + ") > at 0.5 (" + sci(p4a) + ")");

  const double p5b = std::abs(c5b.dT[argmax_abs(c5b.dT)]);
  const double change = std::abs(p5b - p4a) / p4a;
  o.require(change < 0.25, "(c) peak dT change alpha 200 -> 1000: " + fmt("%.2f%%", 100 * change) + " < 25%");
  o.require(c4a.x[argmax_abs(c4a.dT)] != c5b.x[argmax_abs(c5b.dT)],
            "(c) peak position shifts: " + sci(c4a.x[argmax_abs(c4a.dT)]) + " -> " +
                sci(c5b.x[argmax_abs(c5b.dT)]));

  double same = 0.0;
  for (std::size_t i = 0; i < c4a.dT.size(); ++i) same = std::max(same, std::abs(c4a.dT[i] - c6b.dT[i]));
  o.require(same < 1e-12, "(d) max |dT(n=1) - dT(n=10)| = " + sci(same) + " < 1e-12");
  const double f1 = std::abs(c4a.dF[argmax_abs(c4a.dF)]);
  const double f10 = std::abs(c6b.dF[argmax_abs(c6b.dF)]);
  o.require(f10 > f1, "(d) peak |dF| n=10 (" + sci(f10) + ") > n=1 (" + sci(f1) + ")");
  return o;
}

// 8. Squeezed coupling at the fig4a peak.
Outcome squeezing() {
  Outcome o;
  const auto spec = preset("fig4a");
  const Curve c = gamma0_curve(spec);
  const std::size_t peak = argmax_abs(c.dT);
  const auto cfg = [&] {
    EitConfig e = spec.cfg;
    e.gamma0 = c.x[peak];
    return e;
  }();
  const double coherent = delta_metrics(cfg, spec.omega, spec.probe, CoherentCoupling{}).first;
  const double squeezed =
      delta_metrics(cfg, spec.omega, spec.probe, SqueezedCoupling{1.0, 1.0, 0.0}).first;
  const double ratio = squeezed / coherent;
  o.require(ratio >= 2.0, "dT(squeezed r=1) / dT(coherent) at gamma0 = " + sci(c.x[peak]) +
                              ": " + fmt("%.3f", ratio) + " >= 2");
  return o;
}

// 9. Monotone T and F on the omega and gamma0 scans.
Outcome monotone() {
  Outcome o;
  for (const char* name : {"fig2a", "fig3a", "fig2b", "fig3b"}) {
    auto spec = preset(name);
    spec.with_deltas = false;
    const auto rows = run_sweep(spec);
    const bool on_omega = spec.axis == SweepAxis::Omega;
    auto check = [&](const char* what, auto get) {
      double worst_rise = 0.0, at = 0.0;
      for (std::size_t i = 1; i < rows.size(); ++i) {
        const double rise = get(rows[i]) - get(rows[i - 1]);
        if (rise > worst_rise) {
          worst_rise = rise;
          at = on_omega ? rows[i].omega : rows[i].gamma0;
        }
      }
      std::string line = std::string(name) + " " + what + " non-increasing in " +
                         (on_omega ? "omega" : "gamma0");
      if (worst_rise > 1e-12) line += ": rises by " + sci(worst_rise) + " at " + sci(at);
      o.require(worst_rise <= 1e-12, line);
    };
    check("T", [](const SweepRow& r) { return r.T; });
    check("F", [](const SweepRow& r) { return r.F; });
  }
  return o;
}

// 10. The degenerate omega = 0 branch joins the general formula continuously.
Outcome continuity() {
  Outcome o;
  double rel = 0.0, abs_dev = 0.0;
  ValidationOptions v;
  for (const auto& probe : validation_probes())
    for (double gamma0 : validation_gamma0s()) {
      EitConfig cfg = make_cfg(gamma0, v.alpha, v.omega_c, v.g);
      const cplx amp = probe_amplitude(probe);
      const auto at0 = propagation_coefficients(cfg, 0.0, amp);
      const auto near = propagation_coefficients(cfg, 1e-7, amp);
      for (auto [m0, m1] : {std::pair{at0.mu_b, near.mu_b}, std::pair{at0.mu_c, near.mu_c}}) {
        if (std::abs(m0) > 0.0)
          rel = std::max(rel, std::abs(m1 - m0) / std::abs(m0));
        else
          abs_dev = std::max(abs_dev, std::abs(m1) / (v.g * std::max(std::abs(amp), 1.0)));
      }
    }
  o.require(rel < 1e-4, "max |mu(1e-7) - mu(0)| / |mu(0)| = " + sci(rel) + " < 1e-4");
  o.require(abs_dev < 1e-4, "where mu(0) = 0: max |mu(1e-7)| / (g |beta|) = " + sci(abs_dev) + " < 1e-4");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, 0 = none
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "perfect-EIT identity", 1.0, perfect_eit},
      {2, "Fock fidelity law", 0.0, fock_fidelity},
      {3, "Fock output state", 0.0, fock_state},
      {4, "coherent baseline", 0.0, coherent_baseline},
      {5, "engine vs oracle", 60.0, engine_vs_oracle},
      {6, "moment tables", 0.0, moment_tables},
      {7, "dephasing-scan structure", 0.0, structure},
      {8, "squeezing enhancement", 0.0, squeezing},
      {9, "monotone trends", 5.0, monotone},
      {10, "omega -> 0 continuity", 0.0, continuity},
  };

  int failures = 0, ran = 0;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0)
      out.require(secs < c.time_limit, "runtime " + fmt("%.2f s", secs) + " < " + fmt("%g s", c.time_limit));
    std::printf("[%s] %2d %s (%.2f s)\n", out.passed ? "PASS" : "FAIL", c.id, c.name, secs);
    for (const auto& d : out.details) std::printf("       %s\n", d.c_str());
    std::fflush(stdout);
    if (!out.passed) ++failures;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  if (!only) std::printf("%d/%d criteria passed\n", ran - failures, ran);
  return failures ? 1 : 0;
}
