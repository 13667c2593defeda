#include "qeit/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "qeit/errors.hpp"

namespace qeit {

namespace {

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty())
    throw std::invalid_argument("cannot parse " + std::string(what) + " from '" +
                                std::string(text) + "'");
  return value;
}

std::pair<std::string_view, std::string_view> split_once(std::string_view text, char sep) {
  const auto pos = text.find(sep);
  if (pos == std::string_view::npos) return {text, {}};
  return {text.substr(0, pos), text.substr(pos + 1)};
}

}  // namespace

void SweepSpec::validate() const {
  if (points < 2) throw DomainError("sweep needs at least 2 points");
  if (!(start < stop)) throw DomainError("sweep range requires start < stop");
  if (spacing == Spacing::Log && !(start > 0.0))
    throw DomainError("logarithmic spacing requires start > 0");
  cfg.validate();
}

std::vector<double> SweepSpec::grid() const {
  validate();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points) + 1);
  if (prepend_zero && start > 0.0) out.push_back(0.0);
  const double last = points - 1;
  for (int i = 0; i < points; ++i) {
    double x;
    if (i == points - 1) {
      x = stop;
    } else if (spacing == Spacing::Linear) {
      x = start + (stop - start) * (i / last);
    } else {
      x = std::exp(std::log(start) + (std::log(stop) - std::log(start)) * (i / last));
    }
    out.push_back(x);
  }
  return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads) {
  const std::vector<double> xs = spec.grid();
  std::vector<SweepRow> rows(xs.size());
  std::vector<std::exception_ptr> errors(xs.size());

  EvaluateOptions options;
  options.with_deltas = spec.with_deltas;
  options.eigen_diagnostics = false;
  const double n_p0 = mean_photon_number(spec.probe);

  auto compute = [&](std::size_t i) {
    try {
      EitConfig cfg = spec.cfg;
      double omega = spec.omega;
      if (spec.axis == SweepAxis::Gamma0)
        cfg.gamma0 = xs[i];
      else
        omega = xs[i];
      const auto r = evaluate(cfg, omega, spec.probe, spec.coupling, spec.trunc, options);
      SweepRow& row = rows[i];
      row.omega = omega;
      row.gamma0 = cfg.gamma0;
      row.T = r.T;
      row.F = r.F;
      row.dT = spec.with_deltas ? r.delta_T : std::nan("");
      row.dF = spec.with_deltas ? r.delta_F : std::nan("");
      row.c1 = r.coefficients.c1;
      row.g = cfg.g;
      row.n_p0 = n_p0;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(xs.size()));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t)
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < xs.size(); i = next++) compute(i);
      });
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::vector<std::string> preset_names() {
  return {"fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b",
          "fig5a", "fig5b", "fig6a", "fig6b"};
}

SweepSpec preset(std::string_view name) {
  SweepSpec s;
  s.cfg.alpha = 200.0;
  s.cfg.omega_c = 0.5;
  s.cfg.gamma0 = 0.0;
  s.omega = 0.0;
  s.probe = CoherentProbe{1.0};
  s.coupling = CoherentCoupling{};

  // Figs. 2-3: T and F against omega (a) or gamma0 (b), linear grids.
  auto linear = [&](SweepAxis axis) {
    s.axis = axis;
    s.start = 0.0;
    s.stop = 0.05;
    s.points = 101;
    s.spacing = Spacing::Linear;
    s.prepend_zero = false;
  };
  // Figs. 4-6: dT and dF against gamma0 on a log grid with gamma0 = 0 prepended.
  auto dephasing_scan = [&] {
    s.axis = SweepAxis::Gamma0;
    s.start = 1e-6;
    s.stop = 1e-1;
    s.points = 201;
    s.spacing = Spacing::Log;
    s.prepend_zero = true;
  };

  if (name == "fig2a") {
    linear(SweepAxis::Omega);
  } else if (name == "fig2b") {
    linear(SweepAxis::Gamma0);
  } else if (name == "fig3a") {
    linear(SweepAxis::Omega);
    s.probe = FockProbe{1};
  } else if (name == "fig3b") {
    linear(SweepAxis::Gamma0);
    s.probe = FockProbe{1};
  } else if (name == "fig4a" || name == "fig5a" || name == "fig6a") {
    dephasing_scan();
  } else if (name == "fig4b") {
    dephasing_scan();
    s.cfg.omega_c = 0.25;
  } else if (name == "fig5b") {
    dephasing_scan();
    s.cfg.alpha = 1000.0;
  } else if (name == "fig6b") {
    dephasing_scan();
    s.probe = CoherentProbe{std::sqrt(10.0)};
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  }
  return s;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows,
               std::string_view provenance) {
  if (!provenance.empty()) out << "# " << provenance << '\n';
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.omega) << ',' << format_double(r.gamma0) << ','
        << format_double(r.T) << ',' << format_double(r.F) << ',' << format_double(r.dT) << ','
        << format_double(r.dF) << ',' << format_double(r.c1.real()) << ','
        << format_double(r.c1.imag()) << ',' << format_double(r.g) << ','
        << format_double(r.n_p0) << '\n';
  }
}

std::string rows_to_json(const std::vector<SweepRow>& rows, int indent) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isnan(v)) return nullptr;
    return v;
  };
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"omega", r.omega},     {"gamma0", r.gamma0},   {"T", r.T},
                   {"F", r.F},             {"dT", num(r.dT)},      {"dF", num(r.dF)},
                   {"c1_re", r.c1.real()}, {"c1_im", r.c1.imag()}, {"g", r.g},
                   {"n_p0", r.n_p0}});
  }
  return arr.dump(indent);
}

ProbeState parse_probe(std::string_view text) {
  const auto [kind, arg] = split_once(text, ':');
  if (kind == "coherent") {
    if (arg.empty()) throw std::invalid_argument("coherent probe needs an amplitude: coherent:<re>[,<im>]");
    const auto [re, im] = split_once(arg, ',');
    return CoherentProbe{{parse_double(re, "probe amplitude"),
                          im.empty() ? 0.0 : parse_double(im, "probe amplitude")}};
  }
  if (kind == "fock") {
    int n = -1;
    const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
    if (ec != std::errc{} || ptr != arg.data() + arg.size() || arg.empty() || n < 0)
      throw std::invalid_argument("fock probe needs a photon number >= 0: fock:<n>");
    return FockProbe{n};
  }
  throw std::invalid_argument("probe must be coherent:<beta> or fock:<n>, got '" +
                              std::string(text) + "'");
}

CouplingState parse_coupling(std::string_view text) {
  const auto [kind, arg] = split_once(text, ':');
  if (kind == "coherent") {
    if (!arg.empty()) {
      const auto [re, im] = split_once(arg, ',');
      return CoherentCoupling{{parse_double(re, "coupling amplitude"),
                               im.empty() ? 0.0 : parse_double(im, "coupling amplitude")}};
    }
    return CoherentCoupling{};
  }
  if (kind == "squeezed") {
    const auto [r_text, theta_text] = split_once(arg, ',');
    SqueezedCoupling s;
    s.r = parse_double(r_text, "squeeze parameter r");
    s.theta = theta_text.empty() ? 0.0 : parse_double(theta_text, "squeeze phase theta");
    if (s.r < 0.0) throw std::invalid_argument("squeeze parameter r must be >= 0");
    return s;
  }
  throw std::invalid_argument("coupling must be coherent or squeezed:<r>,<theta>, got '" +
                              std::string(text) + "'");
}

std::string to_string(const ProbeState& probe) {
  if (const auto* f = std::get_if<FockProbe>(&probe)) return "fock:" + std::to_string(f->n);
  const cplx b = std::get<CoherentProbe>(probe).beta;
  std::string s = "coherent:" + format_double(b.real());
  if (b.imag() != 0.0) s += "," + format_double(b.imag());
  return s;
}

std::string to_string(const CouplingState& coupling) {
  if (const auto* s = std::get_if<SqueezedCoupling>(&coupling))
    return "squeezed:" + format_double(s->r) + "," + format_double(s->theta);
  return "coherent";
}

std::string describe(const SweepSpec& spec) {
  std::ostringstream os;
  os << "axis=" << (spec.axis == SweepAxis::Omega ? "omega" : "gamma0")
     << " start=" << format_double(spec.start) << " stop=" << format_double(spec.stop)
     << " points=" << spec.points
     << " spacing=" << (spec.spacing == Spacing::Log ? "log" : "linear")
     << " prepend_zero=" << (spec.prepend_zero ? 1 : 0)
     << " gamma0=" << format_double(spec.cfg.gamma0) << " omega=" << format_double(spec.omega)
     << " alpha=" << format_double(spec.cfg.alpha)
     << " omega_c=" << format_double(spec.cfg.omega_c.real()) << ","
     << format_double(spec.cfg.omega_c.imag()) << " g=" << format_double(spec.cfg.g)
     << " gamma=" << format_double(EitConfig::gamma) << " probe=" << to_string(spec.probe)
     << " coupling=" << to_string(spec.coupling)
     << " dim=" << (spec.trunc.dim > 0 ? std::to_string(spec.trunc.dim) : std::string("auto"))
     << " tail_tol=" << format_double(spec.trunc.tail_tol)
     << " l_tol=" << format_double(spec.trunc.l_tol) << " l_cap=" << spec.trunc.l_cap
     << " deltas=" << (spec.with_deltas ? 1 : 0);
  return os.str();
}

}  // namespace qeit
