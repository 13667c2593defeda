// qeit: transmittance and fidelity of probe photons in a quantized-coupling
// EIT medium. Subcommands: compute, sweep, validate.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qeit/errors.hpp"
#include "qeit/sweep.hpp"
#include "qeit/validation.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitTruncation = 3;
constexpr int kExitValidation = 4;

struct ModelFlags {
  double gamma0 = 0.0;
  double omega = 0.0;
  double alpha = 200.0;
  std::string omega_c = "0.5";
  double g = 0.05;
  std::string probe = "coherent:1";
  std::string coupling = "coherent";
  int dim = 0;
  double l_tol = 1e-12;
  int l_cap = 500;
};

qeit::cplx parse_complex(const std::string& text) {
  // "re" or "re,im"
  const auto pos = text.find(',');
  if (pos == std::string::npos) return {std::stod(text), 0.0};
  return {std::stod(text.substr(0, pos)), std::stod(text.substr(pos + 1))};
}

void add_model_flags(CLI::App* cmd, ModelFlags& f) {
  cmd->add_option("--gamma0", f.gamma0, "ground-state dephasing [Gamma]");
  cmd->add_option("--omega", f.omega, "two-photon detuning [Gamma]");
  cmd->add_option("--alpha", f.alpha, "optical depth");
  cmd->add_option("--omega-c", f.omega_c, "coupling Rabi frequency [Gamma], re or re,im");
  cmd->add_option("--g", f.g, "single-photon coupling constant [Gamma]");
  cmd->add_option("--probe", f.probe, "coherent:<beta>[,<im>] | fock:<n>");
  cmd->add_option("--coupling", f.coupling, "coherent | squeezed:<r>,<theta>");
  cmd->add_option("--dim", f.dim, "probe Fock basis size (0 = automatic)");
  cmd->add_option("--l-tol", f.l_tol, "relative l-sum convergence tolerance");
  cmd->add_option("--l-cap", f.l_cap, "l-sum divergence cap");
}

qeit::TruncationPolicy policy_from(const ModelFlags& f) {
  qeit::TruncationPolicy p;
  p.dim = f.dim;
  p.l_tol = f.l_tol;
  p.l_cap = f.l_cap;
  return p;
}

qeit::EitConfig config_from(const ModelFlags& f) {
  qeit::EitConfig cfg;
  cfg.gamma0 = f.gamma0;
  cfg.alpha = f.alpha;
  cfg.omega_c = parse_complex(f.omega_c);
  cfg.g = f.g;
  cfg.validate();
  return cfg;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + out_path);
  file << text;
}

int run_compute(const ModelFlags& f, const std::string& format, const std::string& out_path) {
  const auto cfg = config_from(f);
  const auto probe = qeit::parse_probe(f.probe);
  const auto coupling = qeit::parse_coupling(f.coupling);
  const auto trunc = policy_from(f);
  const auto r = qeit::evaluate(cfg, f.omega, probe, coupling, trunc);

  if (format == "csv") {
    qeit::SweepRow row{f.omega, cfg.gamma0, r.T, r.F, r.delta_T, r.delta_F,
                       r.coefficients.c1, cfg.g, qeit::mean_photon_number(probe)};
    std::ostringstream os;
    qeit::write_csv(os, {row});
    emit(os.str(), out_path);
    return 0;
  }
  auto pair = [](qeit::cplx z) { return nlohmann::json::array({z.real(), z.imag()}); };
  nlohmann::json j;
  j["T"] = r.T;
  j["F"] = r.F;
  j["delta_T"] = r.delta_T;
  j["delta_F"] = r.delta_F;
  j["coefficients"] = {{"x0", pair(r.coefficients.x0)}, {"xa", pair(r.coefficients.xa)},
                       {"xb", pair(r.coefficients.xb)}, {"xc", pair(r.coefficients.xc)},
                       {"c1", pair(r.coefficients.c1)}, {"mu_b", pair(r.coefficients.mu_b)},
                       {"mu_c", pair(r.coefficients.mu_c)}};
  j["parameters"] = {{"gamma0", cfg.gamma0},
                     {"omega", f.omega},
                     {"alpha", cfg.alpha},
                     {"omega_c", pair(cfg.omega_c)},
                     {"g", cfg.g},
                     {"gamma", qeit::EitConfig::gamma},
                     {"probe", qeit::to_string(probe)},
                     {"coupling", qeit::to_string(coupling)},
                     {"n_p0", qeit::mean_photon_number(probe)}};
  j["diagnostics"] = {{"l_max_used", r.diagnostics.l_max_used},
                      {"dim_used", r.diagnostics.dim_used},
                      {"trace_defect", r.diagnostics.trace_defect},
                      {"min_eigenvalue", r.diagnostics.min_eigenvalue}};
  emit(j.dump(2) + "\n", out_path);
  return 0;
}

struct SweepFlags {
  std::string preset;
  std::string axis;
  std::string range;
  bool log = false;
  unsigned threads = 0;
  bool no_deltas = false;
};

int run_sweep(CLI::App* cmd, const ModelFlags& f, const SweepFlags& s, const std::string& format,
              const std::string& out_path) {
  auto given = [&](const char* name) { return cmd->count(name) > 0; };

  qeit::SweepSpec spec = s.preset.empty() ? qeit::SweepSpec{} : qeit::preset(s.preset);
  if (given("--gamma0")) spec.cfg.gamma0 = f.gamma0;
  if (given("--alpha")) spec.cfg.alpha = f.alpha;
  if (given("--omega-c")) spec.cfg.omega_c = parse_complex(f.omega_c);
  if (given("--g")) spec.cfg.g = f.g;
  if (given("--omega")) spec.omega = f.omega;
  if (given("--probe") || s.preset.empty()) spec.probe = qeit::parse_probe(f.probe);
  if (given("--coupling") || s.preset.empty()) spec.coupling = qeit::parse_coupling(f.coupling);
  spec.trunc = policy_from(f);
  spec.with_deltas = !s.no_deltas;

  if (given("--axis")) {
    const bool omega_axis = s.axis == "omega";
    spec.axis = omega_axis ? qeit::SweepAxis::Omega : qeit::SweepAxis::Gamma0;
    if (!given("--range")) {
      if (omega_axis) {
        spec.start = 0.0;
        spec.stop = 0.05;
        spec.points = 101;
        spec.spacing = qeit::Spacing::Linear;
        spec.prepend_zero = false;
      } else {
        spec.start = 1e-6;
        spec.stop = 1e-1;
        spec.points = 201;
        spec.spacing = qeit::Spacing::Log;
        spec.prepend_zero = true;
      }
    }
  }
  if (given("--range")) {
    // start:stop:points
    const auto a = s.range.find(':');
    const auto b = a == std::string::npos ? a : s.range.find(':', a + 1);
    if (b == std::string::npos) throw std::invalid_argument("--range expects start:stop:points");
    spec.start = std::stod(s.range.substr(0, a));
    spec.stop = std::stod(s.range.substr(a + 1, b - a - 1));
    spec.points = std::stoi(s.range.substr(b + 1));
    spec.spacing = s.log ? qeit::Spacing::Log : qeit::Spacing::Linear;
    spec.prepend_zero = false;
  } else if (given("--log")) {
    spec.spacing = qeit::Spacing::Log;
  }
  spec.validate();

  const auto rows = qeit::run_sweep(spec, s.threads);
  std::string provenance = qeit::describe(spec);
  if (!s.preset.empty()) provenance = "preset=" + s.preset + " " + provenance;

  if (format == "json") {
    emit(qeit::rows_to_json(rows) + "\n", out_path);
  } else {
    std::ostringstream os;
    qeit::write_csv(os, rows, provenance);
    emit(os.str(), out_path);
  }
  return 0;
}

int run_validate(const qeit::ValidationOptions& options, bool json) {
  const auto report = qeit::run_validation(options);
  if (json) {
    nlohmann::json j;
    j["max_dev_T"] = report.max_dev_T;
    j["max_dev_F"] = report.max_dev_F;
    j["bound"] = report.bound;
    j["passed"] = report.passed;
    for (const auto& e : report.entries)
      j["entries"].push_back({{"probe", e.probe},       {"coupling", e.coupling},
                              {"gamma0", e.gamma0},     {"omega", e.omega},
                              {"T_engine", e.T_engine}, {"T_oracle", e.T_oracle},
                              {"F_engine", e.F_engine}, {"F_oracle", e.F_oracle},
                              {"dim_p", e.dim_p},       {"dim_c", e.dim_c}});
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("%-12s %-16s %8s %8s %12s %12s\n", "probe", "coupling", "gamma0", "omega",
                "|dT|", "|dF|");
    for (const auto& e : report.entries)
      std::printf("%-12s %-16s %8.0e %8.0e %12.3e %12.3e\n", e.probe.c_str(), e.coupling.c_str(),
                  e.gamma0, e.omega, e.dev_T(), e.dev_F());
    std::printf("max |T - T_oracle| = %.3e\nmax |F - F_oracle| = %.3e\nbound = %.1e\n%s\n",
                report.max_dev_T, report.max_dev_F, report.bound,
                report.passed ? "PASS" : "FAIL");
  }
  return report.passed ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probe-photon transmittance and fidelity in a quantized-coupling EIT medium"};
  app.set_config("--config", "", "key = value file; command-line flags take precedence");
  app.require_subcommand(1);

  ModelFlags model;
  std::string format = "json";
  std::string out_path;

  auto* compute = app.add_subcommand("compute", "evaluate a single parameter point");
  add_model_flags(compute, model);
  compute->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  compute->add_option("--out", out_path, "write to FILE instead of stdout");

  SweepFlags sweep_flags;
  std::string sweep_format = "csv";
  auto* sweep = app.add_subcommand("sweep", "scan omega or gamma0 and write CSV");
  add_model_flags(sweep, model);
  sweep->add_option("--preset", sweep_flags.preset, "figure preset")
      ->check(CLI::IsMember(qeit::preset_names()));
  sweep->add_option("--axis", sweep_flags.axis, "omega | gamma0")
      ->check(CLI::IsMember({"omega", "gamma0"}));
  sweep->add_option("--range", sweep_flags.range, "start:stop:points");
  sweep->add_flag("--log", sweep_flags.log, "logarithmic spacing");
  sweep->add_option("--threads", sweep_flags.threads, "worker threads (0 = all cores)");
  sweep->add_flag("--no-deltas", sweep_flags.no_deltas, "skip the dT / dF columns");
  sweep->add_option("--format", sweep_format, "csv | json")
      ->check(CLI::IsMember({"json", "csv"}));
  sweep->add_option("--out", out_path, "write to FILE instead of stdout");

  qeit::ValidationOptions vopts;
  double omega_c_real = 0.5;
  int dims = 0;
  bool validate_json = false;
  auto* validate = app.add_subcommand("validate", "compare the engine against the Fock-space oracle");
  validate->add_option("--g", vopts.g, "single-photon coupling constant");
  validate->add_option("--alpha", vopts.alpha, "optical depth");
  validate->add_option("--omega-c", omega_c_real, "coupling Rabi frequency");
  validate->add_option("--strict", vopts.bound, "deviation bound (default 1e-3)");
  validate->add_option("--dims", dims, "force dim_p = dim_c");
  validate->add_flag("--json", validate_json, "JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*compute) return run_compute(model, format, out_path);
    if (*sweep) return run_sweep(sweep, model, sweep_flags, sweep_format, out_path);
    if (*validate) {
      vopts.omega_c = omega_c_real;
      if (validate->count("--dims")) vopts.dims = dims;
      return run_validate(vopts, validate_json);
    }
  } catch (const qeit::TruncationError& e) {
    std::cerr << "truncation error: " << e.what() << "\n";
    return kExitTruncation;
  } catch (const qeit::DomainError& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
