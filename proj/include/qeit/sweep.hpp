#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qeit/engine.hpp"

namespace qeit {

enum class SweepAxis { Omega, Gamma0 };
enum class Spacing { Linear, Log };

/// A one-dimensional scan over two-photon detuning or ground-state dephasing.
struct SweepSpec {
  SweepAxis axis = SweepAxis::Gamma0;
  double start = 1e-6;
  double stop = 1e-1;
  int points = 201;
  Spacing spacing = Spacing::Log;
  bool prepend_zero = true;  ///< put an explicit 0 in front of the grid

  EitConfig cfg;       ///< cfg.gamma0 is the fixed value on an omega sweep
  double omega = 0.0;  ///< fixed detuning on a gamma0 sweep
  ProbeState probe = CoherentProbe{};
  CouplingState coupling = CoherentCoupling{};
  TruncationPolicy trunc;
  bool with_deltas = true;  ///< compute the dT / dF columns

  /// Throws DomainError on points < 2, start >= stop, or log spacing with start <= 0.
  void validate() const;
  std::vector<double> grid() const;
};

struct SweepRow {
  double omega = 0.0;
  double gamma0 = 0.0;
  double T = 0.0;
  double F = 0.0;
  double dT = 0.0;
  double dF = 0.0;
  cplx c1;
  double g = 0.0;
  double n_p0 = 0.0;
};

/// Evaluates every grid point. Points run concurrently on `threads` workers
/// (0 = hardware concurrency); rows come back in grid order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 0);

std::vector<std::string> preset_names();

/// Figure presets fig2a ... fig6b. Throws std::invalid_argument for unknown names.
SweepSpec preset(std::string_view name);

inline constexpr std::string_view kCsvHeader = "omega,gamma0,T,F,dT,dF,c1_re,c1_im,g,n_p0";

/// Shortest round-trip decimal representation.
std::string format_double(double value);

/// Writes an optional '#' provenance line, the header and one row per point.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows,
               std::string_view provenance = {});

/// JSON array of row objects.
std::string rows_to_json(const std::vector<SweepRow>& rows, int indent = 2);

/// "coherent:<re>[,<im>]" or "fock:<n>". Throws std::invalid_argument.
ProbeState parse_probe(std::string_view text);
/// "coherent" or "squeezed:<r>,<theta>". Throws std::invalid_argument.
CouplingState parse_coupling(std::string_view text);

std::string to_string(const ProbeState& probe);
std::string to_string(const CouplingState& coupling);

/// Key=value summary of every parameter that determines a sweep.
std::string describe(const SweepSpec& spec);

}  // namespace qeit
