// SPDX-License-Identifier: Apache-2.0
//
// Experiment orchestration behind the command-line tool: channel ingestion,
// run configuration, and CSV/JSON report emission.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rfcap/schemes.hpp"

namespace rfcap {

inline constexpr std::string_view kToolVersion = "0.1.0";

// ---- channel text format --------------------------------------------------
//
//   n_r n_t
//   a+bi a-bi ...      (n_r rows of n_t tokens)
//
// Tokens are "a+bi", "a-bi", a bare real "a", or a bare imaginary "bi";
// the imaginary unit may be written i or j.

std::complex<double> parse_complex_token(std::string_view token);
ComplexMatrix parse_channel_text(std::string_view text);
ComplexMatrix parse_channel_file(const std::filesystem::path& path);
/// Writes the channel format with `decimals` digits after the point.
std::string format_channel(const ComplexMatrix& h, int decimals = 4);

/// Named reference channels ("h2a", "h2b": 2x2; "h53": 3x5).
std::optional<ComplexMatrix> builtin_channel(std::string_view name);
std::vector<std::string> builtin_channel_names();

/// "start:step:stop" (inclusive) or a single value, in dB.
std::vector<double> parse_snr_grid(std::string_view text);

// ---- experiments ------------------------------------------------------------

enum class Command { Capacity, Sweep, Ergodic };
enum class OutputFormat { Csv, Json };

std::string_view to_string(Command c);
std::string_view to_string(OutputFormat f);

struct ExperimentSpec {
  Command command = Command::Sweep;
  /// Builtin name, "rayleigh:<n_r>x<n_t>", or a channel file path. Unused by
  /// Ergodic, which draws its own channels.
  std::string channel_source = "h2a";
  int n_rf = 1;
  /// Ergodic dimensions; other commands take them from the channel.
  int n_r = 2;
  int n_t = 2;
  std::vector<ConnectorType> connectors{ConnectorType::Switch};
  std::vector<double> snr_db_grid{0.0};
  std::int64_t samples = kDefaultMiSamples;
  std::uint64_t seed = 1;
  int channels = 100;
  unsigned threads = 0;
  OutputFormat format = OutputFormat::Csv;
  std::string output;  // empty: standard output

  void validate() const;
};

/// Single-SNR details of the optimized mixture for one connector.
struct CapacityBreakdown {
  ConnectorType connector = ConnectorType::Switch;
  double snr_db = 0.0;
  std::vector<std::vector<int>> patterns;
  std::vector<double> alpha;
  std::vector<double> logdets;
  double c_bar = 0.0;
  double high_snr_capacity = 0.0;
  double asymptotic_rate = 0.0;
  MiEstimate mi;
};

struct ReportMetadata {
  std::string tool_version{kToolVersion};
  double wall_time_s = 0.0;
  int redraw_count = 0;
};

struct CapacityReport {
  ExperimentSpec spec;
  std::vector<SchemeRate> rows;
  std::vector<CapacityBreakdown> breakdown;
  ReportMetadata metadata;
};

/// Resolves the channel source of a spec (builtin, file, or seeded draw).
ComplexMatrix load_channel(const ExperimentSpec& spec);

CapacityReport run(const ExperimentSpec& spec);

/// Header `scheme,snr_db,rate,std_error`; rows in connector, scheme, SNR order.
std::string to_csv(const CapacityReport& report);
/// UTF-8 JSON mirroring the report structure; wall time included.
std::string to_json(const CapacityReport& report);

}  // namespace rfcap
