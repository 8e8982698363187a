// SPDX-License-Identifier: Apache-2.0

#include "rfcap/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace rfcap {

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Capacity: return "capacity";
    case Command::Sweep: return "sweep";
    case Command::Ergodic: return "ergodic";
  }
  return "?";
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

void ExperimentSpec::validate() const {
  if (snr_db_grid.empty()) throw InvalidInput("SNR grid is empty");
  if (!std::is_sorted(snr_db_grid.begin(), snr_db_grid.end()))
    throw InvalidInput("SNR grid must be sorted ascending");
  for (double s : snr_db_grid)
    if (!std::isfinite(s)) throw InvalidInput("SNR grid has non-finite values");
  if (samples < 1000) throw InvalidInput("Monte Carlo schemes need at least 1000 samples");
  if (connectors.empty()) throw InvalidInput("no connector selected");
  if (command == Command::Ergodic && channels < 1) throw InvalidInput("need at least one channel");
  if (command == Command::Capacity && snr_db_grid.size() != 1)
    throw InvalidInput("capacity evaluates a single SNR");
}

ComplexMatrix load_channel(const ExperimentSpec& spec) {
  if (auto h = builtin_channel(spec.channel_source)) return *h;
  constexpr std::string_view kRayleigh = "rayleigh:";
  if (spec.channel_source.starts_with(kRayleigh)) {
    const std::string_view dims = std::string_view(spec.channel_source).substr(kRayleigh.size());
    const auto x = dims.find('x');
    int n_r = 0, n_t = 0;
    bool ok = x != std::string_view::npos;
    if (ok) {
      const auto a = std::from_chars(dims.data(), dims.data() + x, n_r);
      const auto b = std::from_chars(dims.data() + x + 1, dims.data() + dims.size(), n_t);
      ok = a.ec == std::errc{} && a.ptr == dims.data() + x && b.ec == std::errc{} &&
           b.ptr == dims.data() + dims.size() && n_r > 0 && n_t > 0;
    }
    if (!ok) throw InvalidInput("channel source '" + spec.channel_source + "' is not rayleigh:<n_r>x<n_t>");
    return rayleigh_channel(n_r, n_t, derive_seed(spec.seed, 0x5eed));
  }
  return parse_channel_file(spec.channel_source);
}

namespace {

CapacityBreakdown breakdown_for(const ComplexMatrix& h, const SystemConfig& config, const ExperimentSpec& spec) {
  const double snr_db = spec.snr_db_grid.front();
  const auto set = build_effective_set(h, config, Snr::from_db(snr_db));
  const auto opt = optimize_mixture(set);

  CapacityBreakdown b;
  b.connector = config.connector;
  b.snr_db = snr_db;
  for (const auto& p : set.patterns) b.patterns.push_back(p.selected);
  b.alpha = opt.design.alpha;
  b.logdets = opt.dset.logdets;
  b.c_bar = opt.c_bar;
  b.high_snr_capacity = high_snr_capacity(opt.dset);
  b.asymptotic_rate = asymptotic_rate(opt.design, opt.dset);
  // Same stream as the NonUniformModulation row of compare_all.
  b.mi = mutual_information_mc(opt.design, opt.dset, spec.samples,
                               derive_seed(spec.seed, 100 + static_cast<std::uint64_t>(SchemeId::NonUniformModulation)),
                               spec.threads);
  return b;
}

}  // namespace

CapacityReport run(const ExperimentSpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();

  CapacityReport report;
  report.spec = spec;

  if (spec.command == Command::Ergodic) {
    for (ConnectorType connector : spec.connectors) {
      const SystemConfig config{spec.n_t, spec.n_r, spec.n_rf, connector};
      auto result = ergodic_compare(config, spec.channels, spec.snr_db_grid, spec.samples, spec.seed, spec.threads);
      report.rows.insert(report.rows.end(), result.rows.begin(), result.rows.end());
      report.metadata.redraw_count += result.redraws;
    }
  } else {
    const ComplexMatrix h = load_channel(spec);
    report.spec.n_r = static_cast<int>(h.rows());
    report.spec.n_t = static_cast<int>(h.cols());
    for (ConnectorType connector : spec.connectors) {
      const SystemConfig config{static_cast<int>(h.cols()), static_cast<int>(h.rows()), spec.n_rf, connector};
      auto rows = compare_all(h, config, spec.snr_db_grid, spec.samples, spec.seed, spec.threads);
      report.rows.insert(report.rows.end(), rows.begin(), rows.end());
      if (spec.command == Command::Capacity) report.breakdown.push_back(breakdown_for(h, config, spec));
    }
  }

  report.metadata.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string to_csv(const CapacityReport& report) {
  std::ostringstream out;
  out << "scheme,snr_db,rate,std_error\n";
  for (const auto& r : report.rows) {
    out << scheme_label(r.scheme, r.connector) << ',' << number(r.snr_db) << ',' << number(r.rate) << ','
        << (r.std_error ? number(*r.std_error) : std::string{}) << '\n';
  }
  return out.str();
}

std::string to_json(const CapacityReport& report) {
  using nlohmann::json;
  const auto& s = report.spec;

  json connectors = json::array();
  for (auto c : s.connectors) connectors.push_back(to_string(c));
  json spec = {{"command", to_string(s.command)},
               {"channel_source", s.command == Command::Ergodic ? "rayleigh" : s.channel_source},
               {"config", {{"n_t", s.n_t}, {"n_r", s.n_r}, {"n_rf", s.n_rf}, {"connectors", connectors}}},
               {"snr_db_grid", s.snr_db_grid},
               {"samples", s.samples},
               {"seed", s.seed},
               {"output", {{"path", s.output}, {"format", to_string(s.format)}}}};
  if (s.command == Command::Ergodic) spec["channels"] = s.channels;

  json rows = json::array();
  for (const auto& r : report.rows) {
    json row = {{"scheme", to_string(r.scheme)},
                {"label", scheme_label(r.scheme, r.connector)},
                {"connector", to_string(r.connector)},
                {"snr_db", r.snr_db},
                {"rate", r.rate},
                {"method", to_string(r.method)}};
    row["std_error"] = r.std_error ? json(*r.std_error) : json(nullptr);
    rows.push_back(std::move(row));
  }

  json out = {{"spec", spec},
              {"rows", rows},
              {"metadata",
               {{"tool_version", report.metadata.tool_version},
                {"wall_time_s", report.metadata.wall_time_s},
                {"redraw_count", report.metadata.redraw_count}}}};

  if (!report.breakdown.empty()) {
    json details = json::array();
    for (const auto& b : report.breakdown)
      details.push_back({{"connector", to_string(b.connector)},
                         {"snr_db", b.snr_db},
                         {"patterns", b.patterns},
                         {"alpha", b.alpha},
                         {"logdets", b.logdets},
                         {"c_bar", b.c_bar},
                         {"high_snr_capacity", b.high_snr_capacity},
                         {"asymptotic_rate", b.asymptotic_rate},
                         {"mi", {{"value", b.mi.value}, {"std_error", b.mi.std_error}, {"samples", b.mi.samples},
                                 {"seed", b.mi.seed}}}});
    out["breakdown"] = details;
  }
  return out.dump(2) + "\n";
}

}  // namespace rfcap
