// SPDX-License-Identifier: Apache-2.0
//
// rfcap: spectral efficiency of MIMO links with fewer RF chains than antennas.
//
//   rfcap capacity --channel h2a --connector switch --nrf 1 --snr-db 40
//   rfcap sweep    --channel h53 --nrf 2 --snr 0:3:30 --format json -o h53.json
//   rfcap ergodic  --nr 2 --nt 2 --nrf 1 --channels 100 --seed 7
//   rfcap channel  --channel h2b            (print a channel in file format)
//
// Exit codes: 0 ok, 1 other error, 2 channel parse error, 3 receive-DOF
// assumption violated, 4 patterns without a common rank.

#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "rfcap/experiment.hpp"

namespace {

std::vector<rfcap::ConnectorType> connectors_from(const std::string& name) {
  if (name == "both") return {rfcap::ConnectorType::Switch, rfcap::ConnectorType::Beamformer};
  return {rfcap::connector_from_string(name)};
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity of MIMO channels with reduced RF chains"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rfcap::kToolVersion));

  rfcap::ExperimentSpec spec;
  std::string connector = "both";
  std::string format;
  std::string snr_grid = "0:3:30";
  double snr_db = 20.0;

  const std::map<std::string, std::string> connector_names{
      {"switch", "switch"}, {"beamformer", "beamformer"}, {"both", "both"}};
  const std::map<std::string, std::string> format_names{{"csv", "csv"}, {"json", "json"}};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--connector", connector, "switch, beamformer or both")
        ->transform(CLI::CheckedTransformer(connector_names))
        ->capture_default_str();
    sub->add_option("--nrf", spec.n_rf, "number of RF chains")->capture_default_str();
    sub->add_option("--samples", spec.samples, "Monte Carlo samples per rate")->capture_default_str();
    sub->add_option("--seed", spec.seed, "base random seed")->capture_default_str();
    sub->add_option("--threads", spec.threads, "worker threads (0 = all cores)")->capture_default_str();
    sub->add_option("--format", format, "csv or json")->transform(CLI::CheckedTransformer(format_names));
    sub->add_option("-o,--output", spec.output, "output file (default: stdout)");
  };
  const std::string channel_help = "builtin (h2a, h2b, h53), rayleigh:<n_r>x<n_t>, or a channel file";

  auto* capacity = app.add_subcommand("capacity", "full breakdown at one SNR");
  capacity->add_option("--channel", spec.channel_source, channel_help)->capture_default_str();
  capacity->add_option("--snr-db", snr_db, "SNR in dB")->capture_default_str();
  add_common(capacity);

  auto* sweep = app.add_subcommand("sweep", "all schemes over an SNR grid");
  sweep->add_option("--channel", spec.channel_source, channel_help)->capture_default_str();
  sweep->add_option("--snr", snr_grid, "start:step:stop in dB")->capture_default_str();
  add_common(sweep);

  auto* ergodic = app.add_subcommand("ergodic", "average over i.i.d. Rayleigh channels");
  ergodic->add_option("--nr", spec.n_r, "receive antennas")->capture_default_str();
  ergodic->add_option("--nt", spec.n_t, "transmit antennas")->capture_default_str();
  ergodic->add_option("--channels", spec.channels, "number of channel draws")->capture_default_str();
  ergodic->add_option("--snr", snr_grid, "start:step:stop in dB")->capture_default_str();
  add_common(ergodic);

  std::string channel_out;
  auto* channel = app.add_subcommand("channel", "print a channel in the text format");
  channel->add_option("--channel", spec.channel_source, channel_help)->capture_default_str();
  channel->add_option("--seed", spec.seed, "seed for rayleigh sources")->capture_default_str();
  channel->add_option("-o,--output", channel_out, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (channel->parsed()) {
      emit(rfcap::format_channel(rfcap::load_channel(spec)), channel_out);
      return 0;
    }
    if (capacity->parsed()) {
      spec.command = rfcap::Command::Capacity;
      spec.snr_db_grid = {snr_db};
    } else {
      spec.command = sweep->parsed() ? rfcap::Command::Sweep : rfcap::Command::Ergodic;
      spec.snr_db_grid = rfcap::parse_snr_grid(snr_grid);
    }
    spec.connectors = connectors_from(connector);
    if (format.empty()) format = spec.command == rfcap::Command::Capacity ? "json" : "csv";
    spec.format = format == "json" ? rfcap::OutputFormat::Json : rfcap::OutputFormat::Csv;

    const auto report = rfcap::run(spec);
    emit(spec.format == rfcap::OutputFormat::Json ? rfcap::to_json(report) : rfcap::to_csv(report), spec.output);
    return 0;
  } catch (const rfcap::ParseError& e) {
    std::cerr << "error (line " << e.line() << "): " << e.what() << '\n';
    return 2;
  } catch (const rfcap::AssumptionViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const rfcap::HypothesisError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
