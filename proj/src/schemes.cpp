// SPDX-License-Identifier: Apache-2.0

#include "rfcap/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rfcap/parallel.hpp"
#include "rfcap/waterfill.hpp"

namespace rfcap {

std::string scheme_label(SchemeId scheme, ConnectorType connector) {
  const bool sw = connector == ConnectorType::Switch;
  switch (scheme) {
    case SchemeId::BestSelection: return sw ? "BAS" : "BBS";
    case SchemeId::UniformModulationNoPa: return sw ? "USM" : "UBM";
    case SchemeId::UniformModulationPa: return sw ? "USM-PA" : "UBM-PA";
    case SchemeId::NonUniformModulation: return sw ? "NUSM" : "NUBM";
    case SchemeId::UpperBound: return sw ? "UB-switch" : "UB-beamformer";
  }
  return "?";
}

std::string_view to_string(SchemeId scheme) {
  switch (scheme) {
    case SchemeId::BestSelection: return "BestSelection";
    case SchemeId::UniformModulationNoPa: return "UniformModulationNoPa";
    case SchemeId::UniformModulationPa: return "UniformModulationPa";
    case SchemeId::NonUniformModulation: return "NonUniformModulation";
    case SchemeId::UpperBound: return "UpperBound";
  }
  return "?";
}

std::string_view to_string(RateMethod method) {
  return method == RateMethod::ClosedForm ? "ClosedForm" : "MonteCarlo";
}

namespace {

SchemeRate monte_carlo_row(SchemeId id, const EffectiveChannelSet& set, const MiEstimate& mi) {
  return SchemeRate{id, set.connector, set.snr.db(), std::max(0.0, mi.value), RateMethod::MonteCarlo, mi.std_error};
}

}  // namespace

std::vector<double> single_pattern_rates(const EffectiveChannelSet& set) {
  std::vector<double> rates;
  rates.reserve(set.size());
  for (const auto& s : set.svds) {
    if (s.rank == 0) {
      rates.push_back(0.0);
      continue;
    }
    const auto gains = squared_gains(s);
    const auto alloc = waterfill(gains, set.snr.linear, 1.0);
    rates.push_back(parallel_rate(gains, alloc.sigma_sq, set.snr.linear));
  }
  return rates;
}

SchemeRate rate_best_selection(const EffectiveChannelSet& set) {
  const auto rates = single_pattern_rates(set);
  // max_element keeps the first maximum, i.e. the lowest pattern index.
  const double best = *std::max_element(rates.begin(), rates.end());
  return SchemeRate{SchemeId::BestSelection, set.connector, set.snr.db(), best, RateMethod::ClosedForm, std::nullopt};
}

MixtureDesign uniform_design(const EffectiveChannelSet& set, bool with_pa) {
  const std::size_t n = set.size();
  MixtureDesign design;
  design.snr = set.snr;
  design.alpha.assign(n, 1.0 / static_cast<double>(n));
  design.covariances.reserve(n);
  if (!with_pa) {
    const int k = set.n_rf();
    for (std::size_t i = 0; i < n; ++i)
      design.covariances.push_back(ComplexMatrix::Identity(k, k) / static_cast<double>(k));
    return design;
  }

  std::vector<double> all_gains;
  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto g = squared_gains(set.svds[i]);
    all_gains.insert(all_gains.end(), g.begin(), g.end());
    offset[i + 1] = all_gains.size();
  }
  if (all_gains.empty()) throw NumericError("uniform_design: every effective channel is zero");
  const auto joint = waterfill(all_gains, set.snr.linear, static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    PowerAllocation part;
    part.sigma_sq.assign(joint.sigma_sq.begin() + static_cast<std::ptrdiff_t>(offset[i]),
                         joint.sigma_sq.begin() + static_cast<std::ptrdiff_t>(offset[i + 1]));
    part.water_level = joint.water_level;
    part.budget = std::accumulate(part.sigma_sq.begin(), part.sigma_sq.end(), 0.0);
    design.covariances.push_back(assemble_covariance(set.svds[i], part));
  }
  return design;
}

SchemeRate rate_uniform(const EffectiveChannelSet& set, bool with_pa, std::int64_t samples, std::uint64_t seed,
                        unsigned threads) {
  const auto design = uniform_design(set, with_pa);
  const auto dset = compute_dset(set, design.covariances);
  const auto mi = mutual_information_mc(design, dset, samples, seed, threads);
  return monte_carlo_row(with_pa ? SchemeId::UniformModulationPa : SchemeId::UniformModulationNoPa, set, mi);
}

SchemeRate rate_nonuniform(const EffectiveChannelSet& set, std::int64_t samples, std::uint64_t seed,
                           unsigned threads) {
  const auto opt = optimize_mixture(set);
  const auto mi = mutual_information_mc(opt.design, opt.dset, samples, seed, threads);
  return monte_carlo_row(SchemeId::NonUniformModulation, set, mi);
}

namespace closed_form {

double best_selection(std::span<const double> gains, double snr) {
  return std::log2(1.0 + snr * *std::max_element(gains.begin(), gains.end()));
}

double uniform(std::span<const double> gains, double snr) {
  double s = 0.0;
  for (double g : gains) s += std::log2(snr * g);
  const double n = static_cast<double>(gains.size());
  return s / n + std::log2(n);
}

double nonuniform(std::span<const double> gains, double snr) {
  return std::log2(snr * std::accumulate(gains.begin(), gains.end(), 0.0));
}

}  // namespace closed_form

std::vector<SchemeRate> compare_all(const ComplexMatrix& h, const SystemConfig& config,
                                    std::span<const double> snr_grid_db, std::int64_t samples, std::uint64_t seed,
                                    unsigned threads) {
  if (snr_grid_db.empty()) throw InvalidInput("compare_all: empty SNR grid");
  const std::size_t n_snr = snr_grid_db.size();
  std::vector<SchemeRate> rows(std::size(kAllSchemes) * n_snr);
  auto slot = [&](SchemeId id, std::size_t k) -> SchemeRate& { return rows[static_cast<std::size_t>(id) * n_snr + k]; };

  for (std::size_t k = 0; k < n_snr; ++k) {
    const auto set = build_effective_set(h, config, Snr::from_db(snr_grid_db[k]));
    const auto seed_of = [&](SchemeId id) { return derive_seed(seed, 100 + static_cast<std::uint64_t>(id)); };

    slot(SchemeId::BestSelection, k) = rate_best_selection(set);
    slot(SchemeId::UniformModulationNoPa, k) =
        rate_uniform(set, false, samples, seed_of(SchemeId::UniformModulationNoPa), threads);
    slot(SchemeId::UniformModulationPa, k) =
        rate_uniform(set, true, samples, seed_of(SchemeId::UniformModulationPa), threads);

    const auto opt = optimize_mixture(set);
    const auto mi = mutual_information_mc(opt.design, opt.dset, samples, seed_of(SchemeId::NonUniformModulation), threads);
    slot(SchemeId::NonUniformModulation, k) = monte_carlo_row(SchemeId::NonUniformModulation, set, mi);
    slot(SchemeId::UpperBound, k) =
        SchemeRate{SchemeId::UpperBound, set.connector, set.snr.db(), opt.c_bar, RateMethod::ClosedForm, std::nullopt};
  }
  return rows;
}

namespace {

bool usable_channel(const ComplexMatrix& h, const SystemConfig& config) {
  try {
    return build_effective_set(h, config, Snr{1.0}).common_rank.has_value();
  } catch (const AssumptionViolation&) {
    return false;
  }
}

}  // namespace

ErgodicResult ergodic_compare(const SystemConfig& config, int n_channels, std::span<const double> snr_grid_db,
                              std::int64_t samples, std::uint64_t seed, unsigned threads) {
  if (n_channels < 1) throw InvalidInput("ergodic_compare: need at least one channel");
  config.validate();
  constexpr int kMaxAttempts = 1000;

  const auto n = static_cast<std::size_t>(n_channels);
  std::vector<std::vector<SchemeRate>> per_channel(n);
  std::vector<int> rejected(n, 0);
  parallel_for(n_channels, threads, [&](std::int64_t k) {
    const std::uint64_t channel_seed = derive_seed(seed, static_cast<std::uint64_t>(k));
    ComplexMatrix h;
    int attempt = 0;
    for (;; ++attempt) {
      if (attempt == kMaxAttempts) {
        std::ostringstream msg;
        msg << "ergodic_compare: no usable channel for draw " << k << " after " << kMaxAttempts << " attempts";
        throw HypothesisError(msg.str());
      }
      h = rayleigh_channel(config.n_r, config.n_t, derive_seed(channel_seed, static_cast<std::uint64_t>(attempt)));
      if (usable_channel(h, config)) break;
    }
    rejected[static_cast<std::size_t>(k)] = attempt;
    per_channel[static_cast<std::size_t>(k)] =
        compare_all(h, config, snr_grid_db, samples, derive_seed(channel_seed, 0xC0FFEE), 1);
  });

  ErgodicResult out;
  out.redraws = std::accumulate(rejected.begin(), rejected.end(), 0);
  out.rows = per_channel.front();
  for (std::size_t r = 0; r < out.rows.size(); ++r) {
    double sum = 0.0, var = 0.0;
    for (const auto& ch : per_channel) {
      sum += ch[r].rate;
      if (ch[r].std_error) var += *ch[r].std_error * *ch[r].std_error;
    }
    out.rows[r].rate = sum / static_cast<double>(n);
    if (out.rows[r].std_error) out.rows[r].std_error = std::sqrt(var) / static_cast<double>(n);
  }
  return out;
}

}  // namespace rfcap
