// SPDX-License-Identifier: Apache-2.0
//
// Transmission schemes for RF-chain-limited MIMO, each evaluated as a
// spectral efficiency at one SNR:
//   BestSelection          BAS / BBS: always transmit on the best pattern
//   UniformModulation*     USM / UBM: equiprobable pattern activation
//   NonUniformModulation   NUSM / NUBM: optimized activation probabilities
//   UpperBound             the mixture upper bound at the optimized design

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rfcap/mi.hpp"

namespace rfcap {

enum class SchemeId { BestSelection, UniformModulationNoPa, UniformModulationPa, NonUniformModulation, UpperBound };

inline constexpr SchemeId kAllSchemes[] = {SchemeId::BestSelection, SchemeId::UniformModulationNoPa,
                                           SchemeId::UniformModulationPa, SchemeId::NonUniformModulation,
                                           SchemeId::UpperBound};

enum class RateMethod { ClosedForm, MonteCarlo };

/// Conventional name of a scheme for a connector, e.g. "NUSM" or "BBS".
std::string scheme_label(SchemeId scheme, ConnectorType connector);
std::string_view to_string(SchemeId scheme);
std::string_view to_string(RateMethod method);

struct SchemeRate {
  SchemeId scheme = SchemeId::BestSelection;
  ConnectorType connector = ConnectorType::Switch;
  double snr_db = 0.0;
  double rate = 0.0;
  RateMethod method = RateMethod::ClosedForm;
  /// Present iff method is MonteCarlo.
  std::optional<double> std_error;
};

/// Water-filled unit-power capacity of each pattern used alone.
std::vector<double> single_pattern_rates(const EffectiveChannelSet& set);

SchemeRate rate_best_selection(const EffectiveChannelSet& set);

/// Equiprobable activation. Without power allocation every pattern sends
/// I / n_rf. With it, all sub-channels of all patterns share one water level
/// and an average budget of one, i.e. a joint budget of N_c.
MixtureDesign uniform_design(const EffectiveChannelSet& set, bool with_pa);
SchemeRate rate_uniform(const EffectiveChannelSet& set, bool with_pa, std::int64_t samples, std::uint64_t seed,
                        unsigned threads = 0);

SchemeRate rate_nonuniform(const EffectiveChannelSet& set, std::int64_t samples, std::uint64_t seed,
                           unsigned threads = 0);

/// High-SNR closed forms for a single RF chain, in terms of the per-pattern
/// gains g_i.
namespace closed_form {
/// log2(1 + snr max g).
double best_selection(std::span<const double> gains, double snr);
/// mean_i log2(snr g_i) + log2 N; for two patterns log2(2 snr sqrt(g1 g2)).
double uniform(std::span<const double> gains, double snr);
/// log2(snr sum g).
double nonuniform(std::span<const double> gains, double snr);
}  // namespace closed_form

/// Every scheme at every grid point for one channel. Rows are ordered by
/// scheme, then by SNR. Each Monte Carlo scheme uses one derived seed across
/// the whole grid.
std::vector<SchemeRate> compare_all(const ComplexMatrix& h, const SystemConfig& config,
                                    std::span<const double> snr_grid_db, std::int64_t samples, std::uint64_t seed,
                                    unsigned threads = 0);

struct ErgodicResult {
  std::vector<SchemeRate> rows;
  /// Draws rejected because they broke the receive-DOF assumption or the
  /// common-rank hypothesis.
  int redraws = 0;
};

/// Mean of compare_all over i.i.d. Rayleigh channels. Channel k is drawn from
/// derive_seed(derive_seed(seed, k), attempt), so the draws do not depend on
/// the connector or the grid.
ErgodicResult ergodic_compare(const SystemConfig& config, int n_channels, std::span<const double> snr_grid_db,
                              std::int64_t samples, std::uint64_t seed, unsigned threads = 0);

}  // namespace rfcap
