// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rfcap/linalg.hpp"

namespace rfcap {

/// Device between the RF chains and the transmit antennas.
enum class ConnectorType { Switch, Beamformer };

std::string_view to_string(ConnectorType c);
ConnectorType connector_from_string(std::string_view name);

/// Linear receive SNR. Signal amplitude scales as sqrt(linear), so the
/// receive covariance under pattern i is I + linear * H_i Q_i H_i^H.
struct Snr {
  double linear = 1.0;

  static Snr from_db(double db) { return Snr{std::pow(10.0, db / 10.0)}; }
  double db() const { return 10.0 * std::log10(linear); }
};

/// (n_t, n_r, n_rf) system with its connector. Requires 1 <= n_rf < n_t and
/// n_rf < n_r.
struct SystemConfig {
  int n_t = 2;
  int n_r = 2;
  int n_rf = 1;
  ConnectorType connector = ConnectorType::Switch;

  void validate() const;
};

/// Selects n_rf coordinates of the ambient (antenna or eigen-beam) space.
/// Indices are strictly increasing.
struct SparsityPattern {
  std::vector<int> selected;

  /// ambient_dim x n_rf indicator whose columns are standard basis vectors.
  ComplexMatrix indicator(int ambient_dim) const;
  bool operator==(const SparsityPattern&) const = default;
};

/// All effective channels of a system at a fixed SNR. Immutable once built.
struct EffectiveChannelSet {
  ConnectorType connector = ConnectorType::Switch;
  int ambient_dim = 0;
  std::vector<SparsityPattern> patterns;
  std::vector<ComplexMatrix> effective;
  std::vector<SvdResult<double>> svds;
  Snr snr;
  /// Shared rank of every effective channel, absent when ranks differ.
  std::optional<int> common_rank;

  std::size_t size() const { return patterns.size(); }
  /// Dimension of the (possibly rotated) receive signal.
  Eigen::Index receive_dim() const { return effective.empty() ? 0 : effective.front().rows(); }
  int n_rf() const { return effective.empty() ? 0 : static_cast<int>(effective.front().cols()); }
};

/// Binomial coefficient, exact for the sizes handled here.
std::size_t choose(int n, int k);

/// All n_rf-subsets of {0..ambient_dim-1} in lexicographic order.
std::vector<SparsityPattern> enumerate_patterns(int ambient_dim, int n_rf);

/// Switch: columns subsets H E_i. Beamformer: Lambda E_i' with Lambda the
/// diagonal of nonzero singular values of H. Throws AssumptionViolation when
/// the receive degrees of freedom (n_r, or rank(H)) do not exceed n_rf.
EffectiveChannelSet build_effective_set(const ComplexMatrix& h, const SystemConfig& config, Snr snr);

/// i.i.d. CN(0, 1) entries, deterministic per seed.
ComplexMatrix rayleigh_channel(int n_r, int n_t, std::uint64_t seed);

/// Squared norm of a single-column effective channel.
double channel_gain(const ComplexMatrix& effective);

}  // namespace rfcap
