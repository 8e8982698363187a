// SPDX-License-Identifier: Apache-2.0

#include "rfcap/channel.hpp"

#include <sstream>

namespace rfcap {

std::string_view to_string(ConnectorType c) {
  return c == ConnectorType::Switch ? "switch" : "beamformer";
}

ConnectorType connector_from_string(std::string_view name) {
  if (name == "switch") return ConnectorType::Switch;
  if (name == "beamformer") return ConnectorType::Beamformer;
  throw InvalidInput("unknown connector '" + std::string(name) + "'");
}

void SystemConfig::validate() const {
  std::ostringstream msg;
  if (n_t < 1 || n_r < 1 || n_rf < 1) {
    msg << "system dimensions must be positive (n_t=" << n_t << ", n_r=" << n_r << ", n_rf=" << n_rf << ")";
    throw ConfigError(msg.str());
  }
  if (n_rf >= n_t || n_rf >= n_r) {
    msg << "reduced-RF regime requires n_rf < n_t and n_rf < n_r (n_t=" << n_t << ", n_r=" << n_r
        << ", n_rf=" << n_rf << ")";
    throw ConfigError(msg.str());
  }
}

ComplexMatrix SparsityPattern::indicator(int ambient_dim) const {
  ComplexMatrix e = ComplexMatrix::Zero(ambient_dim, static_cast<Eigen::Index>(selected.size()));
  for (std::size_t c = 0; c < selected.size(); ++c) e(selected[c], static_cast<Eigen::Index>(c)) = 1.0;
  return e;
}

std::size_t choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

std::vector<SparsityPattern> enumerate_patterns(int ambient_dim, int n_rf) {
  if (n_rf < 1 || n_rf > ambient_dim) {
    std::ostringstream msg;
    msg << "cannot select " << n_rf << " of " << ambient_dim << " coordinates";
    throw ConfigError(msg.str());
  }
  std::vector<SparsityPattern> out;
  out.reserve(choose(ambient_dim, n_rf));
  std::vector<int> idx(static_cast<std::size_t>(n_rf));
  for (int i = 0; i < n_rf; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    out.push_back(SparsityPattern{idx});
    // Advance the rightmost index that still has room.
    int pos = n_rf - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == ambient_dim - n_rf + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < n_rf; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

EffectiveChannelSet build_effective_set(const ComplexMatrix& h, const SystemConfig& config, Snr snr) {
  config.validate();
  if (h.rows() != config.n_r || h.cols() != config.n_t) {
    std::ostringstream msg;
    msg << "channel is " << h.rows() << "x" << h.cols() << ", config expects " << config.n_r << "x" << config.n_t;
    throw InvalidInput(msg.str());
  }
  if (!all_finite(h)) throw InvalidInput("channel has non-finite entries");
  if (!(snr.linear > 0.0) || !std::isfinite(snr.linear)) throw InvalidInput("snr must be positive and finite");

  EffectiveChannelSet set;
  set.connector = config.connector;
  set.snr = snr;

  ComplexMatrix base;
  if (config.connector == ConnectorType::Switch) {
    if (config.n_r <= config.n_rf) {
      std::ostringstream msg;
      msg << "switch connector needs more receive antennas than RF chains (n_r=" << config.n_r
          << ", n_rf=" << config.n_rf << ")";
      throw AssumptionViolation(msg.str());
    }
    base = h;
  } else {
    const auto decomposition = svd(h);
    if (decomposition.rank <= config.n_rf) {
      std::ostringstream msg;
      msg << "beamformer connector needs rank(H) > n_rf (rank=" << decomposition.rank << ", n_rf=" << config.n_rf
          << ")";
      throw AssumptionViolation(msg.str());
    }
    base = decomposition.singular_values.cast<std::complex<double>>().asDiagonal();
  }
  set.ambient_dim = static_cast<int>(base.cols());
  set.patterns = enumerate_patterns(set.ambient_dim, config.n_rf);

  set.effective.reserve(set.patterns.size());
  set.svds.reserve(set.patterns.size());
  for (const auto& p : set.patterns) {
    ComplexMatrix eff(base.rows(), config.n_rf);
    for (std::size_t c = 0; c < p.selected.size(); ++c) eff.col(static_cast<Eigen::Index>(c)) = base.col(p.selected[c]);
    set.svds.push_back(svd(eff));
    set.effective.push_back(std::move(eff));
  }

  const auto r0 = set.svds.front().rank;
  bool same = true;
  for (const auto& s : set.svds) same = same && s.rank == r0;
  if (same && r0 > 0) set.common_rank = static_cast<int>(r0);
  return set;
}

ComplexMatrix rayleigh_channel(int n_r, int n_t, std::uint64_t seed) {
  if (n_r < 1 || n_t < 1) throw InvalidInput("rayleigh_channel: dimensions must be positive");
  std::mt19937_64 rng(seed);
  return standard_complex_normal<double>(n_r, n_t, rng);
}

double channel_gain(const ComplexMatrix& effective) {
  if (effective.cols() != 1) throw InvalidInput("channel_gain: defined for single-column channels only");
  return effective.squaredNorm();
}

}  // namespace rfcap
