// SPDX-License-Identifier: Apache-2.0
//
// Gaussian-mixture input design: pattern i is activated with probability
// alpha_i and then carries CN(0, Q_i) on its RF chains. All determinant
// arithmetic is done on log2 determinants.

#pragma once

#include <span>
#include <vector>

#include "rfcap/channel.hpp"

namespace rfcap {

/// Mixture weights over patterns plus per-pattern input covariances.
struct MixtureDesign {
  std::vector<double> alpha;
  std::vector<ComplexMatrix> covariances;
  Snr snr;

  /// sum_i alpha_i tr(Q_i).
  double average_power() const;
  /// Throws InvalidInput unless alpha is a probability vector and the average
  /// power is at most one.
  void validate() const;
};

/// Receive covariances D_i = I + snr * H_i Q_i H_i^H and their log2 dets.
struct DSet {
  std::vector<ComplexMatrix> d;
  std::vector<double> logdets;

  std::size_t size() const { return d.size(); }
  Eigen::Index dim() const { return d.empty() ? 0 : d.front().rows(); }
};

DSet compute_dset(const EffectiveChannelSet& set, std::span<const ComplexMatrix> covariances);

/// log2 sum_i 2^{x_i}, shifted by the maximum.
double log2_sum_exp2(std::span<const double> x);

/// -sum alpha_i log2 alpha_i with 0 log 0 = 0.
double entropy_bits(std::span<const double> alpha);

/// alpha_i proportional to det(D_i).
std::vector<double> optimal_alpha(const DSet& dset);

/// sum_i alpha_i log2 det D_i + H(alpha).
double capacity_upper_bound(const MixtureDesign& design, const DSet& dset);

/// log2 sum_i det(D_i).
double high_snr_capacity(const DSet& dset);

struct OptimizedMixture {
  MixtureDesign design;
  DSet dset;
  double c_bar = 0.0;
};

/// Per-pattern water-filling with unit power, then the closed-form weights.
/// Throws HypothesisError when the patterns do not share a common rank.
OptimizedMixture optimize_mixture(const EffectiveChannelSet& set);

}  // namespace rfcap
