// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "rfcap/linalg.hpp"

namespace rfcap {

/// Power per parallel sub-channel, in the caller's gain order.
struct PowerAllocation {
  std::vector<double> sigma_sq;
  /// mu in sigma_j = max(0, mu - 1/(snr * gain_j)).
  double water_level = 0.0;
  double budget = 0.0;

  std::size_t active_count() const;
};

/// Water-filling over parallel channels with squared gains `gains`, exact
/// active-set solution: sort descending, close the prefix sum, shrink the
/// prefix until its weakest member stays nonnegative.
PowerAllocation waterfill(std::span<const double> gains, double snr, double budget);

/// sum_j log2(1 + snr * gain_j * p_j).
double parallel_rate(std::span<const double> gains, std::span<const double> powers, double snr);

/// Q = V diag(sigma_sq) V^H, the input covariance that drives each
/// right-singular direction of the effective channel with its allocated power.
ComplexMatrix assemble_covariance(const SvdResult<double>& decomposition, const PowerAllocation& alloc);

/// Squared singular values of a decomposition, descending.
std::vector<double> squared_gains(const SvdResult<double>& decomposition);

}  // namespace rfcap
