// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "rfcap/mixture.hpp"

namespace rfcap {

struct MiEstimate {
  double value = 0.0;      // bits/s/Hz
  double std_error = 0.0;  // CLT standard error of `value`
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Samples per deterministic RNG chunk of the Monte Carlo estimator.
inline constexpr std::int64_t kMiChunk = 4096;
inline constexpr std::int64_t kDefaultMiSamples = 100000;

/// Deterministic 64-bit mixing of a base seed with a stream index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Monte Carlo estimate of I(x; y) for the Gaussian-mixture input:
/// draw i ~ alpha, y ~ CN(0, D_i), average -log2 sum_j alpha_j f_j(y) and
/// subtract dim * log2(pi e). Samples are generated in fixed chunks, each
/// with its own derived seed, so the result is bit-identical for any
/// `threads` value (0 picks the hardware concurrency).
MiEstimate mutual_information_mc(const MixtureDesign& design, const DSet& dset, std::int64_t samples,
                                 std::uint64_t seed, unsigned threads = 0);

/// Pairwise-overlap high-SNR rate
///   -sum_i alpha_i log2( sum_j alpha_j / det(D_i + D_j) ) - dim,
/// whose cross terms vanish as SNR grows, leaving the upper bound.
double asymptotic_rate(const MixtureDesign& design, const DSet& dset);

}  // namespace rfcap
