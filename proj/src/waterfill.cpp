// SPDX-License-Identifier: Apache-2.0

#include "rfcap/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rfcap {

std::size_t PowerAllocation::active_count() const {
  return static_cast<std::size_t>(std::count_if(sigma_sq.begin(), sigma_sq.end(), [](double p) { return p > 0.0; }));
}

PowerAllocation waterfill(std::span<const double> gains, double snr, double budget) {
  if (gains.empty()) throw InvalidInput("waterfill: no sub-channels");
  if (!(snr > 0.0) || !std::isfinite(snr)) throw InvalidInput("waterfill: snr must be positive");
  if (!(budget > 0.0) || !std::isfinite(budget)) throw InvalidInput("waterfill: budget must be positive");
  for (double g : gains)
    if (!(g > 0.0) || !std::isfinite(g)) throw InvalidInput("waterfill: gains must be positive and finite");

  const std::size_t n = gains.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gains[a] > gains[b]; });

  // Inverse SNR floor of each sub-channel, strongest first.
  std::vector<double> floor(n);
  for (std::size_t k = 0; k < n; ++k) floor[k] = 1.0 / (snr * gains[order[k]]);

  double prefix = std::accumulate(floor.begin(), floor.end(), 0.0);
  std::size_t active = n;
  double level = 0.0;
  for (; active > 0; --active) {
    level = (budget + prefix) / static_cast<double>(active);
    if (level - floor[active - 1] >= 0.0) break;
    prefix -= floor[active - 1];
  }

  PowerAllocation out;
  out.budget = budget;
  out.water_level = level;
  out.sigma_sq.assign(n, 0.0);
  for (std::size_t k = 0; k < active; ++k) out.sigma_sq[order[k]] = std::max(0.0, level - floor[k]);
  return out;
}

double parallel_rate(std::span<const double> gains, std::span<const double> powers, double snr) {
  if (gains.size() != powers.size()) throw InvalidInput("parallel_rate: length mismatch");
  double r = 0.0;
  for (std::size_t j = 0; j < gains.size(); ++j) r += std::log2(1.0 + snr * gains[j] * powers[j]);
  return r;
}

ComplexMatrix assemble_covariance(const SvdResult<double>& decomposition, const PowerAllocation& alloc) {
  if (static_cast<Eigen::Index>(alloc.sigma_sq.size()) != decomposition.rank) {
    std::ostringstream msg;
    msg << "assemble_covariance: " << alloc.sigma_sq.size() << " powers for rank " << decomposition.rank;
    throw InvalidInput(msg.str());
  }
  const Eigen::Map<const RealVector> p(alloc.sigma_sq.data(), decomposition.rank);
  const ComplexMatrix& v = decomposition.v;
  ComplexMatrix q = v * p.cast<std::complex<double>>().asDiagonal() * v.adjoint();
  // Remove the rounding asymmetry so downstream Hermitian checks are exact.
  return (0.5 * (q + q.adjoint())).eval();
}

std::vector<double> squared_gains(const SvdResult<double>& decomposition) {
  std::vector<double> g(static_cast<std::size_t>(decomposition.rank));
  for (Eigen::Index j = 0; j < decomposition.rank; ++j) g[static_cast<std::size_t>(j)] = decomposition.singular_values(j) * decomposition.singular_values(j);
  return g;
}

}  // namespace rfcap
