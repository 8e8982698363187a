// SPDX-License-Identifier: Apache-2.0

#include "rfcap/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rfcap/waterfill.hpp"

namespace rfcap {

double MixtureDesign::average_power() const {
  double p = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) p += alpha[i] * std::real(covariances[i].trace());
  return p;
}

void MixtureDesign::validate() const {
  if (alpha.empty() || alpha.size() != covariances.size())
    throw InvalidInput("mixture design: need one covariance per weight");
  double total = 0.0;
  for (double a : alpha) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidInput("mixture design: weights must be nonnegative");
    total += a;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidInput("mixture design: weights do not sum to one");
  if (average_power() > 1.0 + 1e-9) throw InvalidInput("mixture design: average power exceeds one");
}

DSet compute_dset(const EffectiveChannelSet& set, std::span<const ComplexMatrix> covariances) {
  if (covariances.size() != set.size()) {
    std::ostringstream msg;
    msg << "compute_dset: " << covariances.size() << " covariances for " << set.size() << " patterns";
    throw InvalidInput(msg.str());
  }
  DSet out;
  out.d.reserve(set.size());
  out.logdets.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const ComplexMatrix& h = set.effective[i];
    const ComplexMatrix& q = covariances[i];
    if (q.rows() != h.cols() || q.cols() != h.cols()) {
      std::ostringstream msg;
      msg << "compute_dset: covariance " << i << " is " << q.rows() << "x" << q.cols() << ", expected " << h.cols()
          << "x" << h.cols();
      throw InvalidInput(msg.str());
    }
    ComplexMatrix d = ComplexMatrix::Identity(h.rows(), h.rows()) + set.snr.linear * h * q * h.adjoint();
    d = (0.5 * (d + d.adjoint())).eval();
    out.logdets.push_back(logdet_hpd(d));
    out.d.push_back(std::move(d));
  }
  return out;
}

double log2_sum_exp2(std::span<const double> x) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : x) s += std::exp2(v - m);
  return m + std::log2(s);
}

double entropy_bits(std::span<const double> alpha) {
  double h = 0.0;
  for (double a : alpha)
    if (a > 0.0) h -= a * std::log2(a);
  return h;
}

std::vector<double> optimal_alpha(const DSet& dset) {
  if (dset.logdets.empty()) throw InvalidInput("optimal_alpha: empty set");
  const double m = *std::max_element(dset.logdets.begin(), dset.logdets.end());
  std::vector<double> alpha(dset.logdets.size());
  double s = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) s += alpha[i] = std::exp2(dset.logdets[i] - m);
  for (double& a : alpha) a /= s;
  return alpha;
}

double capacity_upper_bound(const MixtureDesign& design, const DSet& dset) {
  if (design.alpha.size() != dset.size()) throw InvalidInput("capacity_upper_bound: size mismatch");
  double c = entropy_bits(design.alpha);
  for (std::size_t i = 0; i < dset.size(); ++i)
    if (design.alpha[i] > 0.0) c += design.alpha[i] * dset.logdets[i];
  return c;
}

double high_snr_capacity(const DSet& dset) { return log2_sum_exp2(dset.logdets); }

OptimizedMixture optimize_mixture(const EffectiveChannelSet& set) {
  if (!set.common_rank) {
    std::ostringstream msg;
    msg << "effective channels have unequal ranks (";
    for (std::size_t i = 0; i < set.size(); ++i) msg << (i ? "," : "") << set.svds[i].rank;
    msg << "); the closed-form mixture optimum requires a common rank";
    throw HypothesisError(msg.str());
  }
  OptimizedMixture out;
  out.design.snr = set.snr;
  out.design.covariances.reserve(set.size());
  for (const auto& s : set.svds) {
    const auto gains = squared_gains(s);
    const auto alloc = waterfill(gains, set.snr.linear, 1.0);
    out.design.covariances.push_back(assemble_covariance(s, alloc));
  }
  out.dset = compute_dset(set, out.design.covariances);
  out.design.alpha = optimal_alpha(out.dset);
  out.c_bar = capacity_upper_bound(out.design, out.dset);
  return out;
}

}  // namespace rfcap
