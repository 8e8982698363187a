// SPDX-License-Identifier: Apache-2.0

#include "rfcap/mi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <limits>
#include <vector>

#include "rfcap/parallel.hpp"

namespace rfcap {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over seed and stream.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

struct ChunkSum {
  double sum = 0.0;
  double sum_sq = 0.0;
};

// Per-component data for log-density evaluation in natural log units.
struct Component {
  ComplexMatrix chol;      // lower Cholesky factor of D_j
  ComplexMatrix chol_inv;  // its inverse
  double log_weight = 0.0; // ln alpha_j - dim ln pi - ln det D_j
};

class MixtureSampler {
 public:
  MixtureSampler(const MixtureDesign& design, const DSet& dset) : dim_(dset.dim()) {
    const double log_pi = std::log(std::numbers::pi);
    for (std::size_t j = 0; j < dset.size(); ++j) {
      Eigen::LLT<ComplexMatrix> llt(dset.d[j]);
      if (llt.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "mutual_information_mc: covariance of pattern " << j << " is singular";
        throw NumericError(msg.str());
      }
      Component c;
      c.chol = llt.matrixL();
      c.chol_inv = c.chol.triangularView<Eigen::Lower>().solve(ComplexMatrix::Identity(dim_, dim_));
      const double alpha = design.alpha[j];
      c.log_weight = alpha > 0.0 ? std::log(alpha) - static_cast<double>(dim_) * log_pi -
                                       dset.logdets[j] * std::numbers::ln2
                                 : -std::numeric_limits<double>::infinity();
      components_.push_back(std::move(c));
    }
    weights_ = design.alpha;
  }

  ChunkSum run_chunk(std::int64_t count, std::uint64_t chunk_seed) const {
    std::mt19937_64 rng(chunk_seed);
    std::discrete_distribution<std::size_t> pick(weights_.begin(), weights_.end());
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    ComplexVector z(dim_), y(dim_), w(dim_);
    std::vector<double> terms(components_.size());
    ChunkSum acc;
    for (std::int64_t s = 0; s < count; ++s) {
      const std::size_t i = pick(rng);
      for (Eigen::Index r = 0; r < dim_; ++r) {
        const double re = normal(rng);
        const double im = normal(rng);
        z(r) = {re, im};
      }
      y.noalias() = components_[i].chol.triangularView<Eigen::Lower>() * z;
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < components_.size(); ++j) {
        if (!std::isfinite(components_[j].log_weight)) {
          terms[j] = components_[j].log_weight;
          continue;
        }
        w.noalias() = components_[j].chol_inv.triangularView<Eigen::Lower>() * y;
        terms[j] = components_[j].log_weight - w.squaredNorm();
        top = std::max(top, terms[j]);
      }
      double s_exp = 0.0;
      for (double t : terms) s_exp += std::exp(t - top);
      const double neg_log2_f = -(top + std::log(s_exp)) / std::numbers::ln2;
      acc.sum += neg_log2_f;
      acc.sum_sq += neg_log2_f * neg_log2_f;
    }
    return acc;
  }

 private:
  Eigen::Index dim_;
  std::vector<Component> components_;
  std::vector<double> weights_;
};

}  // namespace

MiEstimate mutual_information_mc(const MixtureDesign& design, const DSet& dset, std::int64_t samples,
                                 std::uint64_t seed, unsigned threads) {
  if (samples < 1) throw InvalidInput("mutual_information_mc: need at least one sample");
  if (dset.size() == 0 || design.alpha.size() != dset.size())
    throw InvalidInput("mutual_information_mc: design and covariance set disagree");

  const MixtureSampler sampler(design, dset);
  const std::int64_t n_chunks = (samples + kMiChunk - 1) / kMiChunk;
  std::vector<ChunkSum> chunks(static_cast<std::size_t>(n_chunks));

  auto chunk_size = [&](std::int64_t c) { return std::min(kMiChunk, samples - c * kMiChunk); };
  parallel_for(n_chunks, threads, [&](std::int64_t c) {
    chunks[static_cast<std::size_t>(c)] =
        sampler.run_chunk(chunk_size(c), derive_seed(seed, static_cast<std::uint64_t>(c)));
  });

  double sum = 0.0, sum_sq = 0.0;
  for (const auto& c : chunks) {
    sum += c.sum;
    sum_sq += c.sum_sq;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = samples > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;

  MiEstimate out;
  out.samples = samples;
  out.seed = seed;
  out.value = mean - static_cast<double>(dset.dim()) * std::log2(std::numbers::pi * std::numbers::e);
  out.std_error = std::sqrt(var / n);
  return out;
}

double asymptotic_rate(const MixtureDesign& design, const DSet& dset) {
  if (design.alpha.size() != dset.size() || dset.size() == 0)
    throw InvalidInput("asymptotic_rate: design and covariance set disagree");
  const std::size_t n = dset.size();
  // logdet(D_i + D_j) is symmetric in (i, j).
  std::vector<double> pair(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) pair[i * n + j] = pair[j * n + i] = logdet_hpd(dset.d[i] + dset.d[j]);

  double rate = 0.0;
  std::vector<double> inner;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(design.alpha[i] > 0.0)) continue;
    inner.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (design.alpha[j] > 0.0) inner.push_back(std::log2(design.alpha[j]) - pair[i * n + j]);
    rate -= design.alpha[i] * log2_sum_exp2(inner);
  }
  return rate - static_cast<double>(dset.dim());
}

}  // namespace rfcap
