// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "oracles.hpp"
#include "rfcap/experiment.hpp"
#include "rfcap/schemes.hpp"

#include <random>

using namespace rfcap;

namespace {

const SystemConfig kSwitch221{2, 2, 1, ConnectorType::Switch};
const SystemConfig kBeam221{2, 2, 1, ConnectorType::Beamformer};
constexpr std::int64_t kSamples = 40000;

ComplexMatrix diagonal_channel(double g0, double g1) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = std::sqrt(g0);
  h(1, 1) = std::sqrt(g1);
  return h;
}

}  // namespace

TEST_CASE("scheme labels") {
  CHECK(scheme_label(SchemeId::BestSelection, ConnectorType::Switch) == "BAS");
  CHECK(scheme_label(SchemeId::BestSelection, ConnectorType::Beamformer) == "BBS");
  CHECK(scheme_label(SchemeId::NonUniformModulation, ConnectorType::Switch) == "NUSM");
  CHECK(scheme_label(SchemeId::NonUniformModulation, ConnectorType::Beamformer) == "NUBM");
  CHECK(scheme_label(SchemeId::UniformModulationNoPa, ConnectorType::Beamformer) == "UBM");
}

TEST_CASE("best selection, single RF chain") {
  const auto set = build_effective_set(diagonal_channel(1.0, 4.0), kSwitch221, Snr{10.0});
  const auto r = rate_best_selection(set);
  CHECK(r.rate == doctest::Approx(std::log2(41.0)));
  CHECK(r.method == RateMethod::ClosedForm);
  CHECK_FALSE(r.std_error.has_value());

  const ComplexMatrix h = *builtin_channel("h2a");
  const double snr = std::pow(10.0, 1.2);
  const auto bas = rate_best_selection(build_effective_set(h, kSwitch221, Snr{snr}));
  CHECK(bas.rate == doctest::Approx(std::log2(1.0 + snr * oracle::column_power(h, 1))).epsilon(1e-12));
  CHECK(bas.rate == doctest::Approx(5.138430).epsilon(1e-6));
}

TEST_CASE("best selection, two RF chains, against exhaustive search") {
  const ComplexMatrix h = *builtin_channel("h53");
  for (double snr_db : {0.0, 12.0, 27.0}) {
    const double snr = Snr::from_db(snr_db).linear;
    double best = 0.0;
    for (const auto& cols : oracle::brute_force_subsets(5, 2)) {
      ComplexMatrix sub(3, 2);
      sub << h.col(cols[0]), h.col(cols[1]);
      const auto gains = oracle::gram_eigenvalues(sub);
      best = std::max(best, oracle::rate_objective(gains, oracle::bisection_waterfill(gains, snr, 1.0), snr));
    }
    const auto r = rate_best_selection(build_effective_set(h, SystemConfig{5, 3, 2, ConnectorType::Switch}, Snr{snr}));
    CHECK(r.rate == doctest::Approx(best).epsilon(1e-10));
  }
}

TEST_CASE("uniform designs respect the average power") {
  const auto set = build_effective_set(*builtin_channel("h53"), SystemConfig{5, 3, 2, ConnectorType::Switch},
                                       Snr::from_db(3.0));
  for (bool pa : {false, true}) {
    const auto d = uniform_design(set, pa);
    d.validate();
    CHECK(std::abs(d.average_power() - 1.0) < 1e-9);
  }
  // With PA at low SNR weak patterns get less power than strong ones.
  const auto pa = uniform_design(set, true);
  std::vector<double> traces;
  for (const auto& q : pa.covariances) traces.push_back(std::real(q.trace()));
  CHECK(*std::max_element(traces.begin(), traces.end()) > *std::min_element(traces.begin(), traces.end()) + 0.01);
}

TEST_CASE("uniform PA matches the two-pattern common water level") {
  const ComplexMatrix h = *builtin_channel("h2b");
  const double snr = 2.0;
  const auto set = build_effective_set(h, kSwitch221, Snr{snr});
  const std::vector<double> g{oracle::column_power(h, 0), oracle::column_power(h, 1)};
  const auto beta = oracle::bisection_waterfill(g, snr, 2.0);
  const auto d = uniform_design(set, true);
  CHECK(std::real(d.covariances[0](0, 0)) == doctest::Approx(beta[0]).epsilon(1e-9));
  CHECK(std::real(d.covariances[1](0, 0)) == doctest::Approx(beta[1]).epsilon(1e-9));
}

TEST_CASE("uniform modulation at high snr") {
  const double snr = 1e6;
  const double g = 1.7;
  const auto eq = build_effective_set(diagonal_channel(g, g), kSwitch221, Snr{snr});
  const auto r = rate_uniform(eq, false, kSamples, 3);
  CHECK(r.method == RateMethod::MonteCarlo);
  REQUIRE(r.std_error.has_value());
  CHECK(std::abs(r.rate - std::log2(2.0 * snr * g)) < 0.05);

  const ComplexMatrix h = *builtin_channel("h2a");
  const std::vector<double> gains{oracle::column_power(h, 0), oracle::column_power(h, 1)};
  const auto set = build_effective_set(h, kSwitch221, Snr{snr});
  const auto no_pa = rate_uniform(set, false, kSamples, 5);
  const auto pa = rate_uniform(set, true, kSamples, 5);
  CHECK(std::abs(no_pa.rate - std::log2(2.0 * snr * std::sqrt(gains[0] * gains[1]))) < 0.05);
  CHECK(std::abs(no_pa.rate - closed_form::uniform(gains, snr)) < 0.05);
  CHECK(std::abs(pa.rate - no_pa.rate) < 0.01);
}

TEST_CASE("non-uniform modulation at high snr") {
  const double snr = 1e6;
  const auto eq = build_effective_set(diagonal_channel(1.0, 1.0), kSwitch221, Snr{snr});
  CHECK(std::abs(rate_nonuniform(eq, kSamples, 2).rate - std::log2(2.0 * snr)) < 0.05);

  const ComplexMatrix h = *builtin_channel("h2a");
  const std::vector<double> gains{oracle::column_power(h, 0), oracle::column_power(h, 1)};
  CHECK(gains[0] + gains[1] == doctest::Approx(2.9338).epsilon(1e-4));
  const auto r = rate_nonuniform(build_effective_set(h, kSwitch221, Snr{snr}), kSamples, 2);
  CHECK(std::abs(r.rate - std::log2(2.9338 * snr)) < 0.05);
  CHECK(std::abs(r.rate - closed_form::nonuniform(gains, snr)) < 0.05);
}

TEST_CASE("non-uniform modulation dominates at 40 dB") {
  for (const auto* name : {"h2a", "h2b"})
    for (const auto& config : {kSwitch221, kBeam221}) {
      const auto set = build_effective_set(*builtin_channel(name), config, Snr{1e4});
      const auto nu = rate_nonuniform(set, kSamples, 8);
      CHECK(nu.rate >= rate_best_selection(set).rate);
      CHECK(nu.rate >= rate_uniform(set, false, kSamples, 8).rate);
      CHECK(nu.rate >= rate_uniform(set, true, kSamples, 8).rate);
    }
}

TEST_CASE("closed forms obey the AM-GM ordering") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  for (int t = 0; t < 200; ++t) {
    const std::vector<double> g{u(rng), u(rng)};
    const double snr = std::pow(10.0, u(rng));
    const double nu = closed_form::nonuniform(g, snr);
    CHECK(nu >= closed_form::uniform(g, snr) - 1e-12);
    CHECK(nu >= std::log2(snr * std::max(g[0], g[1])) - 1e-12);
    CHECK(closed_form::uniform(g, snr) == doctest::Approx(std::log2(2.0 * snr * std::sqrt(g[0] * g[1]))));
  }
}

TEST_CASE("non-uniform modulation beats selection at high snr on random channels") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const SystemConfig config = seed % 2 ? SystemConfig{5, 3, 2, seed % 4 == 1 ? ConnectorType::Switch : ConnectorType::Beamformer}
                                         : (seed % 4 == 0 ? kSwitch221 : kBeam221);
    const auto h = rayleigh_channel(config.n_r, config.n_t, 900 + seed);
    for (double snr_db : {20.0, 30.0}) {
      const auto set = build_effective_set(h, config, Snr::from_db(snr_db));
      const auto nu = rate_nonuniform(set, 20000, seed);
      const auto ub = optimize_mixture(set).c_bar;
      CAPTURE(seed);
      CAPTURE(snr_db);
      CHECK(nu.rate + 3.0 * *nu.std_error >= rate_best_selection(set).rate);
      CHECK(nu.rate <= ub + 3.0 * *nu.std_error);
      for (bool pa : {false, true}) {
        const auto u = rate_uniform(set, pa, 20000, seed);
        CHECK(u.rate <= ub + 3.0 * *u.std_error);
      }
    }
  }
}

TEST_CASE("compare_all layout and monotonicity on h2a") {
  const std::vector<double> grid{0, 3, 6, 9, 12, 15, 18, 21, 24, 27, 30};
  for (const auto& config : {kSwitch221, kBeam221}) {
    const auto rows = compare_all(*builtin_channel("h2a"), config, grid, 20000, 11);
    REQUIRE(rows.size() == std::size(kAllSchemes) * grid.size());
    for (std::size_t s = 0; s < std::size(kAllSchemes); ++s)
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto& r = rows[s * grid.size() + k];
        CHECK(r.scheme == kAllSchemes[s]);
        CHECK(r.snr_db == doctest::Approx(grid[k]));
        CHECK(r.connector == config.connector);
        CHECK(r.std_error.has_value() == (r.method == RateMethod::MonteCarlo));
        if (k > 0) CHECK(r.rate >= rows[s * grid.size() + k - 1].rate);
      }
  }
}

TEST_CASE("compare_all is deterministic per seed") {
  const std::vector<double> grid{10.0};
  const auto a = compare_all(*builtin_channel("h2b"), kSwitch221, grid, 5000, 4);
  const auto b = compare_all(*builtin_channel("h2b"), kSwitch221, grid, 5000, 4);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].rate == b[i].rate);
}

TEST_CASE("h2a at 12 dB") {
  const std::vector<double> grid{12.0};
  const auto rows = compare_all(*builtin_channel("h2a"), kSwitch221, grid, 100000, 1);
  const double bas = rows[static_cast<std::size_t>(SchemeId::BestSelection)].rate;
  const double nusm = rows[static_cast<std::size_t>(SchemeId::NonUniformModulation)].rate;
  CHECK(bas == doctest::Approx(5.0).epsilon(0.2 / 5.0));
  CHECK(nusm == doctest::Approx(5.5).epsilon(0.25 / 5.5));
  CHECK(nusm > bas);
}

TEST_CASE("uniform is worse than selection on h2b but not on h2a") {
  const std::vector<double> grid{27.0};
  const auto rate_of = [](const std::vector<SchemeRate>& rows, SchemeId id) {
    return rows[static_cast<std::size_t>(id)].rate;
  };
  const auto b = compare_all(*builtin_channel("h2b"), kSwitch221, grid, 50000, 1);
  CHECK(rate_of(b, SchemeId::UniformModulationNoPa) < rate_of(b, SchemeId::BestSelection));
  CHECK(rate_of(b, SchemeId::NonUniformModulation) > rate_of(b, SchemeId::BestSelection));
  const auto a = compare_all(*builtin_channel("h2a"), kSwitch221, grid, 50000, 1);
  CHECK(rate_of(a, SchemeId::UniformModulationNoPa) > rate_of(a, SchemeId::BestSelection));
}

TEST_CASE("ergodic with one channel equals compare_all on that draw") {
  const std::vector<double> grid{5.0, 20.0};
  const std::uint64_t seed = 21;
  const auto result = ergodic_compare(kSwitch221, 1, grid, 5000, seed);
  const std::uint64_t channel_seed = derive_seed(seed, 0);
  const auto h = rayleigh_channel(2, 2, derive_seed(channel_seed, 0));
  const auto direct = compare_all(h, kSwitch221, grid, 5000, derive_seed(channel_seed, 0xC0FFEE), 1);
  REQUIRE(result.rows.size() == direct.size());
  CHECK(result.redraws == 0);
  for (std::size_t i = 0; i < direct.size(); ++i) {
    CHECK(result.rows[i].rate == doctest::Approx(direct[i].rate).epsilon(1e-15));
    CHECK(result.rows[i].scheme == direct[i].scheme);
  }
}

TEST_CASE("ergodic results do not depend on the worker count") {
  const std::vector<double> grid{10.0};
  const auto a = ergodic_compare(kBeam221, 6, grid, 2000, 5, 1);
  const auto b = ergodic_compare(kBeam221, 6, grid, 2000, 5, 3);
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].rate == b.rows[i].rate);
  CHECK_THROWS_AS(ergodic_compare(kBeam221, 0, grid, 2000, 5), InvalidInput);
}

TEST_CASE("beamformer beats switch on average for (5,3,2) at 12 dB") {
  const std::vector<double> grid{12.0};
  const auto sw = ergodic_compare({5, 3, 2, ConnectorType::Switch}, 40, grid, 10000, 12);
  const auto bf = ergodic_compare({5, 3, 2, ConnectorType::Beamformer}, 40, grid, 10000, 12);
  for (auto id : {SchemeId::BestSelection, SchemeId::UniformModulationNoPa, SchemeId::NonUniformModulation}) {
    CAPTURE(to_string(id));
    const auto k = static_cast<std::size_t>(id);
    CHECK(bf.rows[k].rate > sw.rows[k].rate);
  }
  const auto rate = [](const ErgodicResult& r, SchemeId id) { return r.rows[static_cast<std::size_t>(id)].rate; };
  CHECK(rate(bf, SchemeId::NonUniformModulation) > rate(bf, SchemeId::BestSelection));
}
