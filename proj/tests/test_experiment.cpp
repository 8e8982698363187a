// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "json.hpp"
#include "rfcap/experiment.hpp"

#include <fstream>

using namespace rfcap;

TEST_CASE("complex tokens") {
  using c = std::complex<double>;
  CHECK(parse_complex_token("-1.0391+0.8601i") == c(-1.0391, 0.8601));
  CHECK(parse_complex_token("0.1650-0.1395j") == c(0.1650, -0.1395));
  CHECK(parse_complex_token("2.5") == c(2.5, 0.0));
  CHECK(parse_complex_token("-3i") == c(0.0, -3.0));
  CHECK(parse_complex_token("i") == c(0.0, 1.0));
  CHECK(parse_complex_token("1-i") == c(1.0, -1.0));
  CHECK(parse_complex_token("1e-3+2E+1i") == c(1e-3, 20.0));
  CHECK(parse_complex_token("+4-5e-2i") == c(4.0, -0.05));
  for (const char* bad : {"", "abc", "1+2", "1++2i", "1+2ii", "nan", "1.0.0"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_complex_token(bad), InvalidInput);
  }
}

TEST_CASE("channel text parsing") {
  const auto h = parse_channel_text("2 2\n-0.0062+0.8531i -0.3000-0.4998i\n\n0.1650+0.1395i -1.0391+0.8601i\n");
  REQUIRE(h.rows() == 2);
  REQUIRE(h.cols() == 2);
  CHECK(h == *builtin_channel("h2a"));

  SUBCASE("row count mismatch") {
    try {
      parse_channel_text("2 2\n1 2\n3 4\n5 6\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("header declares 2 rows, found 3") != std::string::npos);
      CHECK(e.line() == 4);
    }
  }
  SUBCASE("bad token position") {
    try {
      parse_channel_text("1 3\n1 2x 3\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() == 2);
    }
  }
  CHECK_THROWS_AS(parse_channel_text(""), ParseError);
  CHECK_THROWS_AS(parse_channel_text("2\n1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_channel_text("0 2\n"), ParseError);
  CHECK_THROWS_AS(parse_channel_text("1 2\n1 2 3\n"), ParseError);
  CHECK_THROWS_AS(parse_channel_file("/nonexistent/channel.txt"), ParseError);
}

TEST_CASE("builtin channels round-trip through the text format") {
  for (const auto& name : builtin_channel_names()) {
    const auto h = *builtin_channel(name);
    CHECK(parse_channel_text(format_channel(h)) == h);
  }
  CHECK(builtin_channel("h53")->rows() == 3);
  CHECK(builtin_channel("h53")->cols() == 5);
  CHECK_FALSE(builtin_channel("nope").has_value());
  CHECK(format_channel(*builtin_channel("h2b")).starts_with("2 2\n0.1901+0.1127i -1.5972-0.3066i\n"));
}

TEST_CASE("snr grids") {
  CHECK(parse_snr_grid("12") == std::vector<double>{12.0});
  CHECK(parse_snr_grid("0:3:9") == std::vector<double>{0, 3, 6, 9});
  CHECK(parse_snr_grid("0:3:10") == std::vector<double>{0, 3, 6, 9});
  CHECK(parse_snr_grid("0:0.1:0.3").size() == 4);
  CHECK(parse_snr_grid("-5:5:5") == std::vector<double>{-5, 0, 5});
  for (const char* bad : {"", "a", "0:0:3", "3:1:0", "0:1", "0:1:2:3", "0:-1:3"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_snr_grid(bad), InvalidInput);
  }
}

TEST_CASE("spec validation") {
  ExperimentSpec s;
  s.snr_db_grid = {};
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  s.snr_db_grid = {10, 5};
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  s.snr_db_grid = {5, 10};
  s.samples = 999;
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  s.samples = 1000;
  CHECK_NOTHROW(s.validate());
  s.command = Command::Capacity;
  CHECK_THROWS_AS(s.validate(), InvalidInput);
}

TEST_CASE("channel sources") {
  ExperimentSpec s;
  s.channel_source = "rayleigh:3x5";
  s.seed = 4;
  const auto a = load_channel(s);
  CHECK(a.rows() == 3);
  CHECK(a.cols() == 5);
  CHECK(load_channel(s) == a);
  s.seed = 5;
  CHECK_FALSE(load_channel(s) == a);
  for (const char* bad : {"rayleigh:3", "rayleigh:0x2", "rayleigh:3x", "rayleigh:axb"}) {
    s.channel_source = bad;
    CHECK_THROWS_AS(load_channel(s), InvalidInput);
  }

  const auto path = std::filesystem::temp_directory_path() / "rfcap_test_channel.txt";
  {
    std::ofstream out(path);
    out << format_channel(*builtin_channel("h2b"));
  }
  s.channel_source = path.string();
  CHECK(load_channel(s) == *builtin_channel("h2b"));
  std::filesystem::remove(path);
}

TEST_CASE("capacity report at 40 dB") {
  ExperimentSpec s;
  s.command = Command::Capacity;
  s.channel_source = "h2a";
  s.snr_db_grid = {40.0};
  s.samples = 20000;
  s.connectors = {ConnectorType::Switch, ConnectorType::Beamformer};
  const auto report = run(s);
  REQUIRE(report.breakdown.size() == 2);
  const auto& b = report.breakdown.front();
  CHECK(b.connector == ConnectorType::Switch);
  CHECK(b.patterns == std::vector<std::vector<int>>{{0}, {1}});
  CHECK(b.alpha[0] == doctest::Approx(0.26400893).epsilon(1e-6));
  CHECK(b.alpha[1] == doctest::Approx(0.73599107).epsilon(1e-6));
  CHECK(b.c_bar == doctest::Approx(b.high_snr_capacity).epsilon(1e-12));
  CHECK(std::abs(b.mi.value - b.c_bar) < 0.05);
  CHECK(std::abs(b.asymptotic_rate - b.c_bar) < 0.05);
  CHECK(report.rows.size() == 2 * std::size(kAllSchemes));
  // NonUniformModulation row and breakdown share a random stream.
  CHECK(report.rows[static_cast<std::size_t>(SchemeId::NonUniformModulation)].rate == b.mi.value);

  const auto j = nlohmann::json::parse(to_json(report));
  CHECK(j["spec"]["command"] == "capacity");
  CHECK(j["spec"]["config"]["n_t"] == 2);
  CHECK(j["rows"].size() == 10);
  CHECK(j["rows"][0]["label"] == "BAS");
  CHECK(j["rows"][0]["std_error"].is_null());
  CHECK(j["rows"][3]["method"] == "MonteCarlo");
  CHECK(j["metadata"]["tool_version"] == std::string(kToolVersion));
  CHECK(j["metadata"]["wall_time_s"].get<double>() >= 0.0);
  CHECK(j["breakdown"][1]["connector"] == "beamformer");
  CHECK(j["breakdown"][0]["alpha"][1].get<double>() == doctest::Approx(0.736).epsilon(1e-3));
}

TEST_CASE("csv output layout") {
  ExperimentSpec s;
  s.channel_source = "h2b";
  s.snr_db_grid = {0.0, 10.0};
  s.samples = 2000;
  s.connectors = {ConnectorType::Switch, ConnectorType::Beamformer};
  const auto csv = to_csv(run(s));
  std::vector<std::string> lines;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  REQUIRE(lines.size() == 1 + 2 * std::size(kAllSchemes) * 2);
  CHECK(lines[0] == "scheme,snr_db,rate,std_error");
  CHECK(lines[1].starts_with("BAS,0,"));
  CHECK(lines[1].ends_with(","));
  CHECK(lines[2].starts_with("BAS,10,"));
  CHECK(lines[3].starts_with("USM,0,"));
  CHECK(lines[11].starts_with("BBS,0,"));
  CHECK(lines[20].starts_with("UB-beamformer,10,"));
}

TEST_CASE("ergodic runs are reproducible") {
  ExperimentSpec s;
  s.command = Command::Ergodic;
  s.n_r = 2;
  s.n_t = 2;
  s.channels = 4;
  s.snr_db_grid = {0.0, 20.0};
  s.samples = 2000;
  s.seed = 99;
  s.threads = 1;
  const auto a = to_csv(run(s));
  s.threads = 2;
  const auto b = to_csv(run(s));
  CHECK(a == b);
  s.seed = 100;
  CHECK(to_csv(run(s)) != a);
}

TEST_CASE("assumption violations surface from run") {
  ExperimentSpec s;
  s.channel_source = "h2a";
  s.n_rf = 2;
  CHECK_THROWS_AS(run(s), ConfigError);

  // Rank-one channel: beamformer connector has no spare receive DOF.
  const auto path = std::filesystem::temp_directory_path() / "rfcap_rank_one.txt";
  {
    std::ofstream out(path);
    out << "2 3\n1 2 3\n2 4 6\n";
  }
  s.n_rf = 1;
  s.channel_source = path.string();
  s.connectors = {ConnectorType::Beamformer};
  CHECK_THROWS_AS(run(s), AssumptionViolation);
  std::filesystem::remove(path);
}
