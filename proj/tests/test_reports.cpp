// Run configuration, JSON echo/round-trip, atomic file output, and the CSV /
// JSON table formats produced by the command-line driver.
#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "equikernel/reports.hpp"

using namespace equikernel;
using Catch::Approx;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("run configuration: echo, round-trip, partial parsing, validation") {
  SECTION("every field is echoed, defaults included") {
    const json j = config_to_json(RunConfig{});
    for (const char* key :
         {"example", "nu", "k_grid", "seed", "grid_torus", "grid_flag", "tol_t",
          "tol_orthogonality", "ac5_ratio_band", "n_locus_samples", "n_mc", "output_dir"})
      REQUIRE(j.contains(key));
    REQUIRE(j.size() == 12);
    REQUIRE(j["example"] == "P3");
    REQUIRE(j["seed"] == 12345);
  }

  SECTION("JSON round-trip preserves the configuration exactly") {
    RunConfig cfg;
    cfg.ex = Example::P4;
    cfg.nu = {3, 2};
    cfg.k_grid = {2, 4, 8};
    cfg.seed = 777;
    cfg.output_dir = "elsewhere";
    const RunConfig back = config_from_json(config_to_json(cfg));
    REQUIRE(config_to_json(back) == config_to_json(cfg));
  }

  SECTION("partial JSON keeps defaults for missing keys") {
    const RunConfig cfg = config_from_json(json::parse(R"({"nu": [3, 1], "seed": 9})"));
    REQUIRE(cfg.nu.nu1 == 3);
    REQUIRE(cfg.seed == 9);
    REQUIRE(cfg.grid_torus == 64);
    REQUIRE(cfg.k_grid == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8});
    REQUIRE(config_from_json(json::object()).n_mc == 100000);
  }

  SECTION("validation gates") {
    RunConfig cfg;
    cfg.k_grid = {2, 2};
    REQUIRE_THROWS_AS(validate_config(cfg), std::invalid_argument);
    cfg = {};
    cfg.grid_torus = 15;
    REQUIRE_THROWS_AS(validate_config(cfg), std::invalid_argument);
    cfg = {};
    cfg.grid_flag = 24;  // not a power of two
    REQUIRE_THROWS_AS(validate_config(cfg), std::invalid_argument);
    cfg = {};
    cfg.nu = {1, 1};
    REQUIRE_THROWS_AS(validate_config(cfg), std::invalid_argument);
    REQUIRE_THROWS_AS(example_from_name("P5"), std::invalid_argument);
    REQUIRE(example_from_name("p4") == Example::P4);
  }
}

TEST_CASE("atomic text output") {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "equikernel_test_io" / "nested";
  const std::filesystem::path file = dir / "table.csv";
  std::filesystem::remove_all(dir.parent_path());

  SECTION("creates directories, leaves no temporary, supports overwrite") {
    atomic_write_text(file, "first\n");
    REQUIRE(slurp(file) == "first\n");
    REQUIRE(!std::filesystem::exists(file.string() + ".tmp"));
    atomic_write_text(file, "second\n");
    REQUIRE(slurp(file) == "second\n");
  }

  std::filesystem::remove_all(dir.parent_path());
}

TEST_CASE("number formatting") {
  REQUIRE(fmt_double(0.5) == "0.5");
  REQUIRE(fmt_double(-1.0 / 3.0) == "-0.333333333333");
  REQUIRE(fmt_double(2.0) == "2");
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < 50; ++i) {
    const double v = gauss(rng) * std::pow(10.0, i % 17 - 8);
    REQUIRE(std::strtod(fmt_double_exact(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("CSV tables") {
  SECTION("schema line comes first; rows follow the header") {
    const std::string csv = make_csv("demo-v1", {"a", "b"}, {{"1", "2"}, {"3", "4"}});
    REQUIRE(csv.rfind("# schema: demo-v1\n", 0) == 0);
    REQUIRE(line_count(csv) == 4);
  }

  SECTION("locus table: deterministic bytes, nan for degenerate spectra") {
    const Weight nu{2, 1};
    std::vector<SpherePoint> pts{diagonal_profile_point(Example::P3, 2.0 / 3.0),
                                 diagonal_profile_point(Example::P3, 0.5),
                                 inner_profile_point(Example::P3, nu, 0.25)};
    const std::string a = locus_csv(pts, nu, tol::locus_t);
    const std::string b = locus_csv(pts, nu, tol::locus_t);
    REQUIRE(a == b);
    REQUIRE(line_count(a) == 2 + pts.size());
    REQUIRE(a.find("Boundary_MGO") != std::string::npos);
    REQUIRE(a.find("Inner_B") != std::string::npos);
    REQUIRE(a.find("nan") != std::string::npos);  // the balanced profile row
    REQUIRE(a.find("point_id,z1_re,z1_im") == a.find('\n') + 1);
  }

  SECTION("kernel table line count") {
    const std::string csv =
        kernel_csv({{0, 0}, {0, 1}}, {cplx(1.0, 0.0), cplx(0.25, -0.5)});
    REQUIRE(line_count(csv) == 4);
    REQUIRE(csv.find("-0.5") != std::string::npos);
  }
}

TEST_CASE("exact basis export") {
  const json j = basis_to_json(isotype_basis(Example::P3, 1, {2, 1}));
  REQUIRE(j["example"] == "P3");
  REQUIRE(j["k"] == 1);
  REQUIRE(j["sections"].size() == 1);
  const json& s = j["sections"][0];
  REQUIRE(s["level"] == 2);
  REQUIRE(s["norm_sq_num"] == "1");
  REQUIRE(s["norm_sq_den"] == "60");
  REQUIRE(s["terms"].size() == 2);
  std::set<std::string> coeffs;
  for (const auto& t : s["terms"]) coeffs.insert(t["coeff"].get<std::string>());
  REQUIRE(coeffs == std::set<std::string>{"-1", "1"});
}

TEST_CASE("asymptotic report serialization") {
  AsymptoticReport r;
  r.ex = Example::P3;
  r.nu = {2, 1};
  r.seed = 31;
  r.k_grid = {4, 8, 12, 16};
  r.boundary_ratios = {{16.9, 17.1}, {16.7, 16.8}, {16.5, 16.6}, {16.4, 16.5}};
  r.median_abs_dev = {16.0, 15.75, 15.55, 15.45};
  r.outer_normalized = {1.8, 1.4, 1.2, 1.1};
  r.outer_slope = -0.36;

  SECTION("JSON round-trip is exact, including through a textual dump") {
    REQUIRE(report_from_json(report_to_json(r)) == r);
    REQUIRE(report_from_json(json::parse(report_to_json(r).dump())) == r);
  }

  SECTION("flattened CSV row count") {
    // Per k: the point ratios plus two summary rows; plus slope, schema, header.
    const std::string csv = report_csv(r);
    REQUIRE(line_count(csv) == 2 + 4 * (2 + 2) + 1);
    REQUIRE(csv.rfind("# schema: equikernel-compare-v1\n", 0) == 0);
  }
}
