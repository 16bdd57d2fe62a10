// Run configuration with echoed defaults, atomic CSV/JSON writers with
// schema headers, and serialization of bases and asymptotic reports.
// All text output uses '.' decimals, UTF-8, and '\n' newlines.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "equikernel/kernel_asymptotics.hpp"

namespace equikernel {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct RunConfig {
  Example ex = Example::P3;
  Weight nu{2, 1};
  std::vector<int> k_grid{1, 2, 3, 4, 5, 6, 7, 8};
  std::uint64_t seed = 12345;
  int grid_torus = 64;
  int grid_flag = 64;
  double tol_t = tol::locus_t;
  double tol_orthogonality = tol::orthogonality;
  double ac5_ratio_band = 0.25;  // acceptance band half-width for diagonal ratios
  int n_locus_samples = 2000;
  int n_mc = 100000;
  std::string output_dir = "out";
};

inline bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

inline void validate_config(const RunConfig& cfg) {
  for (std::size_t i = 1; i < cfg.k_grid.size(); ++i)
    if (cfg.k_grid[i] <= cfg.k_grid[i - 1])
      throw std::invalid_argument("config: k_grid must be strictly increasing");
  if (!cfg.k_grid.empty() && cfg.k_grid.front() < 1)
    throw std::invalid_argument("config: k values must be >= 1");
  for (int g : {cfg.grid_torus, cfg.grid_flag})
    if (!is_power_of_two(g) || g < 16)
      throw std::invalid_argument("config: quadrature grids must be powers of two >= 16");
  if (!(cfg.nu.nu1 > cfg.nu.nu2 && cfg.nu.nu2 >= 1))
    throw std::invalid_argument("config: nu must satisfy nu1 > nu2 >= 1");
}

inline Example example_from_name(const std::string& s) {
  if (s == "P3" || s == "p3") return Example::P3;
  if (s == "P4" || s == "p4") return Example::P4;
  throw std::invalid_argument("unknown example '" + s + "' (expected P3 or P4)");
}

// Every field is echoed, defaults included, so each report is a full
// reproducibility ledger.
inline json config_to_json(const RunConfig& cfg) {
  return json{{"example", example_name(cfg.ex)},
              {"nu", {cfg.nu.nu1, cfg.nu.nu2}},
              {"k_grid", cfg.k_grid},
              {"seed", cfg.seed},
              {"grid_torus", cfg.grid_torus},
              {"grid_flag", cfg.grid_flag},
              {"tol_t", cfg.tol_t},
              {"tol_orthogonality", cfg.tol_orthogonality},
              {"ac5_ratio_band", cfg.ac5_ratio_band},
              {"n_locus_samples", cfg.n_locus_samples},
              {"n_mc", cfg.n_mc},
              {"output_dir", cfg.output_dir}};
}

inline RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  if (j.contains("example")) cfg.ex = example_from_name(j.at("example").get<std::string>());
  if (j.contains("nu")) {
    const auto v = j.at("nu");
    if (!v.is_array() || v.size() != 2) throw std::invalid_argument("config: nu must be [nu1, nu2]");
    cfg.nu = {v[0].get<int>(), v[1].get<int>()};
  }
  if (j.contains("k_grid")) cfg.k_grid = j.at("k_grid").get<std::vector<int>>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("grid_torus")) cfg.grid_torus = j.at("grid_torus").get<int>();
  if (j.contains("grid_flag")) cfg.grid_flag = j.at("grid_flag").get<int>();
  if (j.contains("tol_t")) cfg.tol_t = j.at("tol_t").get<double>();
  if (j.contains("tol_orthogonality"))
    cfg.tol_orthogonality = j.at("tol_orthogonality").get<double>();
  if (j.contains("ac5_ratio_band")) cfg.ac5_ratio_band = j.at("ac5_ratio_band").get<double>();
  if (j.contains("n_locus_samples")) cfg.n_locus_samples = j.at("n_locus_samples").get<int>();
  if (j.contains("n_mc")) cfg.n_mc = j.at("n_mc").get<int>();
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  validate_config(cfg);
  return cfg;
}

// ---------------------------------------------------------------------------
// Atomic file output
// ---------------------------------------------------------------------------

// Writes via a temporary file in the target directory followed by a rename,
// so readers never observe a partial file.
inline void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path dir = path.has_parent_path() ? path.parent_path() : ".";
  std::filesystem::create_directories(dir);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    if (!f.good()) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string fmt_double_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// CSV with a schema identifier as the first comment line.
inline std::string make_csv(const std::string& schema, const std::vector<std::string>& header,
                            const std::vector<std::vector<std::string>>& rows) {
  std::string out = "# schema: " + schema + "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    out += header[i] + (i + 1 < header.size() ? "," : "\n");
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out += row[i] + (i + 1 < row.size() ? "," : "\n");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Domain-specific tables
// ---------------------------------------------------------------------------

inline std::string locus_csv(const std::vector<SpherePoint>& points, Weight nu, double tol_t) {
  std::vector<std::string> header{"point_id"};
  const int nv = points.empty() ? 4 : num_vars(points.front().ex);
  const std::array<const char*, 5> names{"z1", "z2", "w1", "w2", "t"};
  for (int i = 0; i < nv; ++i) {
    header.push_back(std::string(names[static_cast<std::size_t>(i)]) + "_re");
    header.push_back(std::string(names[static_cast<std::size_t>(i)]) + "_im");
  }
  for (const char* col : {"lambda1", "lambda2", "t_value", "class", "torus_locus", "core"})
    header.push_back(col);
  std::vector<std::vector<std::string>> rows;
  rows.reserve(points.size());
  for (std::size_t id = 0; id < points.size(); ++id) {
    const SpherePoint& x = points[id];
    std::vector<std::string> row{std::to_string(id)};
    for (int i = 0; i < nv; ++i) {
      row.push_back(fmt_double(x.c[i].real()));
      row.push_back(fmt_double(x.c[i].imag()));
    }
    const MomentValue mv = moment_map(x);
    const LocusClass cls = classify(x, nu, tol_t);
    row.push_back(fmt_double(mv.lambda1));
    row.push_back(fmt_double(mv.lambda2));
    row.push_back(cls.t_value ? fmt_double(*cls.t_value) : "nan");
    row.push_back(tag_name(cls.tag));
    row.push_back(cls.torus_locus ? "1" : "0");
    row.push_back(cls.core ? "1" : "0");
    rows.push_back(std::move(row));
  }
  return make_csv("equikernel-locus-v1", header, rows);
}

inline std::string kernel_csv(const std::vector<std::pair<int, int>>& pairs,
                              const std::vector<cplx>& values) {
  assert(pairs.size() == values.size());
  std::vector<std::vector<std::string>> rows;
  rows.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    rows.push_back({std::to_string(pairs[i].first), std::to_string(pairs[i].second),
                    fmt_double_exact(values[i].real()), fmt_double_exact(values[i].imag())});
  return make_csv("equikernel-kernel-v1", {"x_id", "y_id", "re", "im"}, rows);
}

// Exact basis export: exponent vectors with integer coefficients and exact
// rational norms (numerator/denominator strings; the pi^d factor is implied).
inline json basis_to_json(const IsotypeBasis& basis) {
  json sections = json::array();
  for (const Section& s : basis.sections) {
    json terms = json::array();
    for (const auto& [key, c] : s.poly) {
      const auto e = unpack_exponents(key);
      terms.push_back(json{{"exp", {e[0], e[1], e[2], e[3], e[4]}}, {"coeff", c.get_str()}});
    }
    sections.push_back(json{{"level", s.level},
                            {"z_degree", s.z_degree},
                            {"w_degree", s.w_degree},
                            {"t_degree", s.t_degree},
                            {"torus_weight", {s.torus_weight[0], s.torus_weight[1]}},
                            {"norm_sq_num", s.norm_sq.get_num().get_str()},
                            {"norm_sq_den", s.norm_sq.get_den().get_str()},
                            {"terms", terms}});
  }
  return json{{"example", example_name(basis.ex)},
              {"k", basis.k},
              {"nu", {basis.nu.nu1, basis.nu.nu2}},
              {"level_min", basis.level_min},
              {"level_max", basis.level_max},
              {"sections", sections}};
}

inline json report_to_json(const AsymptoticReport& r) {
  return json{{"example", example_name(r.ex)},
              {"nu", {r.nu.nu1, r.nu.nu2}},
              {"seed", r.seed},
              {"k_grid", r.k_grid},
              {"boundary_ratios", r.boundary_ratios},
              {"median_abs_dev", r.median_abs_dev},
              {"outer_normalized", r.outer_normalized},
              {"outer_slope", r.outer_slope}};
}

inline AsymptoticReport report_from_json(const json& j) {
  AsymptoticReport r;
  r.ex = example_from_name(j.at("example").get<std::string>());
  r.nu = {j.at("nu")[0].get<int>(), j.at("nu")[1].get<int>()};
  r.seed = j.at("seed").get<std::uint64_t>();
  r.k_grid = j.at("k_grid").get<std::vector<int>>();
  r.boundary_ratios = j.at("boundary_ratios").get<std::vector<std::vector<double>>>();
  r.median_abs_dev = j.at("median_abs_dev").get<std::vector<double>>();
  r.outer_normalized = j.at("outer_normalized").get<std::vector<double>>();
  r.outer_slope = j.at("outer_slope").get<double>();
  return r;
}

// Flattened CSV form of the comparison report.
inline std::string report_csv(const AsymptoticReport& r) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t ki = 0; ki < r.k_grid.size(); ++ki) {
    for (std::size_t p = 0; p < r.boundary_ratios[ki].size(); ++p)
      rows.push_back({std::to_string(r.k_grid[ki]), "boundary_ratio", std::to_string(p),
                      fmt_double_exact(r.boundary_ratios[ki][p])});
    rows.push_back({std::to_string(r.k_grid[ki]), "median_abs_dev", "-",
                    fmt_double_exact(r.median_abs_dev[ki])});
    rows.push_back({std::to_string(r.k_grid[ki]), "outer_normalized", "-",
                    fmt_double_exact(r.outer_normalized[ki])});
  }
  rows.push_back({"-", "outer_slope", "-", fmt_double_exact(r.outer_slope)});
  return make_csv("equikernel-compare-v1", {"k", "quantity", "index", "value"}, rows);
}

}  // namespace equikernel
