// Command line front end: polytope sampling, uniformity tests, binning,
// and the Monte Carlo simulation study.
//
// Exit codes: 0 success, 2 usage/parse error, 3 data-domain error.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsinfer/ds_core.hpp"
#include "dsinfer/geometry.hpp"
#include "dsinfer/simulate.hpp"
#include "dsinfer/uniformity.hpp"

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  for (;;) {
    const auto pos = s.find(delim, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::int64_t parse_int64(const std::string& s) {
  const std::string t = trim(s);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw std::invalid_argument("not an integer: '" + s + "'");
  }
  return value;
}

std::uint64_t parse_uint64(const std::string& s) {
  const std::string t = trim(s);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw std::invalid_argument("not a non-negative integer: '" + s + "'");
  }
  return value;
}

double parse_double(const std::string& s) {
  const std::string t = trim(s);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return value;
}

std::vector<std::int64_t> parse_counts(const std::string& s) {
  std::vector<std::int64_t> counts;
  for (const auto& part : split(s, ',')) {
    counts.push_back(parse_int64(part));
  }
  return counts;
}

std::vector<int> parse_resolutions(const std::string& s) {
  std::vector<int> ks;
  for (const auto& part : split(s, ',')) {
    const std::int64_t k = parse_int64(part);
    if (k < 2 || k > 1000000) {
      throw std::invalid_argument("resolution out of range: '" + part + "'");
    }
    ks.push_back(static_cast<int>(k));
  }
  return ks;
}

std::vector<dsinfer::Method> parse_methods(const std::string& s) {
  std::set<dsinfer::Method> methods;
  for (const auto& part : split(s, ',')) {
    const std::string name = trim(part);
    if (name == "ds") {
      methods.insert(dsinfer::Method::ds);
    } else if (name == "chisq") {
      methods.insert(dsinfer::Method::chi_square);
    } else {
      throw std::invalid_argument("unknown method '" + name +
                                  "' (expected ds or chisq)");
    }
  }
  return {methods.begin(), methods.end()};
}

dsinfer::Hypothesis parse_hypothesis(const std::string& s) {
  const std::string name = trim(s);
  if (name == "h0" || name == "H0") return dsinfer::Hypothesis::h0;
  if (name == "h1" || name == "H1") return dsinfer::Hypothesis::h1;
  throw std::invalid_argument("unknown hypothesis '" + s +
                              "' (expected h0 or h1)");
}

// One "x,y" pair per line; '#' starts a comment.
std::vector<dsinfer::SamplePoint> read_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open points file: " + path);
  }
  std::vector<dsinfer::SamplePoint> points;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string body = trim(line);
    if (body.empty()) {
      continue;
    }
    const auto parts = split(body, ',');
    if (parts.size() != 2) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected 'x,y'");
    }
    try {
      points.push_back(
          dsinfer::SamplePoint{parse_double(parts[0]), parse_double(parts[1])});
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected 'x,y'");
    }
  }
  return points;
}

void print_report(std::ostream& out, const dsinfer::TestReport& report,
                  std::int64_t n) {
  out << dsinfer::method_name(report.method) << ',' << report.k << ',' << n
      << ',' << fmt17(report.r_center) << ',' << fmt17(report.p_upper) << ','
      << fmt17(report.p_lower) << '\n';
}

int cmd_sample(const std::string& counts_str, int m, std::int64_t weaken,
               std::uint64_t seed) {
  const dsinfer::CategoryCounts counts(parse_counts(counts_str));
  if (m < 1) {
    throw std::invalid_argument("sample: -m must be >= 1");
  }
  const std::size_t d = counts.dimension();
  std::string header = "w0";
  for (std::size_t i = 1; i <= d; ++i) {
    header += ",w" + std::to_string(i);
  }
  for (std::size_t i = 1; i <= d; ++i) {
    for (std::size_t j = 1; j <= d; ++j) {
      header += ",v" + std::to_string(i) + "_" + std::to_string(j);
    }
  }
  std::cout << header << '\n';

  dsinfer::RandomStream rng(seed);
  for (int row = 0; row < m; ++row) {
    const auto weights =
        dsinfer::sample_ds_weights(counts, dsinfer::Weakening{weaken}, rng);
    const auto poly = dsinfer::polytope_from_weights(weights);
    std::string line = fmt17(weights.w0);
    for (double wi : weights.w) {
      line += ',';
      line += fmt17(wi);
    }
    for (std::size_t i = 0; i < d; ++i) {
      for (double coord : poly.vertex(i)) {
        line += ',';
        line += fmt17(coord);
      }
    }
    std::cout << line << '\n';
  }
  return 0;
}

int cmd_test(const std::string& points_path, const std::string& counts_str,
             int k, int m, std::int64_t weaken, std::uint64_t seed) {
  if (points_path.empty() == counts_str.empty()) {
    throw std::invalid_argument("test: give exactly one of --points/--counts");
  }
  std::vector<std::int64_t> cells;
  if (!points_path.empty()) {
    const auto points = read_points_file(points_path);
    cells = dsinfer::bin_samples(points, k).cells();
  } else {
    cells = parse_counts(counts_str);
  }
  const dsinfer::ContingencyTable table(k, std::move(cells));

  dsinfer::RandomStream rng(seed);
  const auto ds =
      dsinfer::ds_uniformity_test(table, m, dsinfer::Weakening{weaken}, rng);
  const auto chi = dsinfer::chi_square_uniformity_test(table);

  std::cout << "method,k,n,r_center,p_upper,p_lower\n";
  print_report(std::cout, ds, table.total());
  print_report(std::cout, chi, table.total());
  return 0;
}

int cmd_bin(const std::string& points_path, int k) {
  const auto points = read_points_file(points_path);
  if (points.empty()) {
    std::cerr << "warning: " << points_path
              << " contains no points; table is all zero\n";
  }
  const auto table = dsinfer::bin_samples(points, k);
  std::string header = "c1";
  for (int j = 2; j <= k; ++j) {
    header += ",c" + std::to_string(j);
  }
  std::cout << header << '\n';
  for (int i = 0; i < k; ++i) {
    std::string line = std::to_string(table.cell(i, 0));
    for (int j = 1; j < k; ++j) {
      line += ',';
      line += std::to_string(table.cell(i, j));
    }
    std::cout << line << '\n';
  }
  return 0;
}

struct SimulateArgs {
  std::string config_path;
  int n = 30;
  int datasets = 100;
  std::string resolutions = "2,3,6";
  int m = 200;
  std::string hypothesis = "h0";
  std::string methods = "ds,chisq";
  std::uint64_t seed = 0;
  int threads = 1;
  std::int64_t weaken = 0;
  std::string out;
};

// Flat key=value lines mirroring the flag names; flags override the file.
std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file: " + path);
  }
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string body = trim(line);
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key=value");
    }
    kv[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
  }
  return kv;
}

void apply_config_file(const CLI::App& sub, SimulateArgs& args) {
  const auto kv = load_config_file(args.config_path);
  const auto given = [&sub](const std::string& flag) {
    return sub.count(flag) > 0;
  };
  for (const auto& [key, value] : kv) {
    if (key == "n") {
      if (!given("--n")) args.n = static_cast<int>(parse_int64(value));
    } else if (key == "datasets") {
      if (!given("--datasets"))
        args.datasets = static_cast<int>(parse_int64(value));
    } else if (key == "resolutions") {
      if (!given("--resolutions")) args.resolutions = value;
    } else if (key == "m") {
      if (!given("-m")) args.m = static_cast<int>(parse_int64(value));
    } else if (key == "hypothesis") {
      if (!given("--hypothesis")) args.hypothesis = value;
    } else if (key == "methods") {
      if (!given("--methods")) args.methods = value;
    } else if (key == "seed") {
      if (!given("--seed")) args.seed = parse_uint64(value);
    } else if (key == "threads") {
      if (!given("--threads"))
        args.threads = static_cast<int>(parse_int64(value));
    } else if (key == "weaken") {
      if (!given("--weaken")) args.weaken = parse_int64(value);
    } else if (key == "out") {
      if (!given("--out")) args.out = value;
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
}

void write_records_csv(const std::filesystem::path& path,
                       const std::vector<dsinfer::PValueRecord>& records) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << "dataset,method,k,p_upper,p_lower\n";
  for (const auto& r : records) {
    out << r.dataset << ',' << dsinfer::method_name(r.method) << ',' << r.k
        << ',' << fmt17(r.p_upper) << ',' << fmt17(r.p_lower) << '\n';
  }
}

void write_ecdf_csv(const std::filesystem::path& path,
                    const std::vector<dsinfer::PValueRecord>& records,
                    const std::vector<dsinfer::Method>& methods,
                    std::vector<int> resolutions) {
  std::sort(resolutions.begin(), resolutions.end());
  const auto grid = dsinfer::ecdf_grid();
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << "method,k,bound,grid,value\n";
  for (const auto method : methods) {
    for (const int k : resolutions) {
      std::vector<double> uppers;
      std::vector<double> lowers;
      for (const auto& r : records) {
        if (r.method == method && r.k == k) {
          uppers.push_back(r.p_upper);
          lowers.push_back(r.p_lower);
        }
      }
      for (const bool upper : {true, false}) {
        const auto curve = dsinfer::ecdf(upper ? uppers : lowers, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
          out << dsinfer::method_name(method) << ',' << k << ','
              << (upper ? "upper" : "lower") << ',' << fmt17(curve.grid[i])
              << ',' << fmt17(curve.values[i]) << '\n';
        }
      }
    }
  }
}

int cmd_simulate(const CLI::App& sub, SimulateArgs args) {
  if (!args.config_path.empty()) {
    apply_config_file(sub, args);
  }
  if (args.out.empty()) {
    throw std::invalid_argument("simulate: --out is required");
  }

  dsinfer::SimulationConfig config;
  config.n = args.n;
  config.datasets = args.datasets;
  config.resolutions = parse_resolutions(args.resolutions);
  config.m = args.m;
  config.weaken = dsinfer::Weakening{args.weaken};
  config.master_seed = args.seed;
  config.methods = parse_methods(args.methods);
  config.hypothesis = dsinfer::make_hypothesis(parse_hypothesis(args.hypothesis));
  config.threads = args.threads;

  const auto records = dsinfer::run_experiment(config);

  const std::filesystem::path out_dir(args.out);
  std::filesystem::create_directories(out_dir);
  write_records_csv(out_dir / "records.csv", records);
  write_ecdf_csv(out_dir / "ecdf.csv", records, config.methods,
                 config.resolutions);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Dirichlet Dempster-Shafer inference for multinomial parameters and "
      "multi-resolution uniformity testing"};
  app.require_subcommand(1);

  std::string counts_str;
  std::string points_path;
  int sample_m = 1;
  int test_m = 200;
  int k = 2;
  std::int64_t weaken = 0;
  std::uint64_t seed = 0;

  auto* sample = app.add_subcommand(
      "sample", "Draw DS polytopes for multinomial counts");
  sample->add_option("--counts", counts_str,
                     "comma-separated non-negative counts (>= 2 categories)")
      ->required();
  sample->add_option("-m", sample_m, "number of draws (default 1)");
  sample->add_option("--weaken", weaken, "missing-trial count r");
  sample->add_option("--seed", seed, "random seed (default 0)");

  auto* test = app.add_subcommand(
      "test", "Uniformity test (DS upper/lower p-values and chi-square)");
  auto* test_points = test->add_option("--points", points_path,
                                       "points file, one x,y pair per line");
  test->add_option("--counts", counts_str,
                   "row-major k*k cell counts, comma-separated")
      ->excludes(test_points);
  test->add_option("-k", k, "resolution (default 2)");
  test->add_option("-m", test_m, "polytopes per DS test (default 200)");
  test->add_option("--weaken", weaken, "missing-trial count r");
  test->add_option("--seed", seed, "random seed (default 0)");

  auto* bin = app.add_subcommand("bin", "Bin points into a k x k table");
  bin->add_option("--points", points_path, "points file")->required();
  bin->add_option("-k", k, "resolution (default 2)");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo study: p-value records and ECDF curves");
  simulate->add_option("--config", sim.config_path,
                       "key=value config file; flags override it");
  simulate->add_option("--n", sim.n, "samples per dataset");
  simulate->add_option("--datasets", sim.datasets, "number of datasets");
  simulate->add_option("--resolutions", sim.resolutions,
                       "comma-separated resolutions");
  simulate->add_option("-m", sim.m, "polytopes per DS test");
  simulate->add_option("--hypothesis", sim.hypothesis, "h0 or h1");
  simulate->add_option("--methods", sim.methods,
                       "comma-separated subset of ds,chisq");
  simulate->add_option("--seed", sim.seed, "master seed (default 0)");
  simulate->add_option("--threads", sim.threads, "dataset fan-out cap");
  simulate->add_option("--weaken", sim.weaken, "missing-trial count r");
  simulate->add_option("--out", sim.out, "output directory");

  try {
    app.parse(argc, argv);
    if (sample->parsed()) {
      return cmd_sample(counts_str, sample_m, weaken, seed);
    }
    if (test->parsed()) {
      return cmd_test(points_path, counts_str, k, test_m, weaken, seed);
    }
    if (bin->parsed()) {
      return cmd_bin(points_path, k);
    }
    if (simulate->parsed()) {
      return cmd_simulate(*simulate, sim);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
