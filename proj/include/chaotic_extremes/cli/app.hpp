#ifndef CHAOTIC_EXTREMES_CLI_APP_HPP
#define CHAOTIC_EXTREMES_CLI_APP_HPP

// Command-line front end. Each subcommand writes one data file (CSV or JSON)
// and one manifest next to it:
//
//   table1   table1.csv    x,H,empirical
//   maxima   maxima.csv    replica,normalized
//   dprime   dprime.csv    k,estimate,stderr
//   corr     corr.csv      j,p_joint,p_marginal_sq,corr,stderr
//   depth    depth.csv     gamma,count,frequency,analytic_a2
//   measure  measure_model.csv (see model_io.hpp)
//   verify   verify.csv    n,eg_margin,ba_margin
//
// The manifest <stem>.manifest.json records every resolved parameter under
// "arguments"; `--from-manifest <file>` replays them.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "../chaotic_extremes.hpp"

namespace chaotic_extremes::cli {

inline constexpr const char* tool_version = "0.1.0";
inline constexpr const char* threads_env = "CHAOTIC_EXTREMES_THREADS";

// Bad flags or flag combinations; exit code 2.
class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::string command;
  double a = 2.0;
  int delta_exp = MapParameter::default_delta_exp;
  double alpha = MapParameter::default_alpha;
  std::optional<double> beta;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<std::size_t> m;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> N;
  std::vector<std::size_t> k;
  double tau = 1.0;
  std::vector<double> grid;
  std::string mode = "orbit";
  std::optional<double> u;
  double p = 0.05;
  std::size_t j_max = 40;
  std::optional<int> theta_min;
  std::size_t horizon = 100;
  std::size_t burn = 0;
  std::size_t burn_in = default_burn_in;
  double c = std::numbers::ln2;
  std::string model_path;
  std::size_t model_N = 1'000'000;
  std::size_t model_burn_in = default_burn_in;
  bool paper_defaults = false;
  std::string out = ".";
  std::string format = "csv";
  unsigned threads = 0;
  std::string from_manifest;
};

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os << content;
    if (!os.flush()) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

/// Rows of text cells, rendered as CSV or as a JSON array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << '\n';
    }
    return os.str();
  }

  std::string json() const {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json obj = ordered_json::object();
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i].empty()) {
          obj[columns[i]] = nullptr;
        } else {
          // Non-finite values have no JSON number form and stay strings.
          auto v = ordered_json::parse(r[i], nullptr, false);
          obj[columns[i]] = v.is_discarded() ? ordered_json(r[i]) : std::move(v);
        }
      }
      arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
  }
};

inline std::string cell(double v) { return format_real(v); }
inline std::string cell(std::uint64_t v) { return std::to_string(v); }

template <class T>
std::string join(const std::vector<T>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_floating_point_v<T>) {
      s += format_real(values[i]);
    } else {
      s += std::to_string(values[i]);
    }
  }
  return s;
}

inline bool is_stochastic(const std::string& command) { return command != "verify"; }

/// Fully resolved flag list of a run; replaying it reproduces the outputs.
inline std::vector<std::string> canonical_arguments(const Settings& s) {
  std::vector<std::string> args{s.command};
  auto add = [&](const std::string& flag, const std::string& value) {
    args.push_back(flag);
    args.push_back(value);
  };
  add("--a", format_real(s.a));
  add("--delta-exp", std::to_string(s.delta_exp));
  add("--alpha", format_real(s.alpha));
  if (s.beta) add("--beta", format_real(*s.beta));
  if (s.seed) add("--seed", std::to_string(*s.seed));
  add("--format", s.format);
  if (is_stochastic(s.command) && s.command != "measure") {
    if (!s.model_path.empty()) {
      add("--model", s.model_path);
    } else if (s.a != 2.0) {
      add("--model-N", std::to_string(s.model_N));
      add("--model-burn-in", std::to_string(s.model_burn_in));
    }
  }
  const auto& c = s.command;
  if (c == "table1") {
    add("--n", std::to_string(*s.n));
    add("--m", std::to_string(*s.m));
    add("--grid", join(s.grid));
  } else if (c == "maxima") {
    add("--n", std::to_string(*s.n));
    add("--m", std::to_string(*s.m));
  } else if (c == "dprime") {
    add("--n", std::to_string(*s.n));
    add("--tau", format_real(s.tau));
    add("--k", join(s.k));
    add("--trials", std::to_string(*s.trials));
    add("--mode", s.mode);
  } else if (c == "corr") {
    if (s.u) {
      add("--u", format_real(*s.u));
    } else {
      add("--p", format_real(s.p));
    }
    add("--j-max", std::to_string(s.j_max));
    add("--trials", std::to_string(*s.trials));
    if (s.n) add("--n", std::to_string(*s.n));
  } else if (c == "depth") {
    add("--theta-min", std::to_string(*s.theta_min));
    add("--trials", std::to_string(*s.trials));
    add("--horizon", std::to_string(s.horizon));
    add("--burn", std::to_string(s.burn));
  } else if (c == "measure") {
    add("--N", std::to_string(*s.N));
    add("--burn-in", std::to_string(s.burn_in));
  } else if (c == "verify") {
    add("--N", std::to_string(*s.N));
    add("--c", format_real(s.c));
  }
  return args;
}

inline MeasureModel load_or_build_model(const Settings& s, const MapParameter& params) {
  if (!s.model_path.empty()) {
    std::ifstream is(s.model_path);
    if (!is) throw argument_error("cannot open model file " + s.model_path);
    auto model = read_model(is);
    if (model.a() != s.a) throw argument_error("model file was built for a different parameter a");
    return model;
  }
  if (s.a == 2.0) return MeasureModel::analytic_a2();
  return build_empirical(params, s.model_N, s.model_burn_in, *s.seed);
}

struct Outcome {
  std::string stem;
  Table table;
  std::string raw;  // preformatted content, used instead of `table` when set
  ordered_json results = ordered_json::object();
  std::vector<std::string> failed_assertions;
  std::string report;  // printed to standard output
};

inline Outcome run_table1(const Settings& s, const MapParameter& params, unsigned threads) {
  const auto model = load_or_build_model(s, params);
  const auto exp = sample_maxima(params, model, *s.n, *s.m, *s.seed, threads);
  const auto emp = ecdf_at(exp, s.grid);
  Outcome o;
  o.stem = "table1";
  o.table.columns = {"x", "H", "empirical"};
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    o.table.rows.push_back({cell(s.grid[i]), cell(weibull_H(s.grid[i])), cell(emp[i])});
  }
  o.results["a_n"] = exp.a_n;
  o.results["b_n"] = exp.b_n;
  o.results["ks_distance"] = ks_distance(std::span<const double>(exp.normalized), weibull_H);
  return o;
}

inline Outcome run_maxima(const Settings& s, const MapParameter& params, unsigned threads) {
  const auto model = load_or_build_model(s, params);
  const auto exp = sample_maxima(params, model, *s.n, *s.m, *s.seed, threads);
  Outcome o;
  o.stem = "maxima";
  o.table.columns = {"replica", "normalized"};
  const double upper = model.kind() == MeasureKind::analytic_a2
                           ? 0.0
                           : exp.a_n * (model.samples().back() - exp.b_n);
  std::size_t above = 0;
  for (std::size_t i = 0; i < exp.normalized.size(); ++i) {
    o.table.rows.push_back({std::to_string(i), cell(exp.normalized[i])});
    if (model.kind() == MeasureKind::analytic_a2 && exp.normalized[i] > upper) ++above;
  }
  o.results["a_n"] = exp.a_n;
  o.results["b_n"] = exp.b_n;
  o.results["ks_distance"] = ks_distance(std::span<const double>(exp.normalized), weibull_H);
  if (above != 0) o.failed_assertions.push_back("normalized maxima above 0 for a = 2");
  return o;
}

inline DprimeMode parse_mode(const std::string& mode) {
  if (mode == "orbit") return DprimeMode::orbit;
  if (mode == "strict") return DprimeMode::strict;
  if (mode == "iid") return DprimeMode::iid_surrogate;
  throw usage_error("--mode must be one of orbit, strict, iid");
}

inline Outcome run_dprime(const Settings& s, const MapParameter& params, unsigned threads) {
  const auto model = load_or_build_model(s, params);
  const auto mode = parse_mode(s.mode);
  Outcome o;
  o.stem = "dprime";
  o.table.columns = {"k", "estimate", "stderr"};
  ordered_json per_k = ordered_json::array();
  for (std::size_t k : s.k) {
    const auto r = dprime_estimate(params, model, *s.n, k, s.tau, *s.trials, *s.seed, mode, threads);
    o.table.rows.push_back({std::to_string(k), cell(r.estimate), cell(r.stderr_)});
    per_k.push_back({{"k", k},
                     {"lags", r.lags},
                     {"iid_reference", r.iid_reference},
                     {"start_exceedances", r.start_exceedances},
                     {"joint_exceedances", r.joint_exceedances},
                     {"deep_return_violations", r.deep_return_violations}});
    o.results["u_n"] = r.level.u_n;
    o.results["theta"] = r.level.theta;
    if (r.deep_return_violations != 0) {
      o.failed_assertions.push_back("exceedance without a preceding Theta-deep return (k = " +
                                    std::to_string(k) + ")");
    }
  }
  o.results["per_k"] = per_k;
  return o;
}

inline Outcome run_corr(const Settings& s, const MapParameter& params, unsigned threads) {
  const auto model = load_or_build_model(s, params);
  if (!s.u && !(s.p > 0.0 && s.p < 1.0)) throw usage_error("--p must lie in (0, 1)");
  const double u = s.u ? *s.u : model.quantile(1.0 - s.p);
  const auto pts = indicator_correlation(params, model, u, s.j_max, *s.trials, *s.seed, threads);
  Outcome o;
  o.stem = "corr";
  o.table.columns = {"j", "p_joint", "p_marginal_sq", "corr", "stderr"};
  for (const auto& pt : pts) {
    o.table.rows.push_back({std::to_string(pt.lag), cell(pt.p_joint), cell(pt.p_marginal_sq),
                            cell(pt.corr), cell(pt.stderr_)});
  }
  o.results["u"] = u;
  const auto rate = fit_decay_rate(pts);
  if (rate && *rate > 0.0 && *rate < 1.0) {
    o.results["varsigma_hat"] = *rate;
    if (s.n) o.results["turning_time"] = turning_time(*rate, *s.n);
  } else {
    o.results["varsigma_hat"] = nullptr;
    o.results["turning_time"] = "indistinguishable from immediate mixing";
  }
  return o;
}

inline Outcome run_depth(const Settings& s, const MapParameter& params, unsigned threads) {
  const auto model = load_or_build_model(s, params);
  const auto h = depth_histogram(params, model, *s.theta_min, *s.trials, s.horizon, *s.seed,
                                 s.burn, threads);
  Outcome o;
  o.stem = "depth";
  o.table.columns = {"gamma", "count", "frequency", "analytic_a2"};
  for (int g = h.theta_min; g <= h.max_depth(); ++g) {
    o.table.rows.push_back({std::to_string(g), cell(h.counts[static_cast<std::size_t>(g)]),
                            cell(h.frequency(g)), s.a == 2.0 ? cell(depth_mass_a2(g)) : ""});
  }
  o.results["critical_count"] = h.critical_count;
  o.results["critical_frequency"] =
      static_cast<double>(h.critical_count) / static_cast<double>(h.trials);
  return o;
}

inline Outcome run_measure(const Settings& s, const MapParameter& params, unsigned) {
  const auto model = build_empirical(params, *s.N, s.burn_in, *s.seed);
  Outcome o;
  o.stem = "measure_model";
  std::ostringstream os;
  write_model(os, model);
  o.raw = os.str();
  o.results["support"] = {model.samples().front(), model.samples().back()};
  o.results["mean"] = model.mean();
  if (s.a == 2.0) {
    o.results["supdist"] = sup_distance_to_arcsine(model);
  } else {
    o.results["supdist"] = nullptr;
  }
  for (const auto& w : model.warnings()) o.results["warnings"].push_back(w);
  return o;
}

inline Outcome run_verify(const Settings& s, const MapParameter& params, unsigned) {
  const auto rep = verify_growth_conditions(params, s.c, *s.N);
  Outcome o;
  o.stem = "verify";
  o.table.columns = {"n", "eg_margin", "ba_margin"};
  for (std::size_t i = 0; i < rep.eg_margins.size(); ++i) {
    o.table.rows.push_back({std::to_string(i + 1), cell(rep.eg_margins[i]), cell(rep.ba_margins[i])});
  }
  const std::string c_text = s.c == std::numbers::ln2 ? "log 2" : format_real(s.c);
  std::ostringstream line;
  line << "EG " << (rep.eg_pass() ? "pass" : "fail at n=" + std::to_string(*rep.eg_first_failure))
       << " (c=" << c_text << "), BA "
       << (rep.ba_pass() ? "pass" : "fail at n=" + std::to_string(*rep.ba_first_failure))
       << " (α=" << format_real(rep.alpha) << ")";
  o.report = line.str();
  o.results["eg_pass"] = rep.eg_pass();
  o.results["ba_pass"] = rep.ba_pass();
  o.results["eg_first_failure"] =
      rep.eg_first_failure ? ordered_json(*rep.eg_first_failure) : ordered_json(nullptr);
  o.results["ba_first_failure"] =
      rep.ba_first_failure ? ordered_json(*rep.ba_first_failure) : ordered_json(nullptr);
  o.results["caveat"] = rep.caveat;
  return o;
}

inline void resolve_defaults(Settings& s) {
  if (s.paper_defaults) {
    if (s.a != 2.0) throw usage_error("--paper-defaults fixes a = 2");
    s.delta_exp = MapParameter::default_delta_exp;
    s.alpha = MapParameter::default_alpha;
    s.tau = 1.0;
    s.grid.assign(table1_grid.begin(), table1_grid.end());
    if (!s.n && (s.command == "table1" || s.command == "maxima")) s.n = 1000;
    if (!s.m && (s.command == "table1" || s.command == "maxima")) s.m = 10000;
  }
  if (is_stochastic(s.command) && !s.seed) {
    throw usage_error("--seed is required for " + s.command);
  }
  if (s.format != "csv" && s.format != "json") throw usage_error("--format must be csv or json");
  auto need = [&](const auto& opt, const char* flag) {
    if (!opt) throw usage_error(std::string(flag) + " is required for " + s.command);
  };
  const auto& c = s.command;
  if (c == "table1" || c == "maxima") {
    need(s.n, "--n");
    need(s.m, "--m");
    if (s.grid.empty()) s.grid.assign(table1_grid.begin(), table1_grid.end());
    std::sort(s.grid.begin(), s.grid.end());
  } else if (c == "dprime") {
    need(s.n, "--n");
    if (s.k.empty()) throw usage_error("--k is required for dprime");
    if (!s.trials) s.trials = 100'000;
    parse_mode(s.mode);
  } else if (c == "corr") {
    if (!s.trials) s.trials = 1'000'000;
  } else if (c == "depth") {
    if (!s.theta_min) s.theta_min = s.delta_exp;
    if (!s.trials) s.trials = 1'000'000;
  } else if (c == "measure") {
    if (!s.N) s.N = 1'000'000;
  } else if (c == "verify") {
    if (!s.N) s.N = 100;
  }
}

inline void add_common(CLI::App* sub, Settings& s) {
  sub->add_option("--a", s.a, "map parameter a in (0, 2]");
  sub->add_option("--delta-exp", s.delta_exp, "critical region radius exp(-Delta)");
  sub->add_option("--alpha", s.alpha, "basic-assumption rate alpha (beta defaults to 14 alpha)");
  sub->add_option("--beta", s.beta, "bound-period envelope rate beta");
  sub->add_option("--seed", s.seed, "seed of every random stream");
  sub->add_option("--out", s.out, "output directory");
  sub->add_option("--format", s.format, "csv or json");
  sub->add_option("--threads", s.threads, "worker threads (0 = all cores)");
  sub->add_flag("--paper-defaults", s.paper_defaults, "pin a = 2 and the 13-point table grid");
  sub->add_option("--model", s.model_path, "measure model file to sample X_0 from");
  sub->add_option("--model-N", s.model_N, "Birkhoff sample size of the model built for a != 2");
  sub->add_option("--model-burn-in", s.model_burn_in, "burn-in of the model built for a != 2");
}

inline int execute(Settings s, std::ostream& out, std::ostream& err);

inline int replay_manifest(const Settings& cli, std::ostream& out, std::ostream& err);

}  // namespace detail

/// Parses `args` (without the program name) and runs the command.
/// Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  Settings s;
  CLI::App app{"Extreme-value experiments for the quadratic family f_a(x) = 1 - a x^2",
               "chaotic_extremes"};
  app.set_version_flag("--version", tool_version);
  app.require_subcommand(0, 1);
  app.add_option("--from-manifest", s.from_manifest, "replay the arguments stored in a manifest");
  app.add_option("--out", s.out, "output directory");
  app.add_option("--threads", s.threads, "worker threads (0 = all cores)");

  auto* table1 = app.add_subcommand("table1", "ECDF of normalized maxima on the table grid");
  table1->add_option("--n", s.n, "block length");
  table1->add_option("--m", s.m, "number of replicas");
  table1->add_option("--grid", s.grid, "comma-separated x values")->delimiter(',');

  auto* maxima = app.add_subcommand("maxima", "normalized block maxima a_n (M_n - 1)");
  maxima->add_option("--n", s.n, "block length");
  maxima->add_option("--m", s.m, "number of replicas");

  auto* dprime = app.add_subcommand("dprime", "Monte-Carlo estimate of the D'(u_n) sum");
  dprime->add_option("--n", s.n, "sample size n");
  dprime->add_option("--tau", s.tau, "exceedance intensity tau");
  dprime->add_option("--k", s.k, "comma-separated block counts k")->delimiter(',');
  dprime->add_option("--trials", s.trials, "stationary starts");
  dprime->add_option("--mode", s.mode, "orbit, strict or iid");

  auto* corr = app.add_subcommand("corr", "exceedance-indicator correlations");
  corr->add_option("--u", s.u, "threshold u");
  corr->add_option("--p", s.p, "exceedance probability defining u (default 0.05)");
  corr->add_option("--j-max", s.j_max, "largest lag");
  corr->add_option("--trials", s.trials, "stationary starts");
  corr->add_option("--n", s.n, "n for the turning time T(n)");

  auto* depth_cmd = app.add_subcommand("depth", "frequencies of return depths");
  depth_cmd->add_option("--theta-min", s.theta_min, "smallest depth reported");
  depth_cmd->add_option("--trials", s.trials, "stationary starts");
  depth_cmd->add_option("--horizon", s.horizon, "largest observation time");
  depth_cmd->add_option("--burn", s.burn, "smallest observation time");

  auto* measure = app.add_subcommand("measure", "empirical invariant measure (Birkhoff sample)");
  measure->add_option("--N", s.N, "sample size");
  measure->add_option("--burn-in", s.burn_in, "burn-in steps");

  auto* verify = app.add_subcommand("verify", "finite-horizon check of the growth conditions");
  verify->add_option("--N", s.N, "horizon");
  verify->add_option("--c", s.c, "growth rate c (default log 2)");

  for (auto* sub : {table1, maxima, dprime, corr, depth_cmd, measure, verify}) {
    detail::add_common(sub, s);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << tool_version << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
    return 2;
  }

  if (!s.from_manifest.empty()) {
    if (!app.get_subcommands().empty()) {
      err << "usage error: --from-manifest cannot be combined with a subcommand\n";
      return 2;
    }
    return detail::replay_manifest(s, out, err);
  }
  if (app.get_subcommands().empty()) {
    err << "usage error: a subcommand is required\n" << app.help();
    return 2;
  }
  s.command = app.get_subcommands().front()->get_name();
  return detail::execute(std::move(s), out, err);
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

namespace detail {

inline unsigned resolve_threads(unsigned requested) {
  if (const char* env = std::getenv(threads_env); env != nullptr && *env != '\0') {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      throw usage_error(std::string(threads_env) + " must be a non-negative integer");
    }
  }
  return requested;
}

inline int execute(Settings s, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  Outcome o;
  try {
    resolve_defaults(s);
    const unsigned threads = resolve_threads(s.threads);
    const MapParameter params(s.a, s.delta_exp, s.alpha, s.beta);
    for (const auto& w : params.warnings()) err << "warning: " << w << '\n';

    const auto& c = s.command;
    if (c == "table1") o = run_table1(s, params, threads);
    else if (c == "maxima") o = run_maxima(s, params, threads);
    else if (c == "dprime") o = run_dprime(s, params, threads);
    else if (c == "corr") o = run_corr(s, params, threads);
    else if (c == "depth") o = run_depth(s, params, threads);
    else if (c == "measure") o = run_measure(s, params, threads);
    else if (c == "verify") o = run_verify(s, params, threads);
    else throw usage_error("unknown command " + c);
  } catch (const usage_error& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    namespace fs = std::filesystem;
    const fs::path dir(s.out);
    fs::create_directories(dir);
    const bool json = s.format == "json" && o.raw.empty();
    const std::string data_name = o.stem + (json ? ".json" : ".csv");
    write_atomic(dir / data_name, !o.raw.empty() ? o.raw : (json ? o.table.json() : o.table.csv()));

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    ordered_json manifest;
    manifest["command"] = s.command;
    manifest["seed"] = s.seed ? ordered_json(*s.seed) : ordered_json(nullptr);
    manifest["a"] = s.a;
    manifest["n"] = s.n ? ordered_json(*s.n) : ordered_json(nullptr);
    manifest["m"] = s.m ? ordered_json(*s.m) : ordered_json(nullptr);
    manifest["trials"] = s.trials ? ordered_json(*s.trials) : ordered_json(nullptr);
    manifest["k"] = s.k;
    manifest["tau"] = s.tau;
    manifest["alpha"] = s.alpha;
    manifest["beta"] = s.beta.value_or(MapParameter::beta_per_alpha * s.alpha);
    manifest["delta_exp"] = s.delta_exp;
    manifest["tool_version"] = tool_version;
    manifest["wall_time_seconds"] = wall;
    manifest["output"] = data_name;
    manifest["arguments"] = canonical_arguments(s);
    manifest["results"] = o.results;
    if (o.results.contains("supdist")) manifest["supdist"] = o.results["supdist"];
    write_atomic(dir / (o.stem + ".manifest.json"), manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  if (!o.report.empty()) out << o.report << '\n';
  if (!o.failed_assertions.empty()) {
    for (const auto& f : o.failed_assertions) err << "assertion failed: " << f << '\n';
    return 1;
  }
  return 0;
}

inline int replay_manifest(const Settings& cli, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    std::ifstream is(cli.from_manifest);
    if (!is) throw std::runtime_error("cannot open manifest " + cli.from_manifest);
    const auto manifest = nlohmann::json::parse(is);
    args = manifest.at("arguments").get<std::vector<std::string>>();
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
  if (args.empty()) {
    err << "usage error: manifest has no arguments\n";
    return 2;
  }
  args.push_back("--out");
  args.push_back(cli.out);
  args.push_back("--threads");
  args.push_back(std::to_string(cli.threads));
  return run(args, out, err);
}

}  // namespace detail
}  // namespace chaotic_extremes::cli

#endif  // CHAOTIC_EXTREMES_CLI_APP_HPP
