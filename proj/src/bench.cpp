// Copyright 2026 The QGenX Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qgenx/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"

namespace qgenx {

const char* const kCsvHeader =
    "seed,t,gap,bits_total,bits_per_iter_mean,eps_Q_bound,var_empirical,"
    "schedule_version";

std::vector<long> default_checkpoints(long iterations) {
  std::vector<long> points;
  for (double e = 2.0;; e += 0.5) {
    const long t = std::lround(std::pow(10.0, e));
    if (t > iterations) break;
    points.push_back(t);
  }
  if (points.empty() || points.back() != iterations)
    points.push_back(iterations);
  return points;
}

namespace {

NormOrder parse_norm(const std::string& s) {
  if (s == "1") return NormOrder::l1;
  if (s == "2") return NormOrder::l2;
  if (s == "inf") return NormOrder::linf;
  throw CLI::ValidationError("run.norm", "must be one of 1, 2, inf");
}

Variant parse_variant(const std::string& s) {
  if (s == "da") return Variant::da;
  if (s == "de") return Variant::de;
  if (s == "optda") return Variant::optda;
  throw CLI::ValidationError("run.variant", "must be one of da, de, optda");
}

CodingScheme parse_scheme(const std::string& s) {
  if (s == "elias") return CodingScheme::elias;
  if (s == "huffman") return CodingScheme::huffman;
  if (s == "fp32") return CodingScheme::fp32;
  throw CLI::ValidationError("run.scheme", "must be one of elias, huffman, fp32");
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& toml_path) {
  CLI::App app{"qgenx experiment config"};
  app.allow_config_extras(false);
  const auto section = [&app](const std::string& name) {
    CLI::App* sub = app.add_subcommand(name);
    sub->configurable(true);
    return sub;
  };

  CLI::App* problem = section("problem");
  std::string problem_kind = "bilinear-skew";
  int problem_d = 2;
  uint64_t problem_seed = 0;
  double problem_scale = 1.0;
  double eig_min = 1.0, eig_max = 1.0;
  bool log_spaced = false;
  int players = 2, player_dim = 1;
  std::vector<double> player_probs;
  problem->add_option("--kind", problem_kind)->capture_default_str();
  problem->add_option("--d", problem_d)->capture_default_str();
  problem->add_option("--seed", problem_seed)->capture_default_str();
  problem->add_option("--scale", problem_scale)->capture_default_str();
  problem->add_option("--eig_min", eig_min)->capture_default_str();
  problem->add_option("--eig_max", eig_max)->capture_default_str();
  problem->add_option("--log_spaced", log_spaced)->capture_default_str();
  problem->add_option("--players", players)->capture_default_str();
  problem->add_option("--player_dim", player_dim)->capture_default_str();
  problem->add_option("--player_probs", player_probs);

  CLI::App* noise = section("noise");
  std::string noise_kind = "none";
  double sigma = 0.0, rel_c = 0.0, bound = 1e6;
  noise->add_option("--kind", noise_kind)->capture_default_str();
  noise->add_option("--sigma", sigma)->capture_default_str();
  noise->add_option("--c", rel_c)->capture_default_str();
  noise->add_option("--bound", bound)->capture_default_str();

  CLI::App* run_section = section("run");
  int workers = 1;
  long iterations = 100;
  std::string variant = "de", scheme = "huffman", norm = "2";
  std::string cdf_model = "empirical", level_method = "coordinate";
  int levels = 3, stats_window = 64, cdf_bins = 1024;
  std::vector<uint64_t> seeds;
  std::vector<long> checkpoints, update_steps;
  run_section->add_option("--workers", workers)->capture_default_str();
  run_section->add_option("--iterations", iterations)->capture_default_str();
  run_section->add_option("--variant", variant)->capture_default_str();
  run_section->add_option("--scheme", scheme)->capture_default_str();
  run_section->add_option("--levels", levels)->capture_default_str();
  run_section->add_option("--norm", norm)->capture_default_str();
  run_section->add_option("--seeds", seeds);
  run_section->add_option("--checkpoints", checkpoints);
  run_section->add_option("--update_steps", update_steps);
  run_section->add_option("--stats_window", stats_window)->capture_default_str();
  run_section->add_option("--cdf_bins", cdf_bins)->capture_default_str();
  run_section->add_option("--cdf_model", cdf_model)->capture_default_str();
  run_section->add_option("--level_method", level_method)->capture_default_str();

  CLI::App* domain = section("domain");
  double domain_radius = 2.0;
  std::vector<double> domain_center;
  domain->add_option("--radius", domain_radius)->capture_default_str();
  domain->add_option("--center", domain_center);

  CLI::App* output = section("output");
  std::string csv_path = "runs.csv", summary_path = "summary.json";
  output->add_option("--csv", csv_path)->capture_default_str();
  output->add_option("--summary", summary_path)->capture_default_str();

  CLI::App* tradeoff = section("tradeoff");
  double tradeoff_epsilon = 0.0;
  tradeoff->add_option("--epsilon", tradeoff_epsilon)->capture_default_str();

  app.set_config("--config")->required();
  std::vector<std::string> args = {toml_path, "--config"};  // reversed
  app.parse(args);

  ExperimentConfig config;
  if (problem_kind == "bilinear-skew") {
    config.sim.problem = BilinearSkewSpec{problem_d, problem_seed, problem_scale};
  } else if (problem_kind == "diagonal-monotone") {
    config.sim.problem =
        DiagonalMonotoneSpec{problem_d, eig_min, eig_max, log_spaced, problem_seed};
  } else if (problem_kind == "rcd") {
    config.sim.problem = RcdSpec{problem_d, problem_seed};
  } else if (problem_kind == "random-player") {
    config.sim.problem =
        RandomPlayerSpec{players, player_dim, player_probs, problem_seed};
  } else {
    throw CLI::ValidationError("problem.kind", "unknown problem kind");
  }

  if (noise_kind == "none") {
    config.sim.noise = std::monostate{};
  } else if (noise_kind == "absolute") {
    config.sim.noise = AbsoluteNoise{sigma, bound};
  } else if (noise_kind == "relative") {
    config.sim.noise = RelativeNoise{rel_c, bound};
  } else {
    throw CLI::ValidationError("noise.kind", "unknown noise kind");
  }

  config.sim.workers = workers;
  config.sim.iterations = iterations;
  config.sim.variant = parse_variant(variant);
  config.sim.scheme = parse_scheme(scheme);
  config.sim.levels = levels;
  config.sim.norm = parse_norm(norm);
  config.sim.update_steps = update_steps;
  config.sim.checkpoints =
      checkpoints.empty() ? default_checkpoints(iterations) : checkpoints;
  for (long c : config.sim.checkpoints)
    if (c < 1 || c > iterations)
      throw CLI::ValidationError("run.checkpoints", "must lie in [1, T]");
  config.sim.stats_window = stats_window;
  config.sim.cdf_bins = cdf_bins;
  if (cdf_model == "empirical")
    config.sim.cdf_model = CdfModel::empirical;
  else if (cdf_model == "log-normal")
    config.sim.cdf_model = CdfModel::log_normal;
  else
    throw CLI::ValidationError("run.cdf_model", "must be empirical or log-normal");
  if (level_method == "coordinate")
    config.sim.level_method = LevelOptMethod::coordinate;
  else if (level_method == "gradient")
    config.sim.level_method = LevelOptMethod::gradient;
  else
    throw CLI::ValidationError("run.level_method", "must be coordinate or gradient");
  config.sim.domain_radius = domain_radius;
  if (!domain_center.empty())
    config.sim.domain_center =
        Eigen::Map<const Vec>(domain_center.data(), domain_center.size());
  if (!seeds.empty()) config.seeds = seeds;
  config.csv_path = csv_path;
  config.summary_path = summary_path;
  config.tradeoff_epsilon = tradeoff_epsilon;
  return config;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
  std::ofstream csv(config.csv_path);
  if (!csv) throw std::runtime_error("cannot open CSV output " + config.csv_path);
  csv << kCsvHeader << "\n";
  csv.precision(12);

  ExperimentSummary summary;
  summary.checkpoints = config.sim.checkpoints;
  std::map<long, std::vector<double>> gaps_at;
  std::vector<double> final_gaps, total_bits;
  double eps_q_bar_acc = 0.0, bits_bound_acc = 0.0;

  for (uint64_t seed : config.seeds) {
    const SimResult res = run(config.sim, seed);
    std::map<int, double> eps_q_of_version;
    for (const ScheduleSegment& seg : res.segments)
      eps_q_of_version[seg.version] = seg.eps_q;
    long bits_so_far = 0;
    for (const RoundMetrics& rm : res.metrics) {
      for (long b : rm.bits_per_worker) bits_so_far += b;
      csv << seed << ',' << rm.t << ',';
      if (rm.gap) csv << *rm.gap;
      csv << ',' << bits_so_far << ','
          << static_cast<double>(bits_so_far) / static_cast<double>(rm.t) << ','
          << eps_q_of_version.at(rm.schedule_version) << ','
          << rm.quant_err_sq_mean << ',' << rm.schedule_version << "\n";
      if (rm.gap) gaps_at[rm.t].push_back(*rm.gap);
    }
    final_gaps.push_back(res.final_gap);
    total_bits.push_back(static_cast<double>(res.total_bits));
    summary.variance_bound_violations += res.variance_bound_violations;
    summary.code_sandwich_violations += res.code_sandwich_violations;
    summary.clip_events_total += res.clip_events_total;

    // eps_Q-bar = sum_j T_j eps_{Q,j} / T and the per-iteration bits bound,
    // averaged over seeds.
    const double mpi = config.sim.variant == Variant::de ? 2.0 : 1.0;
    double eq = 0.0, bb = 0.0;
    for (size_t j = 0; j < res.segments.size(); ++j) {
      const long from = res.segments[j].from_iteration;
      const long to = j + 1 < res.segments.size()
                          ? res.segments[j + 1].from_iteration
                          : config.sim.iterations + 1;
      const double span = static_cast<double>(to - from);
      eq += res.segments[j].eps_q * span;
      bb += res.segments[j].bound_bits * span * mpi;
    }
    eps_q_bar_acc += eq / static_cast<double>(config.sim.iterations);
    bits_bound_acc += bb / static_cast<double>(config.sim.iterations);
  }

  for (long t : summary.checkpoints)
    summary.median_gaps.push_back(median(gaps_at.at(t)));
  const bool fit_possible = summary.checkpoints.size() >= 3;
  if (fit_possible) {
    std::vector<double> ts(summary.checkpoints.begin(),
                           summary.checkpoints.end());
    summary.rate = fit_rate(ts, summary.median_gaps);
  }
  summary.eps_q_bar = eps_q_bar_acc / static_cast<double>(config.seeds.size());
  summary.bits_bound_per_iteration =
      bits_bound_acc / static_cast<double>(config.seeds.size());
  summary.total_bits_median = static_cast<long>(median(total_bits));
  summary.median_final_gap = median(final_gaps);

  nlohmann::json j;
  j["csv"] = config.csv_path;
  j["seeds"] = config.seeds;
  j["checkpoints"] = summary.checkpoints;
  j["median_gap"] = summary.median_gaps;
  if (fit_possible) {
    j["rate_fit"] = {{"slope", summary.rate.slope},
                     {"intercept", summary.rate.intercept},
                     {"r_squared", summary.rate.r_squared},
                     {"clamped", summary.rate.clamped}};
  } else {
    j["rate_fit"] = nullptr;  // needs >= 3 checkpoints
  }
  j["median_final_gap"] = summary.median_final_gap;
  j["eps_q_bar"] = summary.eps_q_bar;
  j["bound_violations"] = {
      {"variance", summary.variance_bound_violations},
      {"code_sandwich", summary.code_sandwich_violations}};
  j["total_bits_median"] = summary.total_bits_median;
  j["bits_bound_per_iteration_per_worker"] = summary.bits_bound_per_iteration;
  j["clip_events_total"] = summary.clip_events_total;
  j["domain_radius"] = config.sim.domain_radius;

  if (config.tradeoff_epsilon > 0.0) {
    double sigma = 0.0, m = 1.0;
    if (const auto* abs = std::get_if<AbsoluteNoise>(&config.sim.noise)) {
      sigma = abs->sigma;
      m = abs->bound;
    } else if (const auto* rel = std::get_if<RelativeNoise>(&config.sim.noise)) {
      m = rel->bound;
    }
    const TradeoffReport tr = report_tradeoff(
        config.tradeoff_epsilon, summary.eps_q_bar, sigma, m,
        config.sim.domain_radius, config.sim.workers,
        summary.bits_bound_per_iteration);
    j["tradeoff_projection"] = {
        {"note", "bound-derived projection, not a measurement"},
        {"epsilon", config.tradeoff_epsilon},
        {"iterations_needed", tr.iterations_needed},
        {"bits_per_iteration_per_worker", tr.bits_per_iteration},
        {"total_bits_estimate", tr.total_bits_estimate}};
  }

  std::ofstream summary_out(config.summary_path);
  if (!summary_out)
    throw std::runtime_error("cannot open summary output " + config.summary_path);
  summary_out << j.dump(2) << "\n";
  return summary;
}

}  // namespace qgenx
