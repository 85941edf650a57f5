#pragma once

// Seeded Monte Carlo harness: sweeps the observation probability over a grid,
// runs repeated top-k recovery trials per estimator, and aggregates error
// rates with standard errors. Also hosts the empirical check that recovery
// failure frequency stays under the closed-form guarantee.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "borda/aggregation.hpp"
#include "borda/bounds.hpp"
#include "borda/model.hpp"
#include "borda/observation.hpp"
#include "borda/rng.hpp"
#include "borda/score_vector.hpp"
#include "borda/textio.hpp"

namespace borda {

enum class Estimator { borda = 0, normalized_borda = 1, spectral = 2 };

inline const char* estimator_name(Estimator e) {
  switch (e) {
    case Estimator::borda: return "borda";
    case Estimator::normalized_borda: return "normalized_borda";
    case Estimator::spectral: return "spectral";
  }
  throw std::logic_error("unreachable");
}

inline Estimator parse_estimator(const std::string& name) {
  if (name == "borda") return Estimator::borda;
  if (name == "normalized_borda") return Estimator::normalized_borda;
  if (name == "spectral") return Estimator::spectral;
  throw std::invalid_argument("unknown estimator '" + name + "'");
}

inline std::vector<Estimator> parse_estimators(const std::string& csv) {
  std::vector<Estimator> out;
  for (const std::string& part : detail::split(csv, ',')) {
    const Estimator e = parse_estimator(detail::trim(part));
    if (std::find(out.begin(), out.end(), e) != out.end())
      throw std::invalid_argument("estimator listed twice: " + std::string(estimator_name(e)));
    out.push_back(e);
  }
  if (out.empty()) throw std::invalid_argument("estimator list is empty");
  return out;
}

// Weight families used throughout the synthetic experiments.
inline std::vector<double> named_weights(const std::string& name, int n) {
  std::vector<double> w(n);
  if (name == "w1") {
    for (int i = 0; i < n; ++i) w[i] = 15.0 + (i + 1);
  } else if (name == "w2") {
    for (int i = 0; i < n; ++i) w[i] = std::pow(1.1, i + 1);
  } else {
    throw std::invalid_argument("unknown weight family '" + name + "'");
  }
  return w;
}

struct ModelSpec {
  enum class Kind { plackett_luce, noisy_plackett_luce };
  Kind kind = Kind::plackett_luce;
  std::vector<double> weights;  // resolved from weight_name if empty
  std::string weight_name = "w1";
  double sigma = 0.0;
};

struct ExperimentConfig {
  int n = 0, m = 0, k = 0, r = 0;
  std::vector<double> p_grid;
  ModelSpec model;
  std::string beta_name = "bar1";
  std::vector<Estimator> estimators = {Estimator::borda, Estimator::normalized_borda,
                                       Estimator::spectral};
  int trials_per_point = 50;
  int runs = 20;
  std::uint64_t seed = 1;
};

namespace detail {

inline std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  for (const std::string& part : split(csv, ',')) out.push_back(parse_double(trim(part)));
  return out;
}

}  // namespace detail

// key = value format, '#' starts a comment, blank lines ignored. Keys:
//   n, m, k, r            integers (required)
//   p_grid                comma list of probabilities in (0,1] (required)
//   model                 pl | noisy_pl (default pl)
//   weights               w1 | w2 | comma list of positive reals (default w1)
//   sigma                 noise level for noisy_pl (default 0)
//   beta                  score family name (default bar1)
//   estimators            comma list (default all three)
//   trials_per_point      trials per run (default 50)
//   runs                  independent runs per grid point (default 20)
//   seed                  root seed (default 1)
inline ExperimentConfig parse_experiment_config(std::istream& is) {
  ExperimentConfig cfg;
  bool have_n = false, have_m = false, have_k = false, have_r = false, have_grid = false;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("config line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(is, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (value.empty()) fail("empty value for '" + key + "'");
    try {
      if (key == "n") { cfg.n = detail::parse_int(value); have_n = true; }
      else if (key == "m") { cfg.m = detail::parse_int(value); have_m = true; }
      else if (key == "k") { cfg.k = detail::parse_int(value); have_k = true; }
      else if (key == "r") { cfg.r = detail::parse_int(value); have_r = true; }
      else if (key == "p_grid") { cfg.p_grid = detail::parse_double_list(value); have_grid = true; }
      else if (key == "model") {
        if (value == "pl") cfg.model.kind = ModelSpec::Kind::plackett_luce;
        else if (value == "noisy_pl") cfg.model.kind = ModelSpec::Kind::noisy_plackett_luce;
        else throw std::invalid_argument("model must be pl or noisy_pl");
      } else if (key == "weights") {
        if (value == "w1" || value == "w2") { cfg.model.weight_name = value; cfg.model.weights.clear(); }
        else { cfg.model.weights = detail::parse_double_list(value); cfg.model.weight_name.clear(); }
      } else if (key == "sigma") { cfg.model.sigma = detail::parse_double(value); }
      else if (key == "beta") { cfg.beta_name = value; }
      else if (key == "estimators") { cfg.estimators = parse_estimators(value); }
      else if (key == "trials_per_point") { cfg.trials_per_point = detail::parse_int(value); }
      else if (key == "runs") { cfg.runs = detail::parse_int(value); }
      else if (key == "seed") { cfg.seed = static_cast<std::uint64_t>(std::stoull(value)); }
      else throw std::invalid_argument("unknown key '" + key + "'");
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  if (!have_n) throw std::runtime_error("config: missing required key 'n'");
  if (!have_m) throw std::runtime_error("config: missing required key 'm'");
  if (!have_k) throw std::runtime_error("config: missing required key 'k'");
  if (!have_r) throw std::runtime_error("config: missing required key 'r'");
  if (!have_grid) throw std::runtime_error("config: missing required key 'p_grid'");
  if (cfg.n < 2) throw std::runtime_error("config: need n >= 2");
  if (cfg.m < 2 || cfg.m > cfg.n) throw std::runtime_error("config: need 2 <= m <= n");
  if (cfg.k < 1 || cfg.k >= cfg.n) throw std::runtime_error("config: need 1 <= k < n");
  if (cfg.r < 1) throw std::runtime_error("config: need r >= 1");
  for (double p : cfg.p_grid)
    if (!(p > 0.0 && p <= 1.0)) throw std::runtime_error("config: p_grid values must lie in (0,1]");
  if (cfg.trials_per_point < 1) throw std::runtime_error("config: need trials_per_point >= 1");
  if (cfg.runs < 1) throw std::runtime_error("config: need runs >= 1");
  if (!(cfg.model.sigma >= 0.0)) throw std::runtime_error("config: need sigma >= 0");
  if (!cfg.model.weights.empty() && static_cast<int>(cfg.model.weights.size()) != cfg.n)
    throw std::runtime_error("config: weights list must have n entries");
  return cfg;
}

// Seed-stream tag separating the noisy model's perturbation draws from the
// trial streams of the same sweep.
inline constexpr std::uint64_t kNoiseSeedTag = 0x6e6f697365ull;

inline PartialRankingModel build_model(const ExperimentConfig& cfg) {
  std::vector<double> w = cfg.model.weights.empty()
                              ? named_weights(cfg.model.weight_name, cfg.n)
                              : cfg.model.weights;
  if (cfg.model.kind == ModelSpec::Kind::plackett_luce)
    return PartialRankingModel::plackett_luce(cfg.n, cfg.m, std::move(w));
  return PartialRankingModel::noisy_plackett_luce(cfg.m, std::move(w), cfg.model.sigma,
                                                  mix_seed(cfg.seed, kNoiseSeedTag));
}

inline TopKSelection ground_truth_topk(const PartialRankingModel& model,
                                       const ScoreVector& beta, int k) {
  return top_k(associated_scores(model, beta).tau, k);
}

// Applies one estimator to one observation batch.
inline TopKSelection estimate_topk(const ObservationBatch& batch, const ScoreVector& beta,
                                   int k, Estimator est) {
  switch (est) {
    case Estimator::borda: return top_k(borda_tally(batch, beta).scores, k);
    case Estimator::normalized_borda:
      return top_k(normalized_borda_tally(batch, beta).scores, k);
    case Estimator::spectral: return top_k(rank_centrality_scores(batch), k);
  }
  throw std::logic_error("unreachable");
}

struct SweepRow {
  double p = 0.0;
  Estimator estimator = Estimator::borda;
  int run = 0;
  double error_rate = 0.0;
};

struct SweepAggregate {
  double p = 0.0;
  Estimator estimator = Estimator::borda;
  double mean_error = 0.0;
  double std_error = 0.0;
  bool has_relative = false;
  double relative_error = 0.0;
};

struct SweepResult {
  ItemSet ground_truth;       // 0-based, ascending
  bool truth_tie_broken = false;
  std::vector<SweepRow> raw;
  std::vector<SweepAggregate> aggregates;
  long spectral_failures = 0;  // trials where the comparison graph was unusable
};

// Full sweep over p_grid x estimators x runs x trials. Every trial reseeds
// from the chain root -> p index -> estimator id -> run -> trial, so any cell
// can be reproduced in isolation and adding grid points or estimators leaves
// other cells' draws untouched.
inline SweepResult run_sweep(const ExperimentConfig& cfg) {
  const PartialRankingModel model = build_model(cfg);
  const ScoreVector beta = score_family(cfg.beta_name, cfg.m);
  SweepResult out;
  const TopKSelection truth = ground_truth_topk(model, beta, cfg.k);
  out.ground_truth = truth.items;
  out.truth_tie_broken = truth.tie_broken;
  for (std::size_t ip = 0; ip < cfg.p_grid.size(); ++ip) {
    const double p = cfg.p_grid[ip];
    const std::uint64_t p_seed = mix_seed(cfg.seed, ip);
    for (Estimator est : cfg.estimators) {
      const std::uint64_t est_seed = mix_seed(p_seed, static_cast<std::uint64_t>(est));
      for (int run = 0; run < cfg.runs; ++run) {
        const std::uint64_t run_seed = mix_seed(est_seed, static_cast<std::uint64_t>(run));
        int errors = 0;
        for (int trial = 0; trial < cfg.trials_per_point; ++trial) {
          const std::uint64_t trial_seed = mix_seed(run_seed, static_cast<std::uint64_t>(trial));
          const ObservationBatch batch = sample_observations(model, p, cfg.r, trial_seed);
          bool wrong = true;
          try {
            wrong = estimate_topk(batch, beta, cfg.k, est).items != out.ground_truth;
          } catch (const std::runtime_error&) {
            if (est != Estimator::spectral) throw;
            ++out.spectral_failures;
          }
          errors += wrong ? 1 : 0;
        }
        out.raw.push_back({p, est, run,
                           static_cast<double>(errors) / cfg.trials_per_point});
      }
    }
  }
  // Aggregate over runs; the robustness comparison (relative to the spectral
  // baseline) only applies to the perturbed model.
  const bool want_relative =
      cfg.model.kind == ModelSpec::Kind::noisy_plackett_luce &&
      std::find(cfg.estimators.begin(), cfg.estimators.end(), Estimator::spectral) !=
          cfg.estimators.end();
  for (std::size_t ip = 0; ip < cfg.p_grid.size(); ++ip) {
    const double p = cfg.p_grid[ip];
    double spectral_mean = 0.0;
    if (want_relative) {
      for (const SweepRow& row : out.raw)
        if (row.p == p && row.estimator == Estimator::spectral)
          spectral_mean += row.error_rate;
      spectral_mean /= cfg.runs;
    }
    for (Estimator est : cfg.estimators) {
      SweepAggregate agg;
      agg.p = p;
      agg.estimator = est;
      double sum = 0.0, sum_sq = 0.0;
      for (const SweepRow& row : out.raw) {
        if (row.p != p || row.estimator != est) continue;
        sum += row.error_rate;
        sum_sq += row.error_rate * row.error_rate;
      }
      agg.mean_error = sum / cfg.runs;
      if (cfg.runs > 1) {
        const double var =
            std::max(0.0, (sum_sq - sum * sum / cfg.runs) / (cfg.runs - 1));
        agg.std_error = std::sqrt(var / cfg.runs);
      }
      if (want_relative && spectral_mean > 0.0) {
        agg.has_relative = true;
        agg.relative_error = agg.mean_error / spectral_mean;
      }
      out.aggregates.push_back(agg);
    }
  }
  return out;
}

inline void write_sweep_raw_csv(const SweepResult& result, std::ostream& os) {
  os << "p,estimator,run,error_rate\n";
  for (const SweepRow& row : result.raw)
    os << detail::fmt_g12(row.p) << ',' << estimator_name(row.estimator) << ',' << row.run
       << ',' << detail::fmt_g12(row.error_rate) << '\n';
}

inline void write_sweep_agg_csv(const SweepResult& result, std::ostream& os) {
  os << "p,estimator,mean_error,std_error,relative_error\n";
  for (const SweepAggregate& a : result.aggregates) {
    os << detail::fmt_g12(a.p) << ',' << estimator_name(a.estimator) << ','
       << detail::fmt_g12(a.mean_error) << ',' << detail::fmt_g12(a.std_error) << ',';
    if (a.has_relative) os << detail::fmt_g12(a.relative_error);
    os << '\n';
  }
}

struct Theorem1Check {
  double empirical = 0.0;    // observed failure frequency
  TheoremBound bound;        // closed-form guarantee at the given alpha
  bool in_family = false;    // gap clears the alpha threshold
  double delta_k = 0.0;
  double slack = 0.0;        // 3 sigma Monte Carlo allowance
  bool pass = false;         // empirical <= clamped bound + slack
  bool trivial = false;      // raw bound >= 1 makes the comparison vacuous
};

// Monte Carlo verification that the Borda selector's failure frequency stays
// under the closed-form bound (up to 3 sigma of trial noise at that bound).
inline Theorem1Check theorem1_empirical_check(const PartialRankingModel& model,
                                              const ScoreVector& beta, int k, int r,
                                              double p, double alpha, int trials,
                                              std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("need trials >= 1");
  Theorem1Check out;
  const AssociatedScores scores = associated_scores(model, beta);
  out.delta_k = delta_gap(scores, k);
  out.in_family = f_k_membership(scores, k, 0, alpha, r, p);
  out.bound = theorem1_upper(model.n(), model.m(), k, p, alpha, beta.last());
  out.trivial = out.bound.raw >= 1.0;
  const ItemSet truth = top_k(scores.tau, k).items;
  int failures = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = mix_seed(seed, static_cast<std::uint64_t>(trial));
    const ObservationBatch batch = sample_observations(model, p, r, trial_seed);
    if (top_k(borda_tally(batch, beta).scores, k).items != truth) ++failures;
  }
  out.empirical = static_cast<double>(failures) / trials;
  out.slack = 3.0 * std::sqrt(out.bound.clamped * (1.0 - out.bound.clamped) / trials);
  out.pass = out.empirical <= out.bound.clamped + out.slack;
  return out;
}

}  // namespace borda
