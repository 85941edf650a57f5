#pragma once

// PrefLib strict-order-complete (.soc) ingestion: parse full-ranking vote
// files, derive a full-ranking Borda ground truth, extract random m-wise
// induced observations, and run the top-k recovery comparison against
// growing batch sizes.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "borda/aggregation.hpp"
#include "borda/experiments.hpp"
#include "borda/observation.hpp"
#include "borda/rng.hpp"
#include "borda/score_vector.hpp"
#include "borda/textio.hpp"

namespace borda {

struct PreflibDataset {
  int n = 0;
  std::vector<std::string> names;     // one per alternative
  std::vector<long long> counts;      // multiplicity of each distinct ranking
  std::vector<Ranking> rankings;      // 0-based, best to worst, complete

  long long total() const { return std::accumulate(counts.begin(), counts.end(), 0LL); }
};

// Accepted grammar, line by line:
//   # NUMBER ALTERNATIVES: <n>     declares the item count
//   # ALTERNATIVE NAME <i>: <label>
//   # anything else                ignored metadata
//   <n>                            bare integer, legacy item-count header
//   <count>: <i1>,<i2>,...,<in>    complete 1-indexed strict ranking
// The item count may also be inferred from the first ranking line. Every
// ranking must be a permutation of 1..n; counts must be positive.
inline PreflibDataset parse_preflib_soc(std::istream& is) {
  PreflibDataset ds;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("soc line " + std::to_string(line_no) + ": " + what);
  };
  auto set_n = [&](int n) {
    if (n < 1) fail("alternative count must be positive");
    if (ds.n != 0 && ds.n != n) fail("conflicting alternative counts");
    if (static_cast<int>(ds.names.size()) > n) fail("alternative name index exceeds count");
    ds.n = n;
    ds.names.resize(n);
  };
  while (std::getline(is, line)) {
    ++line_no;
    std::string text = detail::trim(line);
    if (text.empty()) continue;
    if (text[0] == '#') {
      const std::size_t colon = text.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = detail::trim(text.substr(1, colon - 1));
      const std::string value = detail::trim(text.substr(colon + 1));
      if (key == "NUMBER ALTERNATIVES") {
        int n = 0;
        try { n = detail::parse_int(value); }
        catch (const std::exception&) { fail("bad alternative count"); }
        set_n(n);
      } else if (key.rfind("ALTERNATIVE NAME ", 0) == 0) {
        int idx = 0;
        try { idx = detail::parse_int(key.substr(17)); }
        catch (const std::exception&) { fail("bad alternative index"); }
        if (idx < 1 || (ds.n != 0 && idx > ds.n)) fail("alternative index out of range");
        if (static_cast<int>(ds.names.size()) < idx) ds.names.resize(idx);
        ds.names[idx - 1] = value;
      }
      continue;
    }
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos) {
      int n = 0;
      try { n = detail::parse_int(text); }
      catch (const std::exception&) { fail("expected '<count>: <ranking>'"); }
      set_n(n);
      continue;
    }
    long long count = 0;
    try { count = detail::parse_int(detail::trim(text.substr(0, colon))); }
    catch (const std::exception&) { fail("bad vote count"); }
    if (count < 1) fail("vote count must be positive");
    const std::vector<std::string> parts = detail::split(text.substr(colon + 1), ',');
    if (ds.n == 0) set_n(static_cast<int>(parts.size()));
    if (static_cast<int>(parts.size()) != ds.n)
      fail("ranking has " + std::to_string(parts.size()) + " entries, expected " +
           std::to_string(ds.n));
    Ranking rank(ds.n);
    std::vector<bool> seen(ds.n, false);
    for (int t = 0; t < ds.n; ++t) {
      int item = 0;
      try { item = detail::parse_int(detail::trim(parts[t])); }
      catch (const std::exception&) { fail("bad ranking entry"); }
      if (item < 1 || item > ds.n) fail("ranking entry out of range");
      if (seen[item - 1]) fail("ranking repeats item " + std::to_string(item));
      seen[item - 1] = true;
      rank[t] = item - 1;
    }
    ds.counts.push_back(count);
    ds.rankings.push_back(std::move(rank));
  }
  if (ds.n == 0) throw std::runtime_error("soc: no alternative count and no rankings");
  if (ds.rankings.empty()) throw std::runtime_error("soc: no rankings");
  for (int i = 0; i < ds.n; ++i)
    if (ds.names[i].empty()) ds.names[i] = std::to_string(i + 1);
  return ds;
}

struct FullRankingTruth {
  Ranking order;               // items best to worst, ties by lowest index
  std::vector<double> scores;  // Borda score per item
  bool tie_broken = false;
};

// Positional scoring over the complete rankings; beta must have one entry
// per alternative.
inline FullRankingTruth preflib_ground_truth(const PreflibDataset& ds,
                                             const ScoreVector& beta) {
  if (beta.size() != ds.n)
    throw std::invalid_argument("score vector length must equal the alternative count");
  FullRankingTruth out;
  out.scores.assign(ds.n, 0.0);
  for (std::size_t i = 0; i < ds.rankings.size(); ++i)
    for (int t = 0; t < ds.n; ++t)
      out.scores[ds.rankings[i][t]] += static_cast<double>(ds.counts[i]) * beta[t];
  out.order.resize(ds.n);
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(), [&](int a, int b) {
    if (out.scores[a] != out.scores[b]) return out.scores[a] > out.scores[b];
    return a < b;
  });
  for (int i = 0; i + 1 < ds.n; ++i)
    if (out.scores[out.order[i]] == out.scores[out.order[i + 1]]) out.tie_broken = true;
  return out;
}

// Draws batch_size voters without replacement (uniform over the expanded
// multiset of votes), gives each its own round, picks a uniform m-subset per
// voter, and records the voter's induced order on that subset. The batch
// carries the synthetic-p marker since no thinning was applied.
inline ObservationBatch extract_mwise(const PreflibDataset& ds, int m, int batch_size,
                                      std::uint64_t seed) {
  if (m < 2 || m > ds.n) throw std::invalid_argument("need 2 <= m <= n");
  const long long total = ds.total();
  if (batch_size < 1 || batch_size > total)
    throw std::invalid_argument("batch size must lie in [1, total votes]");
  Rng rng(seed);

  // Partial Fisher-Yates over the expanded vote indices.
  std::vector<long long> pool(total);
  std::iota(pool.begin(), pool.end(), 0LL);
  std::vector<long long> chosen(batch_size);
  for (int i = 0; i < batch_size; ++i) {
    const std::uint64_t j = i + rng.next_below(static_cast<std::uint64_t>(total - i));
    std::swap(pool[i], pool[j]);
    chosen[i] = pool[i];
  }

  std::vector<long long> prefix(ds.counts.size());
  std::partial_sum(ds.counts.begin(), ds.counts.end(), prefix.begin());

  ObservationBatch batch;
  batch.n = ds.n;
  batch.m = m;
  batch.r = batch_size;
  batch.p = ObservationBatch::kSyntheticP;
  std::vector<int> items(ds.n);
  Ranking induced(m);
  for (int round = 0; round < batch_size; ++round) {
    const auto it = std::upper_bound(prefix.begin(), prefix.end(), chosen[round]);
    const Ranking& vote = ds.rankings[it - prefix.begin()];
    std::iota(items.begin(), items.end(), 0);
    for (int i = 0; i < m; ++i) {
      const std::uint64_t j = i + rng.next_below(static_cast<std::uint64_t>(ds.n - i));
      std::swap(items[i], items[j]);
    }
    std::vector<bool> in_subset(ds.n, false);
    for (int i = 0; i < m; ++i) in_subset[items[i]] = true;
    int pos = 0;
    for (int t = 0; t < ds.n && pos < m; ++t)
      if (in_subset[vote[t]]) induced[pos++] = vote[t];
    batch.append(round, induced);
  }
  return batch;
}

struct RealDataConfig {
  int m = 0, k = 0;
  std::vector<int> batch_sizes;
  std::vector<Estimator> estimators = {Estimator::borda, Estimator::normalized_borda,
                                       Estimator::spectral};
  std::string beta_name = "bar1";  // m-wise scores used by the estimators
  int trials_per_point = 10;
  int runs = 10;
  std::uint64_t seed = 1;
};

struct RealDataRow {
  int batch_size = 0;
  Estimator estimator = Estimator::borda;
  int run = 0;
  double error_rate = 0.0;
};

struct RealDataAggregate {
  int batch_size = 0;
  Estimator estimator = Estimator::borda;
  double mean_error = 0.0;
  double std_error = 0.0;
  bool has_relative = false;
  double relative_error = 0.0;
};

struct RealDataResult {
  ItemSet ground_truth;  // 0-based top-k from the full rankings
  bool truth_tie_broken = false;
  std::vector<RealDataRow> raw;
  std::vector<RealDataAggregate> aggregates;
  long spectral_failures = 0;
};

// Batch-size sweep against a PrefLib dataset. Ground truth is the top-k of
// the full-ranking Borda order under uniform-spacing scores; every trial
// reseeds from the chain root -> batch index -> estimator -> run -> trial.
inline RealDataResult real_data_experiment(const PreflibDataset& ds,
                                           const RealDataConfig& cfg) {
  if (cfg.k < 1 || cfg.k >= ds.n) throw std::invalid_argument("need 1 <= k < n");
  if (cfg.batch_sizes.empty()) throw std::invalid_argument("need at least one batch size");
  if (cfg.trials_per_point < 1 || cfg.runs < 1)
    throw std::invalid_argument("need trials_per_point >= 1 and runs >= 1");
  const ScoreVector beta = score_family(cfg.beta_name, cfg.m);
  const FullRankingTruth truth = preflib_ground_truth(ds, score_family("bar1", ds.n));
  RealDataResult out;
  out.truth_tie_broken = truth.tie_broken;
  out.ground_truth.assign(truth.order.begin(), truth.order.begin() + cfg.k);
  std::sort(out.ground_truth.begin(), out.ground_truth.end());
  for (std::size_t ib = 0; ib < cfg.batch_sizes.size(); ++ib) {
    const int batch_size = cfg.batch_sizes[ib];
    const std::uint64_t b_seed = mix_seed(cfg.seed, ib);
    for (Estimator est : cfg.estimators) {
      const std::uint64_t est_seed = mix_seed(b_seed, static_cast<std::uint64_t>(est));
      for (int run = 0; run < cfg.runs; ++run) {
        const std::uint64_t run_seed = mix_seed(est_seed, static_cast<std::uint64_t>(run));
        int errors = 0;
        for (int trial = 0; trial < cfg.trials_per_point; ++trial) {
          const std::uint64_t trial_seed = mix_seed(run_seed, static_cast<std::uint64_t>(trial));
          const ObservationBatch batch = extract_mwise(ds, cfg.m, batch_size, trial_seed);
          bool wrong = true;
          try {
            wrong = estimate_topk(batch, beta, cfg.k, est).items != out.ground_truth;
          } catch (const std::runtime_error&) {
            if (est != Estimator::spectral) throw;
            ++out.spectral_failures;
          }
          errors += wrong ? 1 : 0;
        }
        out.raw.push_back({batch_size, est, run,
                           static_cast<double>(errors) / cfg.trials_per_point});
      }
    }
  }
  const bool want_relative =
      std::find(cfg.estimators.begin(), cfg.estimators.end(), Estimator::spectral) !=
      cfg.estimators.end();
  for (int batch_size : cfg.batch_sizes) {
    double spectral_mean = 0.0;
    if (want_relative) {
      for (const RealDataRow& row : out.raw)
        if (row.batch_size == batch_size && row.estimator == Estimator::spectral)
          spectral_mean += row.error_rate;
      spectral_mean /= cfg.runs;
    }
    for (Estimator est : cfg.estimators) {
      RealDataAggregate agg;
      agg.batch_size = batch_size;
      agg.estimator = est;
      double sum = 0.0, sum_sq = 0.0;
      for (const RealDataRow& row : out.raw) {
        if (row.batch_size != batch_size || row.estimator != est) continue;
        sum += row.error_rate;
        sum_sq += row.error_rate * row.error_rate;
      }
      agg.mean_error = sum / cfg.runs;
      if (cfg.runs > 1) {
        const double var = std::max(0.0, (sum_sq - sum * sum / cfg.runs) / (cfg.runs - 1));
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

inline void write_real_data_raw_csv(const RealDataResult& result, std::ostream& os) {
  os << "batch_size,estimator,run,error_rate\n";
  for (const RealDataRow& row : result.raw)
    os << row.batch_size << ',' << estimator_name(row.estimator) << ',' << row.run << ','
       << detail::fmt_g12(row.error_rate) << '\n';
}

inline void write_real_data_agg_csv(const RealDataResult& result, std::ostream& os) {
  os << "batch_size,estimator,mean_error,std_error,relative_error\n";
  for (const RealDataAggregate& a : result.aggregates) {
    os << a.batch_size << ',' << estimator_name(a.estimator) << ','
       << detail::fmt_g12(a.mean_error) << ',' << detail::fmt_g12(a.std_error) << ',';
    if (a.has_relative) os << detail::fmt_g12(a.relative_error);
    os << '\n';
  }
}

}  // namespace borda
