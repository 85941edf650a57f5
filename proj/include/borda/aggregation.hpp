#pragma once

// Estimators: plain and normalized Borda tallies, top-k selection with a
// deterministic tie rule, pairwise rank breaking, and a rank-centrality
// spectral baseline.

#include <cstdint>
#include <deque>
#include <map>
#include <ostream>
#include <sstream>

#include "borda/observation.hpp"
#include "borda/score_vector.hpp"

namespace borda {

struct TallyResult {
  std::vector<double> scores;
  bool normalized = false;
};

// W_a = sum over records of beta[position of a]; items absent from a record
// contribute nothing.
inline TallyResult borda_tally(const ObservationBatch& batch, const ScoreVector& beta) {
  if (beta.size() != batch.m)
    throw std::invalid_argument("score vector length must equal batch m");
  TallyResult out;
  out.scores.assign(batch.n, 0.0);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    auto v = batch.ranking(i);
    for (int t = 0; t < batch.m; ++t) out.scores[v[t]] += beta[t];
  }
  return out;
}

// Per-subset sums are divided by (Z_A + 1), where Z_A is the number of
// records the batch holds for subset A.
inline TallyResult normalized_borda_tally(const ObservationBatch& batch,
                                          const ScoreVector& beta) {
  if (beta.size() != batch.m)
    throw std::invalid_argument("score vector length must equal batch m");
  std::map<ItemSet, double> z;
  for (std::size_t i = 0; i < batch.size(); ++i) z[batch.subset_of(i)] += 1.0;
  TallyResult out;
  out.normalized = true;
  out.scores.assign(batch.n, 0.0);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    auto v = batch.ranking(i);
    const double denom = z.find(batch.subset_of(i))->second + 1.0;
    for (int t = 0; t < batch.m; ++t) out.scores[v[t]] += beta[t] / denom;
  }
  return out;
}

struct TopKSelection {
  ItemSet items;          // sorted ascending
  bool tie_broken = false;  // true when the k-th and (k+1)-th scores tie
};

// k highest-scoring items; score ties resolve to the lowest index, and a tie
// across the selection boundary raises tie_broken.
inline TopKSelection top_k(const std::vector<double>& scores, int k) {
  const int n = static_cast<int>(scores.size());
  if (k < 1 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  TopKSelection out;
  out.items.assign(order.begin(), order.begin() + k);
  std::sort(out.items.begin(), out.items.end());
  out.tie_broken = k < n && scores[order[k - 1]] == scores[order[k]];
  return out;
}

inline TopKSelection top_k(const TallyResult& tally, int k) { return top_k(tally.scores, k); }

// |A symmetric-difference B| for sorted distinct item sets.
inline int hamming_distance(const ItemSet& a, const ItemSet& b) {
  std::size_t i = 0, j = 0;
  int diff = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) { ++i; ++j; }
    else if (a[i] < b[j]) { ++diff; ++i; }
    else { ++diff; ++j; }
  }
  return diff + static_cast<int>((a.size() - i) + (b.size() - j));
}

// Full rank breaking: every record contributes all C(m,2) ordered pairs.
// wins[a][b] counts comparisons a won against b.
inline std::vector<std::vector<std::int64_t>> rank_break_pairwise(const ObservationBatch& batch) {
  std::vector<std::vector<std::int64_t>> wins(batch.n, std::vector<std::int64_t>(batch.n, 0));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    auto v = batch.ranking(i);
    for (int s = 0; s < batch.m; ++s)
      for (int t = s + 1; t < batch.m; ++t) ++wins[v[s]][v[t]];
  }
  return wins;
}

// Stationary distribution of the empirical-win-fraction Markov chain: from
// state a, move to b with probability (fraction of (a,b) comparisons b won) /
// d_max, where d_max is the maximum comparison degree; leftover mass stays on
// a. Throws if the comparison graph is disconnected or if power iteration
// fails to converge.
inline std::vector<double> rank_centrality_scores(
    const std::vector<std::vector<std::int64_t>>& wins, double tol = 1e-10,
    int max_iter = 100000) {
  const int n = static_cast<int>(wins.size());
  if (n == 0) throw std::invalid_argument("empty win matrix");
  for (const auto& row : wins)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("win matrix must be square");
  if (n == 1) return {1.0};

  // connectivity over edges with any comparisons
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::deque<int> queue{s};
    comp[s] = ncomp;
    while (!queue.empty()) {
      int a = queue.front();
      queue.pop_front();
      for (int b = 0; b < n; ++b)
        if (comp[b] < 0 && wins[a][b] + wins[b][a] > 0) {
          comp[b] = ncomp;
          queue.push_back(b);
        }
    }
    ++ncomp;
  }
  if (ncomp > 1) {
    std::ostringstream msg;
    msg << "comparison graph disconnected:";
    for (int c = 0; c < ncomp; ++c) {
      msg << " {";
      bool first = true;
      for (int i = 0; i < n; ++i)
        if (comp[i] == c) { msg << (first ? "" : ",") << i + 1; first = false; }
      msg << '}';
    }
    throw std::runtime_error(msg.str());
  }

  int d_max = 0;
  for (int a = 0; a < n; ++a) {
    int d = 0;
    for (int b = 0; b < n; ++b)
      if (b != a && wins[a][b] + wins[b][a] > 0) ++d;
    d_max = std::max(d_max, d);
  }

  // row-stochastic transition matrix
  std::vector<double> trans(static_cast<std::size_t>(n) * n, 0.0);
  for (int a = 0; a < n; ++a) {
    double off = 0.0;
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;
      const std::int64_t total = wins[a][b] + wins[b][a];
      if (total == 0) continue;
      const double frac = static_cast<double>(wins[b][a]) / static_cast<double>(total);
      trans[a * n + b] = frac / d_max;
      off += frac / d_max;
    }
    trans[a * n + a] = 1.0 - off;
  }

  std::vector<double> pi(n, 1.0 / n), next(n);
  for (int it = 0; it < max_iter; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int a = 0; a < n; ++a) {
      const double w = pi[a];
      if (w == 0.0) continue;
      for (int b = 0; b < n; ++b) next[b] += w * trans[a * n + b];
    }
    double total = 0.0;
    for (double x : next) total += x;
    for (double& x : next) x /= total;
    double delta = 0.0;
    for (int i = 0; i < n; ++i) delta += std::abs(next[i] - pi[i]);
    pi.swap(next);
    if (delta <= tol) return pi;
  }
  throw std::runtime_error("rank centrality power iteration did not converge");
}

inline std::vector<double> rank_centrality_scores(const ObservationBatch& batch,
                                                  double tol = 1e-10,
                                                  int max_iter = 100000) {
  return rank_centrality_scores(rank_break_pairwise(batch), tol, max_iter);
}

// item,score CSV for a tally (items 1-based).
inline void write_tally_csv(const TallyResult& tally, std::ostream& os) {
  os << "item,score\n";
  for (std::size_t i = 0; i < tally.scores.size(); ++i)
    os << i + 1 << ',' << detail::fmt_g12(tally.scores[i]) << '\n';
}

}  // namespace borda
