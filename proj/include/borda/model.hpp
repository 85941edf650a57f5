#pragma once

// Probabilistic m-wise partial-ranking models over n items. A model assigns,
// to every m-subset A of {0,...,n-1}, a probability distribution over the m!
// complete orders of A. Kinds:
//
//   explicit_table         probabilities listed per (subset, permutation)
//   plackett_luce          sequential-choice model from positive weights
//   noisy_plackett_luce    Plackett-Luce perturbed by clamped Gaussian noise
//   adversarial            two-block construction with a tunable gap delta
//
// The associated score tau_a of item a is its expected Borda contribution per
// observed subset, normalized by rho = C(n-1, m-1); top-k selection
// consistency is always stated against these scores.

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "borda/combinatorics.hpp"
#include "borda/rng.hpp"
#include "borda/score_vector.hpp"
#include "borda/textio.hpp"

namespace borda {

enum class ModelKind { explicit_table, plackett_luce, noisy_plackett_luce, adversarial };

inline const char* model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::explicit_table: return "explicit";
    case ModelKind::plackett_luce: return "pl";
    case ModelKind::noisy_plackett_luce: return "noisy_pl";
    case ModelKind::adversarial: return "adversarial";
  }
  return "?";
}

// Probability of observing the order v under Plackett-Luce weights w:
// product over positions of w[v_t] / (sum of w over items not yet placed).
inline double pl_probability(const Ranking& v, const std::vector<double>& weights) {
  validate_ranking(static_cast<int>(weights.size()), v);
  double rest = 0.0;
  for (int x : v) rest += weights[x];
  double prob = 1.0;
  for (int x : v) {
    prob *= weights[x] / rest;
    rest -= weights[x];
  }
  return prob;
}

namespace detail {

// Renormalizes a non-negative row in place; all-zero rows become uniform.
inline void normalize_row_or_uniform(std::vector<double>& row) {
  double total = 0.0;
  for (double& x : row) {
    if (x < 0.0) x = 0.0;
    total += x;
  }
  if (total <= 0.0) {
    const double u = 1.0 / static_cast<double>(row.size());
    for (double& x : row) x = u;
  } else {
    for (double& x : row) x /= total;
  }
}

}  // namespace detail

class PartialRankingModel {
 public:
  static PartialRankingModel from_table(int n, int m, std::vector<double> table) {
    PartialRankingModel mod(n, m, ModelKind::explicit_table);
    if (table.size() != mod.subset_count() * mod.perm_count())
      throw std::invalid_argument("model table has wrong size");
    mod.table_ = std::move(table);
    mod.validate_table();
    return mod;
  }

  static PartialRankingModel plackett_luce(int n, int m, std::vector<double> weights) {
    PartialRankingModel mod(n, m, ModelKind::plackett_luce, /*needs_table=*/false);
    if (static_cast<int>(weights.size()) != n)
      throw std::invalid_argument("need one weight per item");
    for (double w : weights)
      if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
    mod.weights_ = std::move(weights);
    return mod;
  }

  // Plackett-Luce probabilities plus one Gaussian N(0, sigma^2) per
  // (subset, permutation) cell, drawn from a single stream in enumeration
  // order, clamped at zero and renormalized per subset (uniform fallback if a
  // whole row clamps to zero).
  static PartialRankingModel noisy_plackett_luce(int m, std::vector<double> weights,
                                                 double sigma, std::uint64_t noise_seed) {
    const int n = static_cast<int>(weights.size());
    if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
    PartialRankingModel mod(n, m, ModelKind::noisy_plackett_luce);
    for (double w : weights)
      if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
    mod.weights_ = weights;
    mod.sigma_ = sigma;
    Rng noise(noise_seed);
    const std::size_t mf = mod.perm_count();
    std::vector<double> row(mf);
    std::size_t base = 0;
    for_each_subset(n, m, [&](const ItemSet& subset) {
      std::size_t j = 0;
      for_each_permutation(subset, [&](const Ranking& v) {
        row[j++] = pl_probability(v, weights) + sigma * noise.next_gaussian();
      });
      detail::normalize_row_or_uniform(row);
      for (std::size_t t = 0; t < mf; ++t) mod.table_[base + t] = row[t];
      base += mf;
    });
    mod.validate_table();
    return mod;
  }

  // Two-block construction: with S* = {0,...,k-2} U {top_item} and
  // q = max(1, m-n+k), orders that place the S*-members of a subset in the
  // first q positions get probability (1+delta)/m!, mirrored orders that
  // banish them to the last q positions get (1-delta)/m!, everything else is
  // uniform. top_item is 0-based and must lie in [k-1, n-1].
  static PartialRankingModel adversarial(int n, int m, int k, double delta, int top_item) {
    if (k < 1 || k >= n) throw std::invalid_argument("need 1 <= k < n");
    if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("need 0 <= delta < 1");
    if (top_item < k - 1 || top_item >= n)
      throw std::invalid_argument("top_item must lie in [k-1, n-1]");
    PartialRankingModel mod(n, m, ModelKind::adversarial);
    std::vector<char> in_star(n, 0);
    for (int i = 0; i < k - 1; ++i) in_star[i] = 1;
    in_star[top_item] = 1;
    const int q = std::max(1, m - n + k);
    const double base = 1.0 / static_cast<double>(mod.perm_count());
    std::size_t cell = 0;
    for_each_subset(n, m, [&](const ItemSet& subset) {
      for_each_permutation(subset, [&](const Ranking& v) {
        bool c1 = true, c2 = true;
        for (int t = 0; t < m; ++t) {
          const bool star = in_star[v[t]];
          if ((t < q) != star) c1 = false;
          if ((t >= m - q) != star) c2 = false;
        }
        mod.table_[cell++] = c1 ? base * (1.0 + delta) : (c2 ? base * (1.0 - delta) : base);
      });
    });
    mod.validate_table();
    return mod;
  }

  int n() const { return n_; }
  int m() const { return m_; }
  ModelKind kind() const { return kind_; }
  bool has_table() const { return !table_.empty(); }
  const std::vector<double>& weights() const { return weights_; }
  double sigma() const { return sigma_; }
  std::uint64_t subset_count() const { return binomial(n_, m_); }
  std::uint64_t perm_count() const { return factorial(m_); }

  // Probability of observing v (a complete order of its own item set).
  double probability(const Ranking& v) const {
    if (static_cast<int>(v.size()) != m_)
      throw std::invalid_argument("ranking length must equal m");
    validate_ranking(n_, v);
    if (!has_table()) return pl_probability(v, weights_);
    ItemSet subset = v;
    std::sort(subset.begin(), subset.end());
    return table_[subset_lex_rank(n_, subset) * perm_count() + permutation_lex_rank(v)];
  }

  // Probabilities of the given subset's orders, lexicographic permutation
  // order, written into `out`.
  void row(std::uint64_t subset_rank, const ItemSet& subset, std::vector<double>& out) const {
    out.resize(perm_count());
    if (has_table()) {
      const std::size_t base = subset_rank * perm_count();
      std::copy(table_.begin() + base, table_.begin() + base + perm_count(), out.begin());
    } else {
      std::size_t j = 0;
      for_each_permutation(subset, [&](const Ranking& v) { out[j++] = pl_probability(v, weights_); });
    }
  }

  // Line-oriented text format: "n m" header, then one line per
  // (subset, permutation, probability), items 1-based.
  void write(std::ostream& os) const {
    os << n_ << ' ' << m_ << '\n';
    std::vector<double> probs;
    std::uint64_t rank = 0;
    for_each_subset(n_, m_, [&](const ItemSet& subset) {
      row(rank++, subset, probs);
      std::size_t j = 0;
      for_each_permutation(subset, [&](const Ranking& v) {
        for (std::size_t i = 0; i < subset.size(); ++i)
          os << (i ? "," : "") << subset[i] + 1;
        os << " : ";
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i] + 1;
        os << ' ' << detail::fmt_g17(probs[j++]) << '\n';
      });
    });
  }

  static PartialRankingModel read(std::istream& is) {
    std::string line;
    int lineno = 0;
    if (!std::getline(is, line)) throw std::runtime_error("model file: missing header");
    ++lineno;
    auto head = detail::split(detail::trim(line), ' ');
    if (head.size() != 2) throw std::runtime_error("model file: header must be 'n m'");
    const int n = static_cast<int>(detail::parse_int(head[0], "n"));
    const int m = static_cast<int>(detail::parse_int(head[1], "m"));
    PartialRankingModel probe(n, m, ModelKind::explicit_table);
    std::vector<double> table(probe.subset_count() * probe.perm_count(),
                              std::numeric_limits<double>::quiet_NaN());
    while (std::getline(is, line)) {
      ++lineno;
      const std::string t = detail::trim(line);
      if (t.empty() || t[0] == '#') continue;
      std::string err = "model file line " + std::to_string(lineno);
      auto colon = t.find(':');
      if (colon == std::string::npos) throw std::runtime_error(err + ": missing ':'");
      ItemSet subset = parse_items(t.substr(0, colon), n, err);
      auto rest = detail::trim(t.substr(colon + 1));
      auto space = rest.find_last_of(" \t");
      if (space == std::string::npos) throw std::runtime_error(err + ": missing probability");
      Ranking v = parse_items(rest.substr(0, space), n, err);
      const double prob = detail::parse_double(rest.substr(space + 1), err + " probability");
      validate_item_set(n, subset);
      ItemSet sorted_v = v;
      std::sort(sorted_v.begin(), sorted_v.end());
      if (sorted_v != subset)
        throw std::runtime_error(err + ": permutation does not match subset");
      table[subset_lex_rank(n, subset) * probe.perm_count() + permutation_lex_rank(v)] = prob;
    }
    for (double x : table)
      if (std::isnan(x)) throw std::runtime_error("model file: incomplete table");
    return from_table(n, m, std::move(table));
  }

 private:
  PartialRankingModel(int n, int m, ModelKind kind, bool needs_table = true)
      : n_(n), m_(m), kind_(kind) {
    if (n < 2) throw std::invalid_argument("need n >= 2");
    if (m < 2 || m > n) throw std::invalid_argument("need 2 <= m <= n");
    if (needs_table) {
      if (n > 20) throw std::invalid_argument("explicit tables limited to n <= 20");
      const std::uint64_t cells = detail::checked_mul(binomial(n, m), factorial(m));
      if (cells > (1ull << 26))
        throw std::invalid_argument("model table too large to materialize");
      table_.assign(cells, 0.0);
    }
  }

  static std::vector<int> parse_items(const std::string& s, int n, const std::string& err) {
    std::vector<int> out;
    for (const auto& tok : detail::split(detail::trim(s), ',')) {
      long long v = detail::parse_int(tok, err + " item");
      if (v < 1 || v > n) throw std::runtime_error(err + ": item out of range");
      out.push_back(static_cast<int>(v - 1));
    }
    return out;
  }

  void validate_table() const {
    const std::size_t mf = perm_count();
    for (std::size_t base = 0; base < table_.size(); base += mf) {
      double total = 0.0;
      for (std::size_t j = 0; j < mf; ++j) {
        if (table_[base + j] < 0.0)
          throw std::invalid_argument("model probabilities must be non-negative");
        total += table_[base + j];
      }
      if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("subset row does not sum to 1 (off by " +
                                    std::to_string(total - 1.0) + ")");
    }
  }

  int n_, m_;
  ModelKind kind_;
  std::vector<double> table_;     // subset rank * m! + permutation rank
  std::vector<double> weights_;   // PL kinds
  double sigma_ = 0.0;
};

// Exact associated scores tau and rho = C(n-1, m-1).
struct AssociatedScores {
  std::vector<double> tau;
  double rho = 0.0;
};

// tau_a = (1/rho) * sum over subsets containing a of the expected score of a,
// computed by full enumeration (n <= 20).
inline AssociatedScores associated_scores(const PartialRankingModel& model,
                                          const ScoreVector& beta) {
  if (beta.size() != model.m())
    throw std::invalid_argument("score vector length must equal m");
  if (model.n() > 20)
    throw std::invalid_argument("associated scores need n <= 20 for enumeration");
  AssociatedScores out;
  out.tau.assign(model.n(), 0.0);
  out.rho = static_cast<double>(binomial(model.n() - 1, model.m() - 1));
  std::vector<double> probs;
  std::uint64_t rank = 0;
  for_each_subset(model.n(), model.m(), [&](const ItemSet& subset) {
    model.row(rank++, subset, probs);
    std::size_t j = 0;
    for_each_permutation(subset, [&](const Ranking& v) {
      const double pr = probs[j++];
      for (int t = 0; t < model.m(); ++t) out.tau[v[t]] += beta[t] * pr;
    });
  });
  for (double& x : out.tau) x /= out.rho;
  return out;
}

// Order-statistic gap Delta_{k,h} = tau_(k-h) - tau_(k+h) (1-based order
// statistics, descending) for h >= 1; h = 0 is the plain top-k gap
// Delta_k = tau_(k) - tau_(k+1).
inline double delta_gap(const std::vector<double>& tau, int k, int h = 0) {
  const int n = static_cast<int>(tau.size());
  if (k < 1 || k >= n) throw std::invalid_argument("need 1 <= k < n");
  if (h < 0 || k - h < 1 || k + h > n)
    throw std::invalid_argument("need h >= 0, k-h >= 1, k+h <= n");
  std::vector<double> sorted = tau;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const int lower = h == 0 ? k + 1 : k + h;
  return sorted[k - h - 1] - sorted[lower - 1];
}

inline double delta_gap(const AssociatedScores& scores, int k, int h = 0) {
  return delta_gap(scores.tau, k, h);
}

// Seeded random explicit model: every table cell drawn uniformly from (0,1),
// rows normalized. Handy for stress tests and the variance checker.
inline PartialRankingModel random_explicit_model(int n, int m, std::uint64_t seed) {
  Rng rng(seed);
  const std::uint64_t subsets = binomial(n, m);
  const std::uint64_t perms = factorial(m);
  std::vector<double> table(detail::checked_mul(subsets, perms));
  for (double& cell : table) cell = rng.next_unit() + 1e-12;
  for (std::uint64_t s = 0; s < subsets; ++s) {
    double sum = 0.0;
    for (std::uint64_t j = 0; j < perms; ++j) sum += table[s * perms + j];
    for (std::uint64_t j = 0; j < perms; ++j) table[s * perms + j] /= sum;
  }
  return PartialRankingModel::from_table(n, m, std::move(table));
}

}  // namespace borda
