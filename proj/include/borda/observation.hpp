#pragma once

// Observation batches: the outcome of r observation rounds over all m-subsets
// of n items. In round l, each subset is independently observed with
// probability p; an observed subset yields one complete order drawn from the
// model. Batches extracted from real data carry p = kSyntheticP.

#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <utility>

#include "borda/model.hpp"

namespace borda {

struct ObservationBatch {
  static constexpr double kSyntheticP = -1.0;

  int n = 0, m = 0, r = 0;
  double p = kSyntheticP;

  std::size_t size() const { return rounds_.size(); }
  bool synthetic() const { return p < 0.0; }

  std::span<const int> ranking(std::size_t i) const {
    return {flat_.data() + i * m, static_cast<std::size_t>(m)};
  }

  int round_of(std::size_t i) const { return rounds_[i]; }

  ItemSet subset_of(std::size_t i) const {
    auto v = ranking(i);
    ItemSet s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    return s;
  }

  void append(int round, std::span<const int> ranking) {
    if (static_cast<int>(ranking.size()) != m)
      throw std::invalid_argument("ranking length must equal m");
    if (round < 0 || round >= r) throw std::invalid_argument("round out of range");
    Ranking v(ranking.begin(), ranking.end());
    validate_ranking(n, v);
    rounds_.push_back(round);
    flat_.insert(flat_.end(), v.begin(), v.end());
  }

  bool operator==(const ObservationBatch& o) const {
    return n == o.n && m == o.m && r == o.r && p == o.p && rounds_ == o.rounds_ &&
           flat_ == o.flat_;
  }

  // Text format: "n m r p" header (p is a number or the word "synthetic"),
  // then one record per line, "round i1,...,im : v1,...,vm", all 1-based.
  void write(std::ostream& os) const {
    os << n << ' ' << m << ' ' << r << ' '
       << (synthetic() ? std::string("synthetic") : detail::fmt_g17(p)) << '\n';
    for (std::size_t i = 0; i < size(); ++i) {
      os << rounds_[i] + 1 << ' ';
      const ItemSet s = subset_of(i);
      for (std::size_t j = 0; j < s.size(); ++j) os << (j ? "," : "") << s[j] + 1;
      os << " : ";
      auto v = ranking(i);
      for (int j = 0; j < m; ++j) os << (j ? "," : "") << v[j] + 1;
      os << '\n';
    }
  }

  static ObservationBatch read(std::istream& is) {
    std::string line;
    int lineno = 0;
    if (!std::getline(is, line)) throw std::runtime_error("batch file: missing header");
    ++lineno;
    auto head = detail::split(detail::trim(line), ' ');
    if (head.size() != 4) throw std::runtime_error("batch file: header must be 'n m r p'");
    ObservationBatch b;
    b.n = static_cast<int>(detail::parse_int(head[0], "n"));
    b.m = static_cast<int>(detail::parse_int(head[1], "m"));
    b.r = static_cast<int>(detail::parse_int(head[2], "r"));
    if (b.n < 2 || b.m < 2 || b.m > b.n || b.r < 0)
      throw std::runtime_error("batch file: bad header values");
    b.p = head[3] == "synthetic" ? kSyntheticP : detail::parse_double(head[3], "p");
    if (!b.synthetic() && (b.p < 0.0 || b.p > 1.0))
      throw std::runtime_error("batch file: p must lie in [0,1] or be 'synthetic'");
    std::map<std::pair<ItemSet, int>, bool> seen;
    while (std::getline(is, line)) {
      ++lineno;
      const std::string t = detail::trim(line);
      if (t.empty() || t[0] == '#') continue;
      const std::string err = "batch file line " + std::to_string(lineno);
      auto colon = t.find(':');
      if (colon == std::string::npos) throw std::runtime_error(err + ": missing ':'");
      auto left = detail::split(detail::trim(t.substr(0, colon)), ' ');
      if (left.size() != 2) throw std::runtime_error(err + ": expected 'round subset :'");
      const int round = static_cast<int>(detail::parse_int(left[0], err + " round")) - 1;
      ItemSet subset;
      for (const auto& tok : detail::split(left[1], ','))
        subset.push_back(static_cast<int>(detail::parse_int(tok, err + " item")) - 1);
      Ranking v;
      for (const auto& tok : detail::split(detail::trim(t.substr(colon + 1)), ','))
        v.push_back(static_cast<int>(detail::parse_int(tok, err + " item")) - 1);
      try {
        validate_item_set(b.n, subset);
        b.append(round, v);
      } catch (const std::invalid_argument& e) {
        throw std::runtime_error(err + ": " + e.what());
      }
      ItemSet sorted_v(v.begin(), v.end());
      std::sort(sorted_v.begin(), sorted_v.end());
      if (sorted_v != subset)
        throw std::runtime_error(err + ": ranking does not match its subset");
      if (std::exchange(seen[{subset, round}], true))
        throw std::runtime_error(err + ": duplicate (subset, round) record");
    }
    return b;
  }

 private:
  std::vector<int> rounds_;
  std::vector<int> flat_;  // size() * m items, best first
};

// Draws a batch from the model: for every (subset, round) cell an independent
// stream mix_seed(mix_seed(seed, subset_rank), round) decides observation
// (Bernoulli p) and, if observed, the ranking. Enumeration order is therefore
// irrelevant to the outcome.
inline ObservationBatch sample_observations(const PartialRankingModel& model, double p,
                                            int r, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("need p in [0,1]");
  if (r < 0) throw std::invalid_argument("need r >= 0");
  ObservationBatch batch;
  batch.n = model.n();
  batch.m = model.m();
  batch.r = r;
  batch.p = p;
  const int m = model.m();
  std::vector<double> cum;      // cumulative row, table-backed kinds
  std::vector<Ranking> perms;   // lexicographic orders of the current subset
  std::vector<double> probs;
  std::vector<int> remaining, chosen;
  const bool table = model.has_table();
  std::uint64_t subset_rank = 0;
  for_each_subset(model.n(), m, [&](const ItemSet& subset) {
    if (table) {
      model.row(subset_rank, subset, probs);
      cum.resize(probs.size());
      double acc = 0.0;
      for (std::size_t j = 0; j < probs.size(); ++j) cum[j] = (acc += probs[j]);
      perms = enumerate_permutations(subset);
    }
    const std::uint64_t subset_stream = mix_seed(seed, subset_rank);
    for (int round = 0; round < r; ++round) {
      Rng rng(mix_seed(subset_stream, round));
      if (!rng.next_bernoulli(p)) continue;
      if (table) {
        batch.append(round, perms[rng.next_categorical(cum)]);
      } else {
        // sequential Plackett-Luce draws over the remaining items
        const auto& w = model.weights();
        remaining.assign(subset.begin(), subset.end());
        chosen.clear();
        while (!remaining.empty()) {
          double total = 0.0;
          for (int x : remaining) total += w[x];
          double u = rng.next_unit() * total;
          std::size_t pick = remaining.size() - 1;
          for (std::size_t j = 0; j < remaining.size(); ++j) {
            u -= w[remaining[j]];
            if (u < 0.0) { pick = j; break; }
          }
          chosen.push_back(remaining[pick]);
          remaining.erase(remaining.begin() + pick);
        }
        batch.append(round, chosen);
      }
    }
    ++subset_rank;
  });
  return batch;
}

}  // namespace borda
