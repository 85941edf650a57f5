#pragma once

// Borda score vectors: beta_1 = 1 >= beta_2 >= ... >= beta_m >= 0, the
// per-position scores added to an item's tally. score_family builds the named
// families used throughout the experiments.

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace borda {

class ScoreVector {
 public:
  explicit ScoreVector(std::vector<double> b) : b_(std::move(b)) {
    if (b_.size() < 2) throw std::invalid_argument("score vector needs m >= 2");
    if (std::abs(b_.front() - 1.0) > 1e-9)
      throw std::invalid_argument("score vector must start at 1");
    b_.front() = 1.0;
    for (std::size_t j = 1; j < b_.size(); ++j)
      if (b_[j] > b_[j - 1] + 1e-12)
        throw std::invalid_argument("score vector must be non-increasing");
    if (b_.back() < 0.0)
      throw std::invalid_argument("score vector must be non-negative");
  }

  int size() const { return static_cast<int>(b_.size()); }
  // 0-based position: operator[](t) scores rank t+1.
  double operator[](int t) const { return b_[t]; }
  double last() const { return b_.back(); }
  double sum() const { return std::accumulate(b_.begin(), b_.end(), 0.0); }
  const std::vector<double>& values() const { return b_; }

  bool operator==(const ScoreVector& o) const { return b_ == o.b_; }

 private:
  std::vector<double> b_;
};

// Named families, all of length m:
//   tilde<i>  top-i indicator: 1 for positions <= i, else 0 (i in [1, m-1])
//   check1    (m-j) / (j+m-2)
//   check2    1/j  (Dowdall)
//   bar1      1 - (j-1)/(m-1)  (uniform spacing down to 0)
//   bar2      1 - (j-1)/m
//   hat       (m^2 - j^2) / (m^2 - 1)
inline ScoreVector score_family(const std::string& name, int m) {
  if (m < 2) throw std::invalid_argument("score_family: need m >= 2");
  std::vector<double> b(m);
  if (name.rfind("tilde", 0) == 0) {
    int i = 0;
    try {
      i = std::stoi(name.substr(5));
    } catch (...) {
      throw std::invalid_argument("bad score family name: " + name);
    }
    if (i < 1 || i > m - 1)
      throw std::invalid_argument("tilde index must lie in [1, m-1]: " + name);
    for (int j = 1; j <= m; ++j) b[j - 1] = j <= i ? 1.0 : 0.0;
  } else if (name == "check1") {
    for (int j = 1; j <= m; ++j)
      b[j - 1] = static_cast<double>(2 * m - 2) / (j + m - 2) - 1.0;
  } else if (name == "check2") {
    for (int j = 1; j <= m; ++j) b[j - 1] = 1.0 / j;
  } else if (name == "bar1") {
    for (int j = 1; j <= m; ++j)
      b[j - 1] = 1.0 - static_cast<double>(j - 1) / (m - 1);
  } else if (name == "bar2") {
    for (int j = 1; j <= m; ++j)
      b[j - 1] = 1.0 - static_cast<double>(j - 1) / m;
  } else if (name == "hat") {
    for (int j = 1; j <= m; ++j)
      b[j - 1] = static_cast<double>(m * m - j * j) / (m * m - 1);
  } else {
    throw std::invalid_argument("unknown score family: " + name);
  }
  return ScoreVector(std::move(b));
}

// Every family name valid at this m (used by property tests).
inline std::vector<std::string> score_family_names(int m) {
  std::vector<std::string> names;
  for (int i = 1; i <= m - 1; ++i) names.push_back("tilde" + std::to_string(i));
  names.insert(names.end(), {"check1", "check2", "bar1", "bar2", "hat"});
  return names;
}

}  // namespace borda
