#pragma once

// Closed-form guarantee calculators for Borda top-k selection: the two-regime
// exact-recovery upper bound, the gap threshold alpha_bar below which no
// estimator can succeed, partial-recovery variants, and the exact KL /
// variance quantities the converse arguments bound.
//
// Integer ingredients use exact 64-bit arithmetic while they fit and switch
// to log-space (lgamma) beyond that, so large-n reports stay finite.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "borda/combinatorics.hpp"
#include "borda/model.hpp"
#include "borda/score_vector.hpp"
#include "borda/textio.hpp"

namespace borda {

enum class Regime { low_p, high_p };

inline const char* regime_name(Regime r) { return r == Regime::low_p ? "low" : "high"; }

namespace detail {

inline void check_nmk(int n, int m, int k) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  if (m < 2 || m > n) throw std::invalid_argument("need 2 <= m <= n");
  if (k < 1 || k >= n) throw std::invalid_argument("need 1 <= k < n");
}

inline void check_beta_m(double beta_m) {
  if (!(beta_m >= 0.0 && beta_m <= 1.0))
    throw std::invalid_argument("need beta_m in [0,1]");
}

// Denominator of the high-observation-probability exponent.
inline double high_p_denom(int n, int m, double beta_m) {
  const double s = 1.0 - beta_m;
  return 2.0 * s * s * (m - 1) / (n - 1) + static_cast<double>(n - m) / (n - 1);
}

}  // namespace detail

// Observation-probability threshold separating the two bound regimes:
// p0 = min(1/2, 1 - sqrt(1 - (1-beta_m)^2 (m-1)/(n-1) - (1/2)(n-m)/(n-1))).
inline double p_zero(int n, int m, double beta_m) {
  if (n < 2 || m < 2 || m > n) throw std::invalid_argument("need 2 <= m <= n");
  detail::check_beta_m(beta_m);
  const double s = 1.0 - beta_m;
  const double radicand = 1.0 - s * s * (m - 1) / (n - 1) -
                          0.5 * static_cast<double>(n - m) / (n - 1);
  return std::min(0.5, 1.0 - std::sqrt(std::max(0.0, radicand)));
}

struct TheoremBound {
  Regime regime = Regime::low_p;
  double p0 = 0.0;
  double exponent = 0.0;   // bound = prefactor * n^(-exponent)
  double raw = 0.0;        // may exceed 1
  double clamped = 0.0;    // min(raw, 1)
};

namespace detail {

inline TheoremBound two_regime_bound(int n, int m, double prefactor, double p,
                                     double alpha, double beta_m) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("need p in (0,1]");
  if (!(alpha >= 0.0)) throw std::invalid_argument("need alpha >= 0");
  TheoremBound out;
  out.p0 = p_zero(n, m, beta_m);
  out.regime = p <= out.p0 ? Regime::low_p : Regime::high_p;
  out.exponent = out.regime == Regime::low_p
                     ? alpha * alpha / (4.0 - 2.0 * p)
                     : alpha * alpha * p / high_p_denom(n, m, beta_m);
  out.raw = prefactor * std::exp(-out.exponent * std::log(static_cast<double>(n)));
  out.clamped = std::min(out.raw, 1.0);
  return out;
}

}  // namespace detail

// Probability bound on missing the exact top-k set for models whose gap
// Delta_k clears alpha * sqrt(log n / (r p rho)); prefactor k(n-k).
inline TheoremBound theorem1_upper(int n, int m, int k, double p, double alpha,
                                   double beta_m) {
  detail::check_nmk(n, m, k);
  detail::check_beta_m(beta_m);
  return detail::two_regime_bound(n, m, static_cast<double>(k) * (n - k), p, alpha, beta_m);
}

// Partial-recovery variant: tolerating Hamming slack 2h shrinks the
// prefactor to (k-h)(n-k-h); the exponent is unchanged.
inline TheoremBound theorem3_upper(int n, int m, int k, int h, double p, double alpha,
                                   double beta_m) {
  detail::check_nmk(n, m, k);
  detail::check_beta_m(beta_m);
  if (h < 0 || h > k - 1 || h > n - k - 1)
    throw std::invalid_argument("need 0 <= h <= min(k-1, n-k-1)");
  return detail::two_regime_bound(n, m, static_cast<double>(k - h) * (n - k - h), p,
                                  alpha, beta_m);
}

// Combinatorial coefficients of the converse construction:
//   q = max(1, m-n+k)
//   g = (n/m!) * sum_{t=1}^{q} (beta_t - beta_{m-q+t}) * A(k-1,q-1) * A(n-k-1,m-q-1)
//   h = [C(k-1,q-1) C(n-k,m-q) + C(k,q) C(n-k-1,m-q-1)] / C(m,q)
// where A(a,b) is the falling factorial a!/(a-b)!.
struct GhParams {
  int q = 1;
  double g = 0.0;
  double h = 0.0;
};

inline GhParams gh_parameters(int n, int m, int k, const ScoreVector& beta) {
  detail::check_nmk(n, m, k);
  if (beta.size() != m) throw std::invalid_argument("score vector length must equal m");
  if (2 * k > n) throw std::invalid_argument("need 2k <= n");
  GhParams out;
  out.q = std::max(1, m - n + k);
  const int q = out.q;
  double spread = 0.0;
  for (int t = 0; t < q; ++t) spread += beta[t] - beta[m - q + t];
  const double ff_top = falling_factorial_dbl(k - 1, q - 1);
  const double ff_bot = falling_factorial_dbl(n - k - 1, m - q - 1);
  out.g = static_cast<double>(n) / factorial_dbl(m) * spread * ff_top * ff_bot;
  out.h = (binomial_dbl(k - 1, q - 1) * binomial_dbl(n - k, m - q) +
           binomial_dbl(k, q) * binomial_dbl(n - k - 1, m - q - 1)) /
          binomial_dbl(m, q);
  return out;
}

// Gap threshold below which no estimator can reliably recover the top-k set:
// alpha_bar = (sqrt(2)/7) * g * sqrt(1/(h * rho)).
inline double theorem2_alpha_bar(int n, int m, int k, const ScoreVector& beta) {
  const GhParams gh = gh_parameters(n, m, k, beta);
  const double rho = binomial_dbl(n - 1, m - 1);
  return std::sqrt(2.0) / 7.0 * gh.g * std::sqrt(1.0 / (gh.h * rho));
}

// Partial-recovery converse threshold. h_radius is the tolerated Hamming
// slack; the hypothesis 2h <= (1/(1+nu2)) * min{n-k, k, n^(1-nu1)} is
// enforced and the failing inequality named. The underlying statement is
// asymptotic (it assumes n large relative to a function of nu1, nu2).
inline double theorem4_alpha_bar(int n, int m, int k, int h_radius,
                                 const ScoreVector& beta, double nu1 = 0.5,
                                 double nu2 = 0.5) {
  if (!(nu1 > 0.0 && nu1 < 1.0)) throw std::invalid_argument("need nu1 in (0,1)");
  if (!(nu2 > 0.0)) throw std::invalid_argument("need nu2 > 0");
  if (h_radius < 1) throw std::invalid_argument("need h >= 1");
  const double cap = std::min({static_cast<double>(n - k), static_cast<double>(k),
                               std::pow(static_cast<double>(n), 1.0 - nu1)});
  if (2.0 * h_radius > cap / (1.0 + nu2)) {
    std::ostringstream msg;
    msg << "hypothesis failed: 2h = " << 2 * h_radius
        << " > (1/(1+nu2)) * min{n-k, k, n^(1-nu1)} = " << cap / (1.0 + nu2);
    throw std::invalid_argument(msg.str());
  }
  const GhParams gh = gh_parameters(n, m, k, beta);
  const double rho = binomial_dbl(n - 1, m - 1);
  return std::sqrt(2.0) / 14.0 * gh.g * std::sqrt(nu1 * nu2 / (gh.h * rho));
}

// Membership in the alpha-separated family: Delta_{k,h} of the scores clears
// alpha * sqrt(log n / (r p rho)) (natural log, boundary inclusive).
inline bool f_k_membership(const AssociatedScores& scores, int k, int h, double alpha,
                           int r, double p) {
  if (r < 1) throw std::invalid_argument("need r >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("need p in (0,1]");
  const int n = static_cast<int>(scores.tau.size());
  const double threshold =
      alpha * std::sqrt(std::log(static_cast<double>(n)) / (r * p * scores.rho));
  return delta_gap(scores.tau, k, h) >= threshold;
}

// Exact KL divergence between the observation processes of two models over r
// rounds with observation probability p. Requires matching (n, m) and support
// of `a` contained in support of `b`.
inline double exact_kl_between(const PartialRankingModel& a, const PartialRankingModel& b,
                               int r, double p) {
  if (a.n() != b.n() || a.m() != b.m())
    throw std::invalid_argument("models must share n and m");
  if (r < 0) throw std::invalid_argument("need r >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("need p in [0,1]");
  if (a.n() > 20) throw std::invalid_argument("KL enumeration needs n <= 20");
  double total = 0.0;
  std::vector<double> pa, pb;
  std::uint64_t rank = 0;
  for_each_subset(a.n(), a.m(), [&](const ItemSet& subset) {
    a.row(rank, subset, pa);
    b.row(rank, subset, pb);
    ++rank;
    for (std::size_t j = 0; j < pa.size(); ++j) {
      if (pa[j] == 0.0) continue;
      if (pb[j] == 0.0)
        throw std::domain_error("KL undefined: support mismatch at subset rank " +
                                std::to_string(rank - 1) + ", permutation " +
                                std::to_string(j));
      total += pa[j] * std::log(pa[j] / pb[j]);
    }
  });
  return r * p * total;
}

// Converse-side closed form the KL is bounded by: r * p * h * 4 delta^2 / (1 - delta^2).
inline double kl_upper_bound(int r, double p, double h_nm, double delta) {
  return r * p * h_nm * 4.0 * delta * delta / (1.0 - delta * delta);
}

// Exact variance sum for the score difference of items a and b: variances of
// the per-subset scores where exactly one of a, b appears, plus variances of
// the score differences where both appear. One observation round.
inline double exact_variance_sum(const PartialRankingModel& model, const ScoreVector& beta,
                                 int a, int b, double p) {
  if (beta.size() != model.m()) throw std::invalid_argument("score vector length must equal m");
  if (a == b || a < 0 || b < 0 || a >= model.n() || b >= model.n())
    throw std::invalid_argument("need distinct items a, b in range");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("need p in [0,1]");
  if (model.n() > 20) throw std::invalid_argument("variance enumeration needs n <= 20");
  double total = 0.0;
  std::vector<double> probs;
  std::uint64_t rank = 0;
  for_each_subset(model.n(), model.m(), [&](const ItemSet& subset) {
    const bool has_a = std::binary_search(subset.begin(), subset.end(), a);
    const bool has_b = std::binary_search(subset.begin(), subset.end(), b);
    if (!has_a && !has_b) { ++rank; return; }
    model.row(rank, subset, probs);
    double e1 = 0.0, e2 = 0.0;
    std::size_t j = 0;
    for_each_permutation(subset, [&](const Ranking& v) {
      double val = 0.0;
      for (int t = 0; t < model.m(); ++t) {
        if (v[t] == a) val += beta[t];
        if (v[t] == b) val -= beta[t];
      }
      if (!has_a || !has_b) val = std::abs(val);  // score of whichever is present
      e1 += val * probs[j];
      e2 += val * val * probs[j];
      ++j;
    });
    total += p * e2 - (p * e1) * (p * e1);
    ++rank;
  });
  return total;
}

// Closed form the variance sum is bounded by when p <= 1/2, a is a top-k item
// and b is not: (2p - p^2) rho - p rho Delta_k.
inline double variance_sum_upper_bound(double rho, double p, double delta_k) {
  return (2.0 * p - p * p) * rho - p * rho * delta_k;
}

// One row of the achievability/converse gap curve in m.
struct GapCurveRow {
  int m = 2;
  double alpha_upper = 0.0;  // smallest alpha driving the upper bound to the target
  double alpha_bar = 0.0;    // converse threshold
  double gap = 0.0;          // alpha_upper - alpha_bar
  Regime regime = Regime::low_p;
  double p0 = 0.0;
  int q = 1;
  double g = 0.0;
  double h = 0.0;
};

// Sweeps m with uniform-spacing scores (beta_m = 0). alpha_upper solves
// prefactor * n^(-alpha^2 C) = prefactor * n^(-target_exponent), i.e.
// alpha = sqrt(target_exponent / C) with C the active regime's coefficient.
inline std::vector<GapCurveRow> bound_gap_curve(int n, int k, double p, int m_lo,
                                                int m_hi, double target_exponent = 14.0) {
  if (m_lo < 2 || m_hi < m_lo || m_hi > n)
    throw std::invalid_argument("need 2 <= m_lo <= m_hi <= n");
  if (2 * k > n) throw std::invalid_argument("need 2k <= n");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("need p in (0,1]");
  if (!(target_exponent > 0.0)) throw std::invalid_argument("need target exponent > 0");
  std::vector<GapCurveRow> rows;
  for (int m = m_lo; m <= m_hi; ++m) {
    const ScoreVector beta = score_family("bar1", m);
    GapCurveRow row;
    row.m = m;
    row.p0 = p_zero(n, m, beta.last());
    row.regime = p <= row.p0 ? Regime::low_p : Regime::high_p;
    const double coeff = row.regime == Regime::low_p
                             ? 1.0 / (4.0 - 2.0 * p)
                             : p / detail::high_p_denom(n, m, beta.last());
    row.alpha_upper = std::sqrt(target_exponent / coeff);
    const GhParams gh = gh_parameters(n, m, k, beta);
    row.q = gh.q;
    row.g = gh.g;
    row.h = gh.h;
    row.alpha_bar = theorem2_alpha_bar(n, m, k, beta);
    row.gap = row.alpha_upper - row.alpha_bar;
    rows.push_back(row);
  }
  return rows;
}

inline void write_gap_curve_csv(const std::vector<GapCurveRow>& rows, std::ostream& os) {
  os << "m,alpha_upper,alpha_bar,gap,regime,p0,q,g,h\n";
  for (const auto& r : rows) {
    os << r.m << ',' << detail::fmt_g12(r.alpha_upper) << ',' << detail::fmt_g12(r.alpha_bar)
       << ',' << detail::fmt_g12(r.gap) << ',' << regime_name(r.regime) << ','
       << detail::fmt_g12(r.p0) << ',' << r.q << ',' << detail::fmt_g12(r.g) << ','
       << detail::fmt_g12(r.h) << '\n';
  }
}

// Everything the bounds CLI prints for one parameter point.
struct BoundReport {
  int n = 0, m = 0, k = 0, r = 0;
  double p = 0.0, alpha = 0.0;
  TheoremBound t1;
  double rho = 0.0;
  bool has_gh = false;  // gh block needs 2k <= n
  GhParams gh;
  double alpha_bar = 0.0;
};

inline BoundReport make_bound_report(int n, int m, int k, int r, double p, double alpha,
                                     const ScoreVector& beta) {
  BoundReport rep;
  rep.n = n; rep.m = m; rep.k = k; rep.r = r; rep.p = p; rep.alpha = alpha;
  rep.t1 = theorem1_upper(n, m, k, p, alpha, beta.last());
  rep.rho = binomial_dbl(n - 1, m - 1);
  if (2 * k <= n) {
    rep.has_gh = true;
    rep.gh = gh_parameters(n, m, k, beta);
    rep.alpha_bar = theorem2_alpha_bar(n, m, k, beta);
  }
  return rep;
}

}  // namespace borda
