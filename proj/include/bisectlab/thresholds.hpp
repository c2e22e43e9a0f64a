#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Binomial crossing probabilities and the explicit consistency criteria built
// on them. The central quantity is Pr(Y >= X) for X ~ Binom(m, max{p,q}),
// Y ~ Binom(n, min{p,q}): the probability that a node's cross-class neighbor
// count meets or beats its same-class count. Everything is computed in natural
// log space because these probabilities go far below 1e-300 at interesting
// sizes.

namespace bisectlab {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();
inline constexpr double pos_inf = std::numeric_limits<double>::infinity();

inline double log_add(double a, double b) {
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  double hi = a > b ? a : b;
  double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

inline double log_choose(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(n - k) + 1);
}

// log pmf of Binom(n, p) at k, valid for the whole closed parameter square
inline double log_binom_pmf(std::int64_t n, std::int64_t k, double p) {
  if (k < 0 || k > n) return neg_inf;
  if (p <= 0.0) return k == 0 ? 0.0 : neg_inf;
  if (p >= 1.0) return k == n ? 0.0 : neg_inf;
  return log_choose(n, k) + static_cast<double>(k) * std::log(p) +
         static_cast<double>(n - k) * std::log1p(-p);
}

struct CrossingProb {
  double log_value;  // ln of the probability; -inf when the event is impossible
  double value;      // exp(log_value); 0 on underflow
};

inline void check_prob_pair(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("probabilities must lie in [0,1]");
}

// Pr(Y >= X - ell), X ~ Binom(m, max{p,q}), Y ~ Binom(n, min{p,q}).
// O(m + n): one pmf sweep for X, one suffix log-sum-exp sweep for Y's
// survival function, accumulated from the small tail inward so the tiny
// terms are added before they can be absorbed by rounding.
inline CrossingProb perturbed_crossing(std::int64_t m, std::int64_t n, double p, double q,
                                       std::int64_t ell) {
  if (m < 0 || n < 0) throw std::invalid_argument("binomial sizes must be nonnegative");
  check_prob_pair(p, q);
  double hi = std::max(p, q);
  double lo = std::min(p, q);

  // surv[j] = ln Pr(Y >= j) for j in [1, n]
  std::vector<double> surv(static_cast<std::size_t>(n) + 1, neg_inf);
  double tail = neg_inf;
  for (std::int64_t j = n; j >= 1; --j) {
    tail = log_add(log_binom_pmf(n, j, lo), tail);
    surv[static_cast<std::size_t>(j)] = tail;
  }
  auto surv_log = [&](std::int64_t j) {
    if (j <= 0) return 0.0;  // Pr(Y >= j) = 1 exactly
    if (j > n) return neg_inf;
    return surv[static_cast<std::size_t>(j)];
  };

  double acc = neg_inf;
  for (std::int64_t k = 0; k <= m; ++k)
    acc = log_add(acc, log_binom_pmf(m, k, hi) + surv_log(k - ell));
  acc = std::min(acc, 0.0);
  return {acc, std::exp(acc)};
}

inline CrossingProb exact_crossing(std::int64_t m, std::int64_t n, double p, double q) {
  return perturbed_crossing(m, n, p, q, 0);
}

// (a + b - 2 sqrt(ab) - 1) ln n + (1/2) ln ln n. Strong consistency of the
// planted bisection at p = a ln n/n, q = b ln n/n is equivalent to this
// statistic diverging to +inf.
inline double sparse_criterion(double a, double b, std::int64_t n) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("sparse_criterion needs a, b > 0");
  if (n < 3) throw std::invalid_argument("sparse_criterion needs n >= 3");
  double ln_n = std::log(static_cast<double>(n));
  return (a + b - 2.0 * std::sqrt(a * b) - 1.0) * ln_n + 0.5 * std::log(ln_n);
}

inline double noise_sigma(double p, double q) {
  return std::sqrt(p * (1.0 - p) + q * (1.0 - q));
}

struct DenseCriterion {
  double value;      // +inf when undefined (p == q)
  double log_value;
  bool defined;      // false iff p == q
};

// (sqrt(n) sigma / |p-q|) exp(-n (p-q)^2 / (2 sigma^2)); strong consistency
// in the dense regime is equivalent to this tending to 0.
inline DenseCriterion dense_criterion(std::int64_t n, double p, double q) {
  check_prob_pair(p, q);
  if (p == q) return {pos_inf, pos_inf, false};
  double sig = noise_sigma(p, q);
  double gap = std::abs(p - q);
  if (sig == 0.0) return {0.0, neg_inf, true};  // p,q at opposite endpoints
  double lg = std::log(std::sqrt(static_cast<double>(n)) * sig / gap) -
              static_cast<double>(n) * gap * gap / (2.0 * sig * sig);
  return {std::exp(lg), lg, true};
}

// ln Pr(N(0,1) >= x); switches to the Mills-ratio expansion where erfc underflows
inline double log_normal_sf(double x) {
  if (x < 35.0) return std::log(0.5 * std::erfc(x / std::sqrt(2.0)));
  double x2 = x * x;
  return -0.5 * x2 - 0.5 * std::log(2.0 * M_PI) - std::log(x) +
         std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

// companion to dense_criterion: ln( n * Pr(N(0,1) >= sqrt(n)|p-q|/sigma) )
inline double log_gaussian_tail(std::int64_t n, double p, double q) {
  check_prob_pair(p, q);
  double sig = noise_sigma(p, q);
  if (sig == 0.0 || p == q)
    throw std::invalid_argument("gaussian tail needs p != q and sigma > 0");
  double x = std::sqrt(static_cast<double>(n)) * std::abs(p - q) / sig;
  return std::log(static_cast<double>(n)) + log_normal_sf(x);
}

inline double gaussian_tail(std::int64_t n, double p, double q) {
  return std::exp(log_gaussian_tail(n, p, q));
}

// n (p-q)^2 / (p+q); weak consistency is equivalent to divergence
inline double weak_criterion(std::int64_t n, double p, double q) {
  check_prob_pair(p, q);
  if (p + q == 0.0) throw std::invalid_argument("weak_criterion needs p + q > 0");
  return static_cast<double>(n) * (p - q) * (p - q) / (p + q);
}

// Local-CLT density approximation of the Binom(n, q) pmf at k
inline double lclt_pmf(std::int64_t n, double q, double k) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("lclt_pmf needs 0 < q < 1");
  double sd = std::sqrt(static_cast<double>(n) * q * (1.0 - q));
  double z = (k - static_cast<double>(n) * q) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
}

// n^{-c} (c ln n)^k / k! with c = a + b: Poisson surrogate for the pmf of
// X + Y, X ~ Binom(n, a ln n/n), Y ~ Binom(n, b ln n/n)
inline double poisson_sum_pmf(std::int64_t n, double a, double b, std::int64_t k) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("poisson_sum_pmf needs a, b > 0");
  if (k < 0) throw std::invalid_argument("poisson_sum_pmf needs k >= 0");
  if (n < 2) throw std::invalid_argument("poisson_sum_pmf needs n >= 2");
  double lam = (a + b) * std::log(static_cast<double>(n));
  double lg = -lam + static_cast<double>(k) * std::log(lam) -
              std::lgamma(static_cast<double>(k) + 1.0);
  return std::exp(lg);
}

inline void check_ratio_args(std::int64_t m, double p, std::int64_t k, std::int64_t ell) {
  if (k < 0 || ell < 0 || k + ell > m)
    throw std::invalid_argument("ratio bound needs 0 <= k, 0 <= ell, k + ell <= m");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("ratio bound needs 0 < p < 1");
}

// upper bound on ln( pmf(k+ell) / pmf(k) ) for Binom(m, p); valid for every
// in-range (k, ell)
inline double ratio_bound(std::int64_t m, double p, std::int64_t k, std::int64_t ell) {
  check_ratio_args(m, p, k, ell);
  if (ell == 0) return 0.0;
  double l = static_cast<double>(ell);
  double mp = static_cast<double>(m) * p;
  return l * std::log(mp / static_cast<double>(k + 1)) +
         l * std::log(static_cast<double>(m - k) / (static_cast<double>(m) - mp));
}

// coarser k-free form, for the low-degree band mp <= 128 ln m (and mp, k well
// below m; see the calibration tests for the finite-size envelope)
inline double ratio_bound_sparse(std::int64_t m, double p, std::int64_t k, std::int64_t ell) {
  check_ratio_args(m, p, k, ell);
  double mp = static_cast<double>(m) * p;
  if (mp > 128.0 * std::log(static_cast<double>(m)))
    throw std::invalid_argument("ratio_bound_sparse needs mp <= 128 ln m");
  if (ell == 0) return 0.0;
  double l = static_cast<double>(ell);
  return l * std::log(mp / l) + 2.0 * l;
}

enum class Regime { sparse, dense, trivial, degenerate };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::sparse: return "sparse";
    case Regime::dense: return "dense";
    case Regime::trivial: return "trivial";
    default: return "degenerate";
  }
}

struct ThresholdReport {
  std::int64_t n = 0;
  double p = 0, q = 0;
  double exact_log_nP = neg_inf;       // ln(n * Pr(crossing at m = n))
  std::optional<double> sparse_stat;   // present iff a, b finite and positive
  std::optional<double> dense_stat;    // absent when p == q
  double weak_stat = 0;
  double a = 0, b = 0;                 // np/ln n, nq/ln n
  double sigma = 0;
  Regime regime = Regime::degenerate;
  bool hypothesis_unmet = false;       // dense tag but degree below ln^3 n
};

inline ThresholdReport threshold_report(std::int64_t n, double p, double q) {
  if (n < 1) throw std::invalid_argument("threshold_report needs n >= 1");
  check_prob_pair(p, q);
  ThresholdReport r;
  r.n = n;
  r.p = p;
  r.q = q;
  double nd = static_cast<double>(n);
  double ln_n = std::log(nd);
  r.exact_log_nP = ln_n + exact_crossing(n, n, p, q).log_value;
  r.a = nd * p / ln_n;
  r.b = nd * q / ln_n;
  r.sigma = noise_sigma(p, q);
  if (std::isfinite(r.a) && std::isfinite(r.b) && r.a > 0 && r.b > 0 && n >= 3)
    r.sparse_stat = sparse_criterion(r.a, r.b, n);
  DenseCriterion dc = dense_criterion(n, p, q);
  if (dc.defined) r.dense_stat = dc.value;
  r.weak_stat = p + q > 0.0 ? weak_criterion(n, p, q) : 0.0;

  double p_hi = std::max(p, q);
  double p_lo = std::min(p, q);
  if (p == q) {
    r.regime = Regime::degenerate;
  } else if (p_lo <= 1.0 / 3.0 && p_hi >= 2.0 / 3.0) {
    r.regime = Regime::trivial;
  } else if (nd * p_hi <= 128.0 * ln_n) {
    r.regime = Regime::sparse;
  } else {
    r.regime = Regime::dense;
  }
  double ln3 = ln_n * ln_n * ln_n;
  r.hypothesis_unmet = r.regime == Regime::dense && std::min(nd * p, nd * q) < ln3;
  return r;
}

}  // namespace bisectlab
