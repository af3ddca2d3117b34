// Independent reference implementations used only by tests. Nothing here
// calls into the library's analytic code.
#pragma once

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline Rational rising(const Rational& x, std::int64_t k) {
  Rational out = 1;
  for (std::int64_t j = 0; j < k; ++j) out *= x + j;
  return out;
}

inline Rational factorial(std::int64_t k) {
  Rational out = 1;
  for (std::int64_t j = 2; j <= k; ++j) out *= j;
  return out;
}

/// n!/prod a_i! * prod (alpha_i)_{a_i} / (A)_n, exactly.
inline Rational dirichlet_multinomial(std::span<const Rational> alpha,
                                      std::span<const std::int64_t> a) {
  const std::int64_t n = std::accumulate(a.begin(), a.end(), std::int64_t{0});
  Rational total_alpha = 0;
  for (const auto& x : alpha) total_alpha += x;
  Rational out = factorial(n) / rising(total_alpha, n);
  for (std::size_t i = 0; i < a.size(); ++i) {
    out *= rising(alpha[i], a[i]) / factorial(a[i]);
  }
  return out;
}

/// 1 / C(n+d-1, d-1), exactly.
inline Rational uniform_simplex(int d, std::int64_t n) {
  return factorial(n) * factorial(d - 1) / factorial(n + d - 1);
}

/// C(n,k) B(k+a, n-k+b) / B(a,b) through Boost's beta function.
inline double beta_binomial(std::int64_t n, std::int64_t k, double a, double b) {
  return boost::math::binomial_coefficient<double>(static_cast<unsigned>(n),
                                                   static_cast<unsigned>(k)) *
         boost::math::beta(k + a, n - k + b) / boost::math::beta(a, b);
}

/// Poisson pmf table 0..n_max by the recurrence p_k = p_{k-1} mu / k in
/// 50-digit arithmetic.
inline std::vector<double> poisson_table(double mu, std::int64_t n_max) {
  std::vector<double> out;
  BigFloat p = boost::multiprecision::exp(BigFloat(-mu));
  for (std::int64_t k = 0; k <= n_max; ++k) {
    if (k > 0) p = p * BigFloat(mu) / k;
    out.push_back(static_cast<double>(p));
  }
  return out;
}

inline double total_variation(std::span<const double> p, std::span<const double> q) {
  double tv = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) tv += std::abs(p[k] - q[k]);
  return 0.5 * tv;
}

/// Draws X ~ Poisson(mu) then X | n ~ Dirichlet-multinomial(alpha) through a
/// Dirichlet weight vector and sequential binomials.
inline std::vector<std::int64_t> sample_mixture(std::mt19937_64& gen, double mu,
                                                std::span<const double> alpha) {
  std::poisson_distribution<std::int64_t> total(mu);
  std::int64_t n = total(gen);
  std::vector<double> w;
  double sum = 0.0;
  for (double a : alpha) {
    w.push_back(std::gamma_distribution<double>(a, 1.0)(gen));
    sum += w.back();
  }
  std::vector<std::int64_t> out(alpha.size(), 0);
  double remaining = 1.0;
  for (std::size_t i = 0; i + 1 < alpha.size(); ++i) {
    const double p = remaining > 0.0 ? std::min(1.0, (w[i] / sum) / remaining) : 0.0;
    out[i] = std::binomial_distribution<std::int64_t>(n, p)(gen);
    n -= out[i];
    remaining -= w[i] / sum;
  }
  out.back() = n;
  return out;
}

}  // namespace oracle
