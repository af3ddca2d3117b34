#include "autocat/analytic.hpp"

#include <cmath>
#include <numeric>

#include "autocat/error.hpp"

namespace autocat {

namespace {

long double lgam(long double x) {
  int sign = 0;
  return ::lgammal_r(x, &sign);
}

void check_alpha(std::span<const double> alpha) {
  if (alpha.empty()) throw DomainError("alpha must be nonempty");
  for (double a : alpha) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw DomainError("Dirichlet weights must be positive and finite");
    }
  }
}

void check_simplex_point(int dim, Count n, std::span<const Count> a) {
  if (static_cast<int>(a.size()) != dim) {
    throw DomainError("state dimension does not match the conditional law");
  }
  Count sum = 0;
  for (Count c : a) {
    if (c < 0) throw DomainError("counts must be nonnegative");
    sum += c;
  }
  if (sum != n) throw DomainError("state is not on the simplex |a|_1 = n");
}

// Common off-diagonal kappa if every off-diagonal entry is equal, else 0.
double common_offdiagonal(const ReactionNetwork& net) {
  const int d = net.dimension();
  if (d < 2) return 0.0;
  const double k = net.kappa(0, 1);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i != j && net.kappa(i, j) != k) return 0.0;
    }
  }
  return k;
}

bool relative_equal(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

int dimension_of(const ConditionalLaw& law) {
  if (const auto* dm = std::get_if<DirichletMultinomial>(&law)) {
    return static_cast<int>(dm->alpha.size());
  }
  return std::get<UniformSimplex>(law).dimension;
}

double mixing_intensity(const ReactionNetwork& net) {
  return net.total_inflow() / net.common_outflow();
}

std::vector<double> dirichlet_params(const ReactionNetwork& net) {
  const double delta = net.common_outflow();
  const double kappa = common_offdiagonal(net);
  if (!(kappa > 0.0)) {
    throw HypothesisError(
        "Dirichlet-multinomial law needs d >= 2 and a common positive kappa "
        "on every ordered pair");
  }
  const double total = net.total_inflow();
  std::vector<double> alpha;
  alpha.reserve(static_cast<std::size_t>(net.dimension()));
  for (double l : net.lambda()) alpha.push_back(delta * l / (kappa * total));
  return alpha;
}

bool at_uniform_cycle_relation(const ReactionNetwork& net) {
  const int d = net.dimension();
  if (d < 2 || !net.has_equal_outflow()) return false;
  const double k = net.kappa(0, 1 % d);
  if (!(k > 0.0)) return false;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double expected = (j == (i + 1) % d) ? k : 0.0;
      if (net.kappa(i, j) != expected) return false;
    }
  }
  const auto lambda = net.lambda();
  for (double l : lambda) {
    if (l != lambda.front()) return false;
  }
  const double critical = static_cast<double>(d) * k / static_cast<double>(d - 1);
  return relative_equal(net.common_outflow(), critical, 1e-12);
}

MixtureStationary stationary_law(const ReactionNetwork& net) {
  const double mu = mixing_intensity(net);
  if (net.dimension() == 1) return {mu, UniformSimplex{1}};
  if (common_offdiagonal(net) > 0.0) {
    return {mu, DirichletMultinomial{dirichlet_params(net)}};
  }
  if (at_uniform_cycle_relation(net)) {
    return {mu, UniformSimplex{net.dimension()}};
  }
  throw HypothesisError("no closed-form stationary law for this network");
}

double log_poisson_pmf(double mu, Count n) {
  if (!(mu > 0.0)) throw DomainError("Poisson intensity must be positive");
  if (n < 0) return -INFINITY;
  const long double ln = static_cast<long double>(n);
  return static_cast<double>(ln * std::log(static_cast<long double>(mu)) - mu -
                             lgam(ln + 1.0L));
}

double poisson_pmf(double mu, Count n) { return std::exp(log_poisson_pmf(mu, n)); }

double poisson_tail_bound(double mu, Count n) {
  if (!(mu > 0.0)) throw DomainError("Poisson intensity must be positive");
  const double k = static_cast<double>(n) + 1.0;
  if (k <= mu) return 1.0;
  // P(N >= k) <= exp(-mu) (e mu / k)^k for k > mu.
  return std::exp(-mu + k - k * std::log(k / mu));
}

Count poisson_truncation_point(double mu, double eps) {
  Count n = static_cast<Count>(std::ceil(mu));
  while (poisson_tail_bound(mu, n) >= eps) ++n;
  return n;
}

double log_conditional_pmf(const ConditionalLaw& law, Count n,
                           std::span<const Count> a) {
  const int d = dimension_of(law);
  check_simplex_point(d, n, a);
  const long double ln = static_cast<long double>(n);
  if (std::holds_alternative<UniformSimplex>(law)) {
    // n! (d-1)! / (n+d-1)!
    return static_cast<double>(lgam(ln + 1.0L) + lgam(static_cast<long double>(d)) -
                               lgam(ln + d));
  }
  const auto& alpha = std::get<DirichletMultinomial>(law).alpha;
  check_alpha(alpha);
  long double sum_alpha = 0.0L;
  for (double x : alpha) sum_alpha += x;
  long double value = lgam(ln + 1.0L) + lgam(sum_alpha) - lgam(ln + sum_alpha);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const long double ai = static_cast<long double>(a[i]);
    const long double wi = alpha[i];
    value += lgam(ai + wi) - lgam(wi) - lgam(ai + 1.0L);
  }
  return static_cast<double>(value);
}

double conditional_pmf(const ConditionalLaw& law, Count n,
                       std::span<const Count> a) {
  return std::exp(log_conditional_pmf(law, n, a));
}

double log_stationary_pmf(const MixtureStationary& law,
                          std::span<const Count> a) {
  const Count n = std::accumulate(a.begin(), a.end(), Count{0});
  return log_conditional_pmf(law.conditional, n, a) + log_poisson_pmf(law.mu, n);
}

double stationary_pmf(const MixtureStationary& law, std::span<const Count> a) {
  return std::exp(log_stationary_pmf(law, a));
}

Moments analytic_moments(const MixtureStationary& law, double volume) {
  if (!(volume > 0.0)) throw DomainError("volume must be positive");
  const int d = law.dimension();
  std::vector<double> alpha;
  if (const auto* dm = std::get_if<DirichletMultinomial>(&law.conditional)) {
    alpha = dm->alpha;
    check_alpha(alpha);
  } else {
    alpha.assign(static_cast<std::size_t>(d), 1.0);
  }
  const double sum_alpha = std::accumulate(alpha.begin(), alpha.end(), 0.0);
  const double mu = law.mu;
  // X | n ~ DM(n, alpha):  E = n p,  Cov = n (diag p - p p^T)(n + A)/(1 + A).
  // n ~ Poisson(mu):  E[n (n + A)] = mu + mu^2 + A mu,  Var n = mu.
  const double second = (mu + mu * mu + sum_alpha * mu) / (1.0 + sum_alpha);
  const double v2 = volume * volume;

  Moments m;
  m.mean.resize(static_cast<std::size_t>(d));
  m.cov.resize(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    const double pi = alpha[static_cast<std::size_t>(i)] / sum_alpha;
    m.mean[static_cast<std::size_t>(i)] = mu * pi / volume;
    for (int j = 0; j < d; ++j) {
      const double pj = alpha[static_cast<std::size_t>(j)] / sum_alpha;
      const double within = ((i == j ? pi : 0.0) - pi * pj) * second;
      const double between = pi * pj * mu;
      m.cov[static_cast<std::size_t>(i) * d + j] = (within + between) / v2;
    }
  }
  return m;
}

double corner_mass(std::span<const double> alpha, Count n) {
  check_alpha(alpha);
  if (n < 1) throw DomainError("corner mass needs n >= 1");
  long double sum_alpha = 0.0L;
  for (double x : alpha) sum_alpha += x;
  const long double ln = static_cast<long double>(n);
  const long double base = lgam(sum_alpha) - lgam(ln + sum_alpha);
  long double total = 0.0L;
  for (double x : alpha) {
    total += std::exp(base + lgam(ln + x) - lgam(static_cast<long double>(x)));
  }
  return static_cast<double>(total);
}

}  // namespace autocat
