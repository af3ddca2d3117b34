#pragma once

#include <span>
#include <variant>
#include <vector>

#include "autocat/network.hpp"

namespace autocat {

/// Dirichlet-multinomial conditional law on E_n with weights alpha_i > 0.
/// For d = 2 this is the beta-binomial law.
struct DirichletMultinomial {
  std::vector<double> alpha;
};

/// Uniform law on E_n: n!(d-1)!/(n+d-1)! per point.
struct UniformSimplex {
  int dimension = 1;
};

using ConditionalLaw = std::variant<DirichletMultinomial, UniformSimplex>;

int dimension_of(const ConditionalLaw& law);

/// Stationary law alpha(a) = pi(a | n) nu(n) with nu = Poisson(mu), n = |a|_1.
struct MixtureStationary {
  double mu = 1.0;
  ConditionalLaw conditional;

  int dimension() const { return dimension_of(conditional); }
};

/// mu = sum_i lambda_i / delta. Throws HypothesisError for unequal deltas.
double mixing_intensity(const ReactionNetwork& net);

/// alpha_i = delta lambda_i / (kappa sum_j lambda_j). Needs d >= 2, every
/// off-diagonal kappa equal to a common kappa > 0, and equal deltas.
std::vector<double> dirichlet_params(const ReactionNetwork& net);

/// Closed-form stationary law when one is known:
///  - d = 1: pure birth-death, trivial conditional;
///  - all off-diagonal kappa equal and positive: Dirichlet-multinomial;
///  - cycle kappa_{i,i+1} = kappa, equal lambda, delta = d kappa/(d-1):
///    uniform simplex. Exact only for d = 2: for d >= 3 the master equation
///    balances on interior states but not where some a_i = 0 (see
///    master_equation_residual).
/// Throws HypothesisError otherwise.
MixtureStationary stationary_law(const ReactionNetwork& net);

/// True if `net` is a cycle network at the uniform-conditional relation
/// delta = d kappa/(d-1) (relative tolerance 1e-12) with equal inflows.
bool at_uniform_cycle_relation(const ReactionNetwork& net);

double log_poisson_pmf(double mu, Count n);
double poisson_pmf(double mu, Count n);

/// Chernoff upper bound on P(N > n) for N ~ Poisson(mu); 1 when n + 1 <= mu.
double poisson_tail_bound(double mu, Count n);

/// Smallest n with poisson_tail_bound(mu, n) < eps.
Count poisson_truncation_point(double mu, double eps);

double log_conditional_pmf(const ConditionalLaw& law, Count n,
                           std::span<const Count> a);
/// pi(a | n). Throws DomainError unless a >= 0 has d entries summing to n.
double conditional_pmf(const ConditionalLaw& law, Count n,
                       std::span<const Count> a);

double log_stationary_pmf(const MixtureStationary& law,
                          std::span<const Count> a);
double stationary_pmf(const MixtureStationary& law, std::span<const Count> a);

/// Mean vector and covariance matrix (row-major, d x d).
struct Moments {
  std::vector<double> mean;
  std::vector<double> cov;

  int dimension() const { return static_cast<int>(mean.size()); }
  double covariance(int i, int j) const {
    return cov[static_cast<std::size_t>(i) * mean.size() + j];
  }
};

/// Exact mean and covariance of X/V under the stationary law, by
/// conditioning on n (Poisson moments plus Dirichlet-multinomial moments).
Moments analytic_moments(const MixtureStationary& law, double volume);

/// Conditional mass of the corner states n e_i, summed over species.
double corner_mass(std::span<const double> alpha, Count n);

}  // namespace autocat
