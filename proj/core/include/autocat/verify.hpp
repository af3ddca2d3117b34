#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "autocat/analytic.hpp"
#include "autocat/network.hpp"
#include "autocat/simulate.hpp"

namespace autocat {

using ParamValue =
    std::variant<double, std::int64_t, std::string, std::vector<double>>;

/// Outcome of one machine check. `passed` is decided by the check's own
/// rule; for residual checks it is max_rel_residual <= tolerance.
struct VerificationReport {
  std::string check_name;
  std::vector<std::pair<std::string, ParamValue>> params;
  double max_abs_residual = 0.0;
  double max_rel_residual = 0.0;
  std::optional<Count> worst_total;
  std::optional<State> worst_state;
  double tolerance = 0.0;
  bool passed = false;
  std::string notes;
  /// Named scalar outputs (certified constants, z-scores, ...).
  std::vector<std::pair<std::string, double>> metrics;

  std::optional<double> metric(std::string_view name) const;
};

/// JSON object with keys check, params, max_rel_residual, worst_case,
/// tolerance, passed, notes, plus max_abs_residual and metrics.
std::string to_json(const VerificationReport& report);

/// For every n <= n_max and a in E_n, checks that the rate out of a into
/// E_{n+1} equals sum_i lambda_i and that the rate into E_{n-1} does not
/// depend on a. Residual is the largest discrepancy; passes only when it
/// is exactly zero.
VerificationReport lumpability_check(const ReactionNetwork& net, Count n_max);

/// Stationarity of pi(.|n) nu(n) projected on E_n: compares
/// R_n = pi(a|n) * (total exit rate) with the inflow L_{n-1} + L_n + L_{n+1}
/// for every a in E_n. L_n is built from the nonzero kappa pattern.
/// A state passes if |R - L| <= tol R, or |R - L| <= 1e-12 when R < 1.
VerificationReport master_equation_residual(const ReactionNetwork& net,
                                            const ConditionalLaw& law, Count n,
                                            double tolerance = 1e-9);

/// master_equation_residual over n_min..n_max, merged (worst case kept).
VerificationReport master_equation_sweep(const ReactionNetwork& net,
                                         const ConditionalLaw& law,
                                         Count n_min, Count n_max,
                                         double tolerance = 1e-9);

/// Pointwise check of the Dirichlet-multinomial recurrences at (a, n, i, j):
///   pi(a|n) = 1/(n+1) sum_k (a_k+1) pi(a+e_k|n+1)
///   pi(a-e_i|n-1) = a_i (n-1+A) / (n (a_i-1+alpha_i)) pi(a|n)
///   pi(a-e_i+e_j|n) = a_i (a_j+alpha_j) / ((a_j+1)(a_i-1+alpha_i)) pi(a|n)
/// and, when every alpha_i = 1, the uniform-law forms
///   pi(a+e_i|n+1) = (n+1)/(n+d) pi(a|n),  pi(a-e_i|n-1) = (n+d-1)/n pi(a|n).
/// Throws DomainError when a_i = 0, i == j, or an index is out of range.
VerificationReport recurrence_check(std::span<const double> alpha, Count n,
                                    std::span<const Count> a, int i, int j,
                                    double tolerance = 1e-10);

/// Stationary pmf of the chain truncated to {a : |a|_1 <= max_total}, with
/// jumps leaving the set dropped (reflecting truncation).
struct TruncatedStationary {
  int dimension = 0;
  Count max_total = 0;
  std::vector<double> pmf;  // indexed by ball_index()
  double tail_bound = 0.0;  // Poisson tail beyond max_total (if lumpable)

  double at(std::span<const Count> a) const;
};

/// Position of a in the ball |a|_1 <= N: totals ascending, then simplex rank.
std::uint64_t ball_index(std::span<const Count> a);

inline constexpr std::uint64_t kMaxTruncatedStates = 2'000'000;
inline constexpr std::uint64_t kDenseSolveThreshold = 2'000;

/// Solves pi Q = 0 on the lattice |a|_1 <= max_total with inflows blocked at
/// the top level, normalized to one. Dense LU up to kDenseSolveThreshold
/// states; above it BiCGSTAB, falling back to sparse LU if the iteration
/// breaks down. Throws ResourceCapError above kMaxTruncatedStates.
TruncatedStationary truncated_stationary_solve(const ReactionNetwork& net,
                                               Count max_total);

/// Total variation between the oracle and the closed-form law renormalized
/// on the same truncated set.
double truncated_total_variation(const TruncatedStationary& oracle,
                                 const MixtureStationary& law);

/// LV(x) for V(x) = exp(|x|_1), in closed form:
///   V(x) [(e^-1 - 1) sum_i delta_i x_i + (e - 1) sum_i lambda_i].
double lyapunov_drift(const ReactionNetwork& net, const State& x);

/// Contribution of the autocatalytic channels to LV(x), summed directly.
double autocatalytic_drift(const ReactionNetwork& net, const State& x);

/// Constants with LV(x) <= -C V(x) + D for every state.
struct DriftCertificate {
  double c = 1.0;
  double d = 0.0;
  double log_d = 0.0;
  /// LV + C V > 0 only where sum_i delta_i x_i < threshold.
  double threshold = 0.0;
};

DriftCertificate drift_certificate(const ReactionNetwork& net, double c = 1.0);

/// Certificate plus an exhaustive check of the drift inequality over
/// |x|_1 <= scan_bound using the generator summed over propensities.
VerificationReport drift_report(const ReactionNetwork& net, Count scan_bound);

inline constexpr std::uint64_t kMinMomentEnsemble = 1000;

/// z-scores of the empirical mean and covariance of X(T)/V against
/// analytic_moments. Passes when every |z| <= 3. Throws
/// UndersizedEnsembleError below kMinMomentEnsemble end states.
VerificationReport moment_zscore_report(const EnsembleResult& ens,
                                        const MixtureStationary& law,
                                        double volume);

}  // namespace autocat
