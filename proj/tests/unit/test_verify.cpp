#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>
#include <random>

#include "autocat/analytic.hpp"
#include "autocat/error.hpp"
#include "autocat/lattice.hpp"
#include "autocat/simulate.hpp"
#include "autocat/verify.hpp"
#include "support/oracles.hpp"

namespace autocat {
namespace {

ReactionNetwork two_species() {
  return create_network(2, Topology::kFullSymmetric, 0.05, 0.2, 0.01);
}

ReactionNetwork unit_mixture() {
  return create_network(2, Topology::kFullSymmetric, 0.05, 0.05, 0.1);
}

TEST(Lumpability, EqualOutflowIsExact) {
  const VerificationReport r = lumpability_check(two_species(), 30);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.max_abs_residual, 0.0);
  EXPECT_EQ(r.max_rel_residual, 0.0);
}

TEST(Lumpability, UnequalOutflowFails) {
  const ReactionNetwork net = create_network(2, Topology::kFullSymmetric, 0.05, 0.2,
                                             std::vector<double>{0.01, 0.02});
  const VerificationReport r = lumpability_check(net, 5);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.max_abs_residual, 0.0);
  ASSERT_TRUE(r.worst_total.has_value());
  EXPECT_FALSE(r.notes.empty());
}

TEST(Lumpability, RandomNetworksProperty) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> rate(0.01, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 5;
    std::vector<std::vector<double>> kappa(d, std::vector<double>(d, 0.0));
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (i != j) kappa[i][j] = rate(gen);
      }
    }
    std::vector<double> lambda(d), delta(d, rate(gen));
    for (double& l : lambda) l = rate(gen);
    const bool equal = trial % 2 == 0 || d == 1;
    if (!equal) delta[d - 1] = delta[0] * 1.5;
    const ReactionNetwork net = create_network(d, Topology::kCustom, kappa, lambda, delta);
    const VerificationReport r = lumpability_check(net, d <= 3 ? 10 : 5);
    EXPECT_EQ(r.passed, equal) << "trial " << trial;
  }
}

TEST(MasterEquation, TwoSpeciesDirichletMultinomial) {
  const ReactionNetwork net = two_species();
  const MixtureStationary law = stationary_law(net);
  const VerificationReport r = master_equation_sweep(net, law.conditional, 1, 50);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.max_rel_residual, 1e-9);
  EXPECT_EQ(r.check_name, "master-eq");
}

TEST(MasterEquation, WrongAnsatzIsDetected) {
  const VerificationReport r = master_equation_sweep(two_species(), UniformSimplex{2}, 1, 30);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.max_rel_residual, 1e-3);
}

TEST(MasterEquation, FullSymmetricUnequalInflowsProperty) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> rate(0.05, 2.0);
  for (int d = 3; d <= 5; ++d) {
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<double> lambda(d);
      for (double& l : lambda) l = rate(gen);
      const ReactionNetwork net =
          create_network(d, Topology::kFullSymmetric, rate(gen), lambda, rate(gen));
      const MixtureStationary law = stationary_law(net);
      const VerificationReport r = master_equation_sweep(net, law.conditional, 1, d == 5 ? 12 : 20);
      EXPECT_LE(r.max_rel_residual, 1e-9) << "d=" << d;
    }
  }
}

TEST(MasterEquation, UnequalOutflowRejected) {
  const ReactionNetwork net = create_network(2, Topology::kFullSymmetric, 0.05, 0.2,
                                             std::vector<double>{0.01, 0.02});
  EXPECT_THROW(master_equation_residual(net, DirichletMultinomial{{0.1, 0.1}}, 3),
               HypothesisError);
  EXPECT_THROW(master_equation_residual(two_species(), DirichletMultinomial{{0.1, 0.1, 0.1}}, 3),
               DomainError);
}

TEST(MasterEquation, CycleAtDimensionTwoIsUniform) {
  const ReactionNetwork net = create_network(2, Topology::kTkCycle, 0.05, 0.2, 0.1);
  EXPECT_LE(master_equation_sweep(net, UniformSimplex{2}, 1, 30).max_rel_residual, 1e-9);
}

TEST(MasterEquation, CycleUniformFailsOnBoundary) {
  // d = 3 at delta = 3 kappa / 2. At a = (0, 7, 1) the in- and outflow
  // differ by (4/3 delta + kappa) pi(a|8) against an outflow of
  // (3 lambda + 8 delta + 7 kappa) pi(a|8).
  const double kappa = 0.03, delta = 0.045, lambda = 0.1;
  const ReactionNetwork net = create_network(3, Topology::kTkCycle, kappa, lambda, delta);
  const VerificationReport r = master_equation_sweep(net, UniformSimplex{3}, 1, 8);
  EXPECT_FALSE(r.passed);
  const double expected = (4.0 / 3.0 * delta + kappa) / (3 * lambda + 8 * delta + 7 * kappa);
  EXPECT_NEAR(r.max_rel_residual, expected, 1e-12);
  ASSERT_TRUE(r.worst_state.has_value());
  EXPECT_EQ(*r.worst_state, (State{0, 7, 1}));

  // Small totals still balance.
  EXPECT_LE(master_equation_residual(net, UniformSimplex{3}, 2).max_rel_residual, 1e-9);

  // Off the critical relation the residual is larger still.
  const ReactionNetwork off = create_network(3, Topology::kTkCycle, kappa, lambda, 0.09);
  EXPECT_GT(master_equation_sweep(off, UniformSimplex{3}, 1, 8).max_rel_residual, 1e-3);
}

TEST(Recurrence, Examples) {
  const std::vector<double> unit{1.0, 1.0};
  const std::vector<Count> a{1, 2};
  const VerificationReport r = recurrence_check(unit, 3, a, 0, 1);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.metric("uniform_up").has_value());
  EXPECT_LE(r.max_rel_residual, 1e-10);

  const std::vector<double> tenth{0.1, 0.1};
  const std::vector<Count> b{0, 3};
  EXPECT_THROW(recurrence_check(tenth, 3, b, 0, 1), DomainError);
  EXPECT_THROW(recurrence_check(tenth, 3, a, 1, 1), DomainError);
}

TEST(Recurrence, RandomProperty) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> weight(0.01, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + trial % 4;
    std::vector<double> alpha(d);
    for (double& x : alpha) x = weight(gen);
    const Count n = 1 + static_cast<Count>(gen() % 40);
    std::vector<Count> a(d, 0);
    for (Count k = 0; k < n; ++k) ++a[gen() % d];
    int i = 0;
    while (a[i] == 0) ++i;
    const int j = (i + 1 + static_cast<int>(gen() % (d - 1))) % d;
    const VerificationReport r = recurrence_check(alpha, n, a, i, j);
    ASSERT_TRUE(r.passed) << r.max_rel_residual;
  }
}

TEST(Oracle, BallIndexMatchesEnumeration) {
  for (int d = 1; d <= 4; ++d) {
    std::uint64_t k = 0;
    for (Count n = 0; n <= 8; ++n) {
      for_each_simplex_point(d, n, [&](std::span<const Count> a) { ASSERT_EQ(ball_index(a), k++); });
    }
    EXPECT_EQ(k, ball_size(d, 8));
  }
}

TEST(Oracle, UnitMixture) {
  const ReactionNetwork net = unit_mixture();
  const TruncatedStationary o = truncated_stationary_solve(net, 25);
  EXPECT_EQ(o.pmf.size(), ball_size(2, 25));
  EXPECT_LE(truncated_total_variation(o, stationary_law(net)), 1e-6);
  EXPECT_LE(o.tail_bound, 1e-15);
  double sum = 0.0;
  for (double p : o.pmf) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Oracle, BirthDeathControl) {
  const ReactionNetwork net = create_network(1, Topology::kFullSymmetric, 0.0, 0.3, 0.1);
  const TruncatedStationary o = truncated_stationary_solve(net, 60);
  const std::vector<double> ref = oracle::poisson_table(3.0, 60);
  double mass = 0.0;
  for (double p : ref) mass += p;
  std::vector<double> renorm;
  for (double p : ref) renorm.push_back(p / mass);
  EXPECT_LE(oracle::total_variation(o.pmf, renorm), 1e-10);
}

TEST(Oracle, SparsePathMatchesClosedForm) {
  // 3655 states: above the dense threshold.
  const ReactionNetwork net = two_species();
  const TruncatedStationary o = truncated_stationary_solve(net, 84);
  EXPECT_GT(o.pmf.size(), kDenseSolveThreshold);
  EXPECT_LE(truncated_total_variation(o, stationary_law(net)), 1e-8);

  const ReactionNetwork three = create_network(3, Topology::kFullSymmetric, 0.2,
                                               std::vector<double>{0.1, 0.3, 0.2}, 0.3);
  const MixtureStationary law = stationary_law(three);
  EXPECT_LE(truncated_total_variation(truncated_stationary_solve(three, 12), law), 1e-6);
  EXPECT_LE(truncated_total_variation(truncated_stationary_solve(three, 30), law), 1e-8);
}

TEST(Oracle, CycleDisagreesWithUniformAnsatz) {
  const ReactionNetwork net = create_network(3, Topology::kTkCycle, 0.1, 0.1, 0.15);
  const MixtureStationary law = stationary_law(net);
  const TruncatedStationary o = truncated_stationary_solve(net, 25);
  EXPECT_LE(o.tail_bound, 1e-12);
  EXPECT_GT(truncated_total_variation(o, law), 1e-2);
  // The lumped marginal is still Poisson.
  std::vector<double> totals(26, 0.0);
  for (Count n = 0; n <= 25; ++n) {
    for_each_simplex_point(3, n, [&](std::span<const Count> a) { totals[n] += o.at(a); });
  }
  const std::vector<double> ref = oracle::poisson_table(2.0, 25);
  EXPECT_LE(oracle::total_variation(totals, ref), 1e-10);
}

TEST(Oracle, SizeCap) {
  EXPECT_THROW(truncated_stationary_solve(
                   create_network(5, Topology::kFullSymmetric, 0.1, 0.1, 0.1), 100),
               ResourceCapError);
}

TEST(Drift, TwoSpeciesCertificate) {
  const ReactionNetwork net = two_species();
  EXPECT_NEAR(lyapunov_drift(net, State{0, 0}), (std::exp(1.0) - 1.0) * 0.4, 1e-14);
  const DriftCertificate cert = drift_certificate(net);
  EXPECT_EQ(cert.c, 1.0);
  EXPECT_TRUE(std::isfinite(cert.log_d));
  const VerificationReport r = drift_report(net, 200);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.metric("C"), 1.0);
  EXPECT_EQ(r.metric("violations"), 0.0);
  EXPECT_EQ(r.metric("positive_outside_threshold"), 0.0);
  EXPECT_EQ(r.metric("states_scanned"), static_cast<double>(ball_size(2, 200)));
}

TEST(Drift, AutocatalyticTermVanishesProperty) {
  std::mt19937_64 gen(3);
  const ReactionNetwork net = two_species();
  const ReactionNetwork three = create_network(
      3, Topology::kCustom,
      std::vector<std::vector<double>>{{0, 0.2, 0.05}, {0.1, 0, 0.3}, {0.0, 0.7, 0}}, 0.1, 0.2);
  for (int k = 0; k < 10'000; ++k) {
    const State x{static_cast<Count>(gen() % 200), static_cast<Count>(gen() % 200)};
    ASSERT_EQ(autocatalytic_drift(net, x), 0.0);
    const State y{static_cast<Count>(gen() % 50), static_cast<Count>(gen() % 50),
                  static_cast<Count>(gen() % 50)};
    ASSERT_EQ(autocatalytic_drift(three, y), 0.0);
  }
}

TEST(Drift, AutocatalyticTermVanishesBeyondOverflow) {
  // exp(|x|) is infinite here; the exact zero must survive.
  std::mt19937_64 gen(5);
  const ReactionNetwork net = two_species();
  for (int k = 0; k < 1'000; ++k) {
    const State x{static_cast<Count>(gen() % 100'000), static_cast<Count>(gen() % 100'000)};
    ASSERT_EQ(autocatalytic_drift(net, x), 0.0);
  }
}

TEST(Drift, ClosedFormMatchesGenerator) {
  const ReactionNetwork net = two_species();
  auto v = [](const State& y) { return std::exp(static_cast<double>(y.total())); };
  for (Count a = 0; a <= 40; a += 4) {
    for (Count b = 0; b <= 40; b += 3) {
      const State x{a, b};
      const double direct = generator_apply(net, v, x);
      EXPECT_NEAR(lyapunov_drift(net, x), direct, 1e-12 * std::abs(direct));
    }
  }
}

TEST(Moments, ZScoresAtStationarity) {
  const ReactionNetwork net = unit_mixture();
  const EnsembleResult ens = ensemble_sample(net, State{0, 0}, 100.0, 20'000, 31);
  const VerificationReport r = moment_zscore_report(ens, stationary_law(net), 1.0);
  EXPECT_TRUE(r.passed) << r.max_rel_residual;
  EXPECT_TRUE(r.metric("z_mean_1").has_value());
  EXPECT_TRUE(r.metric("z_cov_1_1").has_value());
}

TEST(Moments, PerturbedOutflowDetected) {
  const ReactionNetwork fast = create_network(2, Topology::kFullSymmetric, 0.05, 0.05, 0.15);
  const EnsembleResult ens = ensemble_sample(fast, State{0, 0}, 100.0, 20'000, 32);
  const VerificationReport r = moment_zscore_report(ens, stationary_law(unit_mixture()), 1.0);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.max_rel_residual, 3.0);
}

TEST(Moments, UndersizedEnsemble) {
  const EnsembleResult ens = ensemble_sample(unit_mixture(), State{0, 0}, 10.0, 10, 1);
  EXPECT_THROW(moment_zscore_report(ens, stationary_law(unit_mixture()), 1.0),
               UndersizedEnsembleError);
}

TEST(Report, JsonShape) {
  const VerificationReport r = master_equation_sweep(two_species(), UniformSimplex{2}, 1, 5);
  const auto doc = nlohmann::json::parse(to_json(r));
  for (const char* key : {"check", "params", "max_rel_residual", "worst_case", "tolerance",
                          "passed", "notes"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  EXPECT_EQ(doc["check"], "master-eq");
  EXPECT_EQ(doc["passed"], false);
  EXPECT_TRUE(doc["worst_case"].contains("n"));
  EXPECT_TRUE(doc["worst_case"].contains("a"));
}

}  // namespace
}  // namespace autocat
