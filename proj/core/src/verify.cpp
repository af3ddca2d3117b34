#include "autocat/verify.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>
#include <numeric>
#include <sstream>

#include "autocat/error.hpp"
#include "autocat/lattice.hpp"

namespace autocat {

namespace {

using Json = nlohmann::ordered_json;

std::vector<double> log_pmf_table(const ConditionalLaw& law, Count m) {
  std::vector<double> table;
  if (m < 0) return table;
  const int d = dimension_of(law);
  table.reserve(static_cast<std::size_t>(simplex_size(d, m)));
  for_each_simplex_point(d, m, [&](std::span<const Count> a) {
    table.push_back(log_conditional_pmf(law, m, a));
  });
  return table;
}

std::string describe(std::span<const Count> a) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < a.size(); ++i) out << (i ? "," : "") << a[i];
  out << ')';
  return out.str();
}

void keep_worst(VerificationReport& merged, const VerificationReport& part) {
  merged.max_abs_residual = std::max(merged.max_abs_residual, part.max_abs_residual);
  if (!merged.worst_state || part.max_rel_residual > merged.max_rel_residual) {
    merged.max_rel_residual = part.max_rel_residual;
    merged.worst_total = part.worst_total;
    merged.worst_state = part.worst_state;
  }
}

}  // namespace

std::optional<double> VerificationReport::metric(std::string_view name) const {
  for (const auto& [key, value] : metrics) {
    if (key == name) return value;
  }
  return std::nullopt;
}

std::string to_json(const VerificationReport& report) {
  Json params = Json::object();
  for (const auto& [key, value] : report.params) {
    std::visit([&](const auto& v) { params[key] = v; }, value);
  }
  Json worst = nullptr;
  if (report.worst_state || report.worst_total) {
    worst = Json::object();
    if (report.worst_total) worst["n"] = *report.worst_total;
    if (report.worst_state) {
      const auto counts = report.worst_state->counts();
      worst["a"] = std::vector<Count>(counts.begin(), counts.end());
    }
  }
  Json metrics = Json::object();
  for (const auto& [key, value] : report.metrics) metrics[key] = value;

  Json j;
  j["check"] = report.check_name;
  j["params"] = params;
  j["max_rel_residual"] = report.max_rel_residual;
  j["worst_case"] = worst;
  j["tolerance"] = report.tolerance;
  j["passed"] = report.passed;
  j["notes"] = report.notes;
  j["max_abs_residual"] = report.max_abs_residual;
  j["metrics"] = metrics;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Lumpability

VerificationReport lumpability_check(const ReactionNetwork& net, Count n_max) {
  if (n_max < 1) throw DomainError("lumpability check needs n_max >= 1");
  const int d = net.dimension();

  // Group species by identical outflow constant so that equal deltas give
  // delta * n bit for bit.
  std::vector<double> group_rate;
  std::vector<int> group_of(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const double delta = net.delta()[static_cast<std::size_t>(i)];
    auto it = std::find(group_rate.begin(), group_rate.end(), delta);
    group_of[static_cast<std::size_t>(i)] =
        static_cast<int>(it - group_rate.begin());
    if (it == group_rate.end()) group_rate.push_back(delta);
  }
  auto down_rate = [&](std::span<const Count> a) {
    std::vector<Count> mass(group_rate.size(), 0);
    for (int i = 0; i < d; ++i) {
      mass[static_cast<std::size_t>(group_of[static_cast<std::size_t>(i)])] +=
          a[static_cast<std::size_t>(i)];
    }
    double rate = 0.0;
    for (std::size_t g = 0; g < group_rate.size(); ++g) {
      rate += group_rate[g] * static_cast<double>(mass[g]);
    }
    return rate;
  };
  auto up_rate = [&](std::span<const Count>) {
    double rate = 0.0;
    for (const Channel& c : net.channels()) {
      if (c.kind == TransitionKind::kInflow) rate += c.coefficient;
    }
    return rate;
  };
  const double up_reference = net.total_inflow();

  VerificationReport report;
  report.check_name = "lumpability";
  report.params = {{"dimension", std::int64_t{d}},
                   {"topology", std::string(to_string(net.topology()))},
                   {"n_max", std::int64_t{n_max}},
                   {"delta", std::vector<double>(net.delta().begin(), net.delta().end())}};
  report.tolerance = 0.0;

  std::optional<State> first_violation;
  std::optional<Count> first_violation_n;
  double first_seen = 0.0;
  double first_expected = 0.0;
  for (Count n = 0; n <= n_max; ++n) {
    std::optional<double> down_reference;
    for_each_simplex_point(d, n, [&](std::span<const Count> a) {
      const double down = down_rate(a);
      if (!down_reference) down_reference = down;
      const double up_gap = std::abs(up_rate(a) - up_reference);
      const double down_gap = std::abs(down - *down_reference);
      const double gap = std::max(up_gap, down_gap);
      if (gap > report.max_abs_residual) {
        report.max_abs_residual = gap;
        report.max_rel_residual =
            *down_reference > 0.0 ? down_gap / *down_reference : up_gap / up_reference;
        report.worst_total = n;
        report.worst_state = State(std::vector<Count>(a.begin(), a.end()));
      }
      if (gap > 0.0 && !first_violation) {
        first_violation = State(std::vector<Count>(a.begin(), a.end()));
        first_violation_n = n;
        first_seen = down;
        first_expected = *down_reference;
      }
    });
  }
  report.passed = !first_violation;
  if (first_violation) {
    // Point at the first violation rather than the largest one.
    report.worst_total = first_violation_n;
    report.worst_state = first_violation;
    std::ostringstream notes;
    notes.precision(17);
    notes << "rate into E_" << (*first_violation_n - 1) << " from "
          << describe(first_violation->counts()) << " is " << first_seen
          << ", other states of E_" << *first_violation_n << " give "
          << first_expected;
    report.notes = notes.str();
  } else {
    report.notes = "exit rates are constant on every block E_n";
  }
  return report;
}

// ---------------------------------------------------------------------------
// Master equation

VerificationReport master_equation_residual(const ReactionNetwork& net,
                                            const ConditionalLaw& law, Count n,
                                            double tolerance) {
  const int d = net.dimension();
  if (dimension_of(law) != d) {
    throw DomainError("conditional law and network differ in dimension");
  }
  if (n < 0) throw DomainError("total must be nonnegative");
  const double delta = net.common_outflow();
  const double inflow = net.total_inflow();
  const auto lambda = net.lambda();

  const auto below = log_pmf_table(law, n - 1);
  const auto here = log_pmf_table(law, n);
  const auto above = log_pmf_table(law, n + 1);

  std::vector<std::pair<int, int>> pairs;
  for (const Channel& c : net.channels()) {
    if (c.kind == TransitionKind::kAutocatalytic) pairs.emplace_back(c.from, c.to);
  }

  VerificationReport report;
  report.check_name = "master-eq";
  report.params = {{"dimension", std::int64_t{d}},
                   {"topology", std::string(to_string(net.topology()))},
                   {"n", std::int64_t{n}}};
  report.tolerance = tolerance;
  report.passed = true;

  std::vector<Count> b(static_cast<std::size_t>(d));
  std::size_t index = 0;
  for_each_simplex_point(d, n, [&](std::span<const Count> a) {
    const double log_pi = here[index++];
    auto ratio = [&](const std::vector<double>& table) {
      return std::exp(table[simplex_rank(b)] - log_pi);
    };

    // Everything is divided by pi(a|n).
    double exit = inflow + delta * static_cast<double>(n);
    for (const auto& [i, j] : pairs) {
      exit += net.kappa(i, j) * static_cast<double>(a[static_cast<std::size_t>(i)]) *
              static_cast<double>(a[static_cast<std::size_t>(j)]);
    }

    double from_below = 0.0;
    for (int i = 0; i < d; ++i) {
      if (a[static_cast<std::size_t>(i)] == 0) continue;
      std::copy(a.begin(), a.end(), b.begin());
      --b[static_cast<std::size_t>(i)];
      from_below += lambda[static_cast<std::size_t>(i)] * ratio(below);
    }
    from_below *= delta * static_cast<double>(n) / inflow;

    // a is entered from a + e_i - e_j by A_i + A_j -> 2 A_j.
    double within = 0.0;
    for (const auto& [i, j] : pairs) {
      if (a[static_cast<std::size_t>(j)] == 0) continue;
      std::copy(a.begin(), a.end(), b.begin());
      ++b[static_cast<std::size_t>(i)];
      --b[static_cast<std::size_t>(j)];
      within += net.kappa(i, j) * static_cast<double>(b[static_cast<std::size_t>(i)]) *
                static_cast<double>(b[static_cast<std::size_t>(j)]) * ratio(here);
    }

    double from_above = 0.0;
    for (int i = 0; i < d; ++i) {
      std::copy(a.begin(), a.end(), b.begin());
      ++b[static_cast<std::size_t>(i)];
      from_above += static_cast<double>(b[static_cast<std::size_t>(i)]) * ratio(above);
    }
    from_above *= inflow / static_cast<double>(n + 1);

    const double entry = from_below + within + from_above;
    const double rel = std::abs(exit - entry) / exit;
    const double pi = std::exp(log_pi);
    const double r_abs = exit * pi;
    const double abs = std::abs(exit - entry) * pi;
    const bool ok = rel <= tolerance || (r_abs < 1.0 && abs <= 1e-12);
    if (!ok) report.passed = false;
    report.max_abs_residual = std::max(report.max_abs_residual, abs);
    if (!report.worst_state || rel > report.max_rel_residual) {
      report.max_rel_residual = rel;
      report.worst_total = n;
      report.worst_state = State(std::vector<Count>(a.begin(), a.end()));
    }
  });

  const bool uniform = std::holds_alternative<UniformSimplex>(law);
  std::ostringstream notes;
  notes << (uniform ? "uniform-simplex" : "dirichlet-multinomial")
        << " ansatz; within-block inflow summed over " << pairs.size()
        << " autocatalytic pairs";
  report.notes = notes.str();
  return report;
}

VerificationReport master_equation_sweep(const ReactionNetwork& net,
                                         const ConditionalLaw& law,
                                         Count n_min, Count n_max,
                                         double tolerance) {
  if (n_min < 0 || n_max < n_min) throw DomainError("invalid total range");
  VerificationReport merged;
  merged.check_name = "master-eq";
  merged.tolerance = tolerance;
  merged.passed = true;
  for (Count n = n_min; n <= n_max; ++n) {
    const VerificationReport part = master_equation_residual(net, law, n, tolerance);
    if (n == n_min) merged.notes = part.notes;
    merged.passed = merged.passed && part.passed;
    keep_worst(merged, part);
  }
  merged.params = {{"dimension", std::int64_t{net.dimension()}},
                   {"topology", std::string(to_string(net.topology()))},
                   {"n_min", std::int64_t{n_min}},
                   {"n_max", std::int64_t{n_max}}};
  if (const auto* dm = std::get_if<DirichletMultinomial>(&law)) {
    merged.params.emplace_back("alpha", dm->alpha);
  }
  return merged;
}

// ---------------------------------------------------------------------------
// Recurrences

VerificationReport recurrence_check(std::span<const double> alpha, Count n,
                                    std::span<const Count> a, int i, int j,
                                    double tolerance) {
  const int d = static_cast<int>(alpha.size());
  if (static_cast<int>(a.size()) != d) throw DomainError("a and alpha differ in length");
  if (i < 0 || i >= d || j < 0 || j >= d) throw DomainError("species index out of range");
  if (i == j) throw DomainError("recurrence needs distinct species i and j");
  if (std::accumulate(a.begin(), a.end(), Count{0}) != n) {
    throw DomainError("a is not on the simplex E_n");
  }
  if (a[static_cast<std::size_t>(i)] < 1) {
    throw DomainError("recurrence needs a_i >= 1");
  }
  const ConditionalLaw law = DirichletMultinomial{std::vector<double>(alpha.begin(), alpha.end())};
  const double sum_alpha = std::accumulate(alpha.begin(), alpha.end(), 0.0);
  const double ai = static_cast<double>(a[static_cast<std::size_t>(i)]);
  const double aj = static_cast<double>(a[static_cast<std::size_t>(j)]);
  const double wi = alpha[static_cast<std::size_t>(i)];
  const double wj = alpha[static_cast<std::size_t>(j)];
  const double nn = static_cast<double>(n);
  const double pi_a = conditional_pmf(law, n, a);

  VerificationReport report;
  report.check_name = "recurrence";
  report.params = {{"alpha", std::vector<double>(alpha.begin(), alpha.end())},
                   {"n", std::int64_t{n}},
                   {"i", std::int64_t{i}},
                   {"j", std::int64_t{j}}};
  report.tolerance = tolerance;
  report.worst_total = n;
  report.worst_state = State(std::vector<Count>(a.begin(), a.end()));

  auto record = [&](std::string_view name, double lhs, double rhs) {
    const double abs = std::abs(lhs - rhs);
    const double rel = abs / std::max(std::abs(lhs), std::abs(rhs));
    report.metrics.emplace_back(std::string(name), rel);
    report.max_abs_residual = std::max(report.max_abs_residual, abs);
    report.max_rel_residual = std::max(report.max_rel_residual, rel);
  };
  auto shifted = [&](std::initializer_list<std::pair<int, int>> moves) {
    std::vector<Count> b(a.begin(), a.end());
    for (const auto& [k, step] : moves) b[static_cast<std::size_t>(k)] += step;
    return b;
  };

  double up_sum = 0.0;
  for (int k = 0; k < d; ++k) {
    const auto b = shifted({{k, +1}});
    up_sum += static_cast<double>(b[static_cast<std::size_t>(k)]) * conditional_pmf(law, n + 1, b);
  }
  record("up", pi_a, up_sum / (nn + 1.0));

  record("down", conditional_pmf(law, n - 1, shifted({{i, -1}})),
         ai * (nn - 1.0 + sum_alpha) / (nn * (ai - 1.0 + wi)) * pi_a);

  record("exchange", conditional_pmf(law, n, shifted({{i, -1}, {j, +1}})),
         ai * (aj + wj) / ((aj + 1.0) * (ai - 1.0 + wi)) * pi_a);

  const bool uniform = std::all_of(alpha.begin(), alpha.end(), [](double w) { return w == 1.0; });
  if (uniform) {
    const double dd = static_cast<double>(d);
    record("uniform_up", conditional_pmf(law, n + 1, shifted({{i, +1}})),
           (nn + 1.0) / (nn + dd) * pi_a);
    record("uniform_down", conditional_pmf(law, n - 1, shifted({{i, -1}})),
           (nn + dd - 1.0) / nn * pi_a);
  }
  report.passed = report.max_rel_residual <= tolerance;
  report.notes = uniform ? "Dirichlet-multinomial and uniform recurrences"
                         : "Dirichlet-multinomial recurrences";
  return report;
}

// ---------------------------------------------------------------------------
// Truncated generator oracle

std::uint64_t ball_index(std::span<const Count> a) {
  const Count n = std::accumulate(a.begin(), a.end(), Count{0});
  const int d = static_cast<int>(a.size());
  return (n == 0 ? 0 : ball_size(d, n - 1)) + simplex_rank(a);
}

double TruncatedStationary::at(std::span<const Count> a) const {
  if (static_cast<int>(a.size()) != dimension) throw DomainError("dimension mismatch");
  if (std::accumulate(a.begin(), a.end(), Count{0}) > max_total) return 0.0;
  return pmf[ball_index(a)];
}

constexpr double kIterativeTolerance = 1e-14;
constexpr Eigen::Index kIterativeMaxIterations = 20000;
constexpr double kAcceptedResidual = 1e-10;

TruncatedStationary truncated_stationary_solve(const ReactionNetwork& net,
                                               Count max_total) {
  if (max_total < 0) throw DomainError("truncation level must be nonnegative");
  const int d = net.dimension();
  const std::uint64_t size = ball_size(d, max_total);
  if (size > kMaxTruncatedStates) {
    throw ResourceCapError("truncated lattice has " + std::to_string(size) +
                           " states, cap is " + std::to_string(kMaxTruncatedStates));
  }
  const auto n_states = static_cast<Eigen::Index>(size);

  // Transposed generator: entry (target, source) = rate source -> target.
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(size) * (net.channels().size() + 1));
  for (Count n = 0; n <= max_total; ++n) {
    for_each_simplex_point(d, n, [&](std::span<const Count> a) {
      const State x(std::vector<Count>(a.begin(), a.end()));
      const auto source = static_cast<Eigen::Index>(ball_index(a));
      double exit = 0.0;
      for (const Transition& t : propensities(net, x)) {
        if (t.kind == TransitionKind::kInflow && n == max_total) continue;
        const State y = t.apply(x);
        entries.emplace_back(static_cast<Eigen::Index>(ball_index(y.counts())), source, t.rate);
        exit += t.rate;
      }
      entries.emplace_back(source, source, -exit);
    });
  }

  // Unknowns are rescaled as pi = prior * y, with prior the Poisson law of
  // the total spread evenly over each E_n, and each balance row is divided by
  // exit rate * prior. This keeps y near 1 although pi spans many decades.
  // Anchoring y = 1 at one state drops that state's row and unknown; the
  // reduced matrix is nonsingular for an irreducible chain and keeps the
  // generator sparse. The anchor is the central point of the level nearest
  // the prior mean: anchoring on a state of negligible mass (the origin when
  // the mean is large) leaves the reduced system numerically singular.
  double mean_delta = 0.0;
  for (double v : net.delta()) mean_delta += v / d;
  const double prior_mu = net.total_inflow() / mean_delta;
  const Count anchor_total = std::min<Count>(max_total, static_cast<Count>(prior_mu));
  const double log_peak = log_poisson_pmf(prior_mu, anchor_total);
  std::vector<double> prior(static_cast<std::size_t>(size));
  for (Count n = 0; n <= max_total; ++n) {
    const double w = std::exp(log_poisson_pmf(prior_mu, n) - log_peak -
                              std::log(static_cast<double>(simplex_size(d, n))));
    const std::uint64_t first = n == 0 ? 0 : ball_size(d, n - 1);
    std::fill(prior.begin() + static_cast<std::ptrdiff_t>(first),
              prior.begin() + static_cast<std::ptrdiff_t>(first + simplex_size(d, n)), w);
  }
  std::vector<double> row_scale(static_cast<std::size_t>(size), 1.0);
  for (const auto& e : entries) {
    if (e.row() == e.col() && e.value() < 0.0) {
      row_scale[static_cast<std::size_t>(e.row())] =
          1.0 / (-e.value() * prior[static_cast<std::size_t>(e.row())]);
    }
  }

  std::vector<Count> anchor_point(static_cast<std::size_t>(d), anchor_total / d);
  for (Count r = 0; r < anchor_total % d; ++r) ++anchor_point[static_cast<std::size_t>(r)];
  const auto anchor = static_cast<Eigen::Index>(ball_index(anchor_point));
  auto shrink = [anchor](Eigen::Index k) { return k < anchor ? k : k - 1; };

  const Eigen::Index reduced = n_states - 1;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(reduced);
  std::vector<Eigen::Triplet<double>> system;
  system.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.row() == anchor) continue;
    const double v = e.value() * prior[static_cast<std::size_t>(e.col())] *
                     row_scale[static_cast<std::size_t>(e.row())];
    if (e.col() == anchor) {
      rhs(shrink(e.row())) -= v;
    } else {
      system.emplace_back(shrink(e.row()), shrink(e.col()), v);
    }
  }

  Eigen::VectorXd y = Eigen::VectorXd::Zero(reduced);
  if (reduced > 0) {
    Eigen::SparseMatrix<double> sparse(reduced, reduced);
    sparse.setFromTriplets(system.begin(), system.end());
    sparse.makeCompressed();
    if (size <= kDenseSolveThreshold) {
      const Eigen::MatrixXd dense(sparse);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(dense);
      if (!lu.isInvertible()) throw Error("truncated generator system is singular");
      y = lu.solve(rhs);
    } else {
      Eigen::BiCGSTAB<Eigen::SparseMatrix<double>> iterative;
      iterative.setTolerance(kIterativeTolerance);
      iterative.setMaxIterations(kIterativeMaxIterations);
      iterative.compute(sparse);
      y = iterative.solve(rhs);
      // Accept only if every balance equation holds relative to its own
      // outflow; a small global residual is not enough when y spans decades.
      const Eigen::VectorXd r = sparse * y - rhs;
      double residual = 0.0;
      for (Eigen::Index k = 0; k < reduced; ++k) {
        residual = std::max(residual, std::abs(r(k)) / std::abs(y(k)));
      }
      if (!(residual <= kAcceptedResidual)) {
        // BiCGSTAB can break down; fall back to a direct factorization.
        Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
        lu.compute(sparse);
        if (lu.info() != Eigen::Success) throw Error("truncated generator system is singular");
        y = lu.solve(rhs);
        if (lu.info() != Eigen::Success) throw Error("truncated generator solve failed");
      }
    }
  }
  Eigen::VectorXd solution(n_states);
  for (Eigen::Index k = 0; k < n_states; ++k) {
    const double yk = k == anchor ? 1.0 : y(shrink(k));
    solution(k) = yk * prior[static_cast<std::size_t>(k)];
  }

  TruncatedStationary out;
  out.dimension = d;
  out.max_total = max_total;
  out.pmf.resize(static_cast<std::size_t>(size));
  double total = 0.0;
  for (Eigen::Index k = 0; k < n_states; ++k) {
    const double p = std::max(0.0, solution(k));
    out.pmf[static_cast<std::size_t>(k)] = p;
    total += p;
  }
  for (double& p : out.pmf) p /= total;
  // Total count is stochastically below Poisson(sum lambda / min delta).
  const double min_delta = *std::min_element(net.delta().begin(), net.delta().end());
  out.tail_bound = poisson_tail_bound(net.total_inflow() / min_delta, max_total);
  return out;
}

double truncated_total_variation(const TruncatedStationary& oracle,
                                 const MixtureStationary& law) {
  if (law.dimension() != oracle.dimension) throw DomainError("dimension mismatch");
  std::vector<double> analytic;
  analytic.reserve(oracle.pmf.size());
  for (Count n = 0; n <= oracle.max_total; ++n) {
    for_each_simplex_point(oracle.dimension, n, [&](std::span<const Count> a) {
      analytic.push_back(stationary_pmf(law, a));
    });
  }
  const double mass = std::accumulate(analytic.begin(), analytic.end(), 0.0);
  double tv = 0.0;
  for (std::size_t k = 0; k < analytic.size(); ++k) {
    tv += std::abs(oracle.pmf[k] - analytic[k] / mass);
  }
  return 0.5 * tv;
}

// ---------------------------------------------------------------------------
// Foster-Lyapunov drift

namespace {

double weighted_outflow(const ReactionNetwork& net, std::span<const Count> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += net.delta()[i] * static_cast<double>(x[i]);
  }
  return s;
}

// LV(x) / V(x) in closed form.
double drift_ratio(const ReactionNetwork& net, std::span<const Count> x) {
  using std::numbers::e;
  return (1.0 / e - 1.0) * weighted_outflow(net, x) + (e - 1.0) * net.total_inflow();
}

}  // namespace

double lyapunov_drift(const ReactionNetwork& net, const State& x) {
  check_state(net, x);
  return std::exp(static_cast<double>(x.total())) * drift_ratio(net, x.counts());
}

double autocatalytic_drift(const ReactionNetwork& net, const State& x) {
  check_state(net, x);
  // Sum the relative increments V(y)/V(x) - 1 first so that V(x) overflowing
  // cannot turn an exact zero into NaN.
  const double n = static_cast<double>(x.total());
  double relative = 0.0;
  for (const Transition& t : propensities(net, x)) {
    if (t.kind != TransitionKind::kAutocatalytic) continue;
    relative += t.rate * std::expm1(static_cast<double>(t.apply(x).total()) - n);
  }
  return relative == 0.0 ? 0.0 : std::exp(n) * relative;
}

DriftCertificate drift_certificate(const ReactionNetwork& net, double c) {
  using std::numbers::e;
  if (!(c > 0.0)) throw DomainError("drift constant C must be positive");
  DriftCertificate cert;
  cert.c = c;
  const double head = c + (e - 1.0) * net.total_inflow();
  const double slope = 1.0 - 1.0 / e;
  cert.threshold = head / slope;
  // LV + C V = e^m (head - slope * s) with s = sum_i delta_i x_i and m = |x|_1.
  // For fixed m the bracket is largest when s = m * min delta, so
  // D = max_m e^m (head - slope * min_delta * m) over the finitely many m
  // where the bracket is positive.
  const double min_delta = *std::min_element(net.delta().begin(), net.delta().end());
  double best = -INFINITY;
  for (Count m = 0;; ++m) {
    const double bracket = head - slope * min_delta * static_cast<double>(m);
    if (!(bracket > 0.0)) break;
    best = std::max(best, static_cast<double>(m) + std::log(bracket));
  }
  // Relative slack of 1e-9 absorbs round-off in the exhaustive scan.
  cert.log_d = best + 1e-9;
  cert.d = std::exp(cert.log_d);
  return cert;
}

VerificationReport drift_report(const ReactionNetwork& net, Count scan_bound) {
  if (scan_bound < 1) throw DomainError("scan bound must be >= 1");
  const int d = net.dimension();
  const DriftCertificate cert = drift_certificate(net);

  VerificationReport report;
  report.check_name = "drift";
  report.params = {{"dimension", std::int64_t{d}},
                   {"topology", std::string(to_string(net.topology()))},
                   {"scan_bound", std::int64_t{scan_bound}}};
  report.tolerance = 0.0;

  std::uint64_t violations = 0;
  std::uint64_t outside_threshold = 0;
  std::uint64_t scanned = 0;
  double worst_margin = -INFINITY;
  for (Count n = 0; n <= scan_bound; ++n) {
    for_each_simplex_point(d, n, [&](std::span<const Count> a) {
      const State x(std::vector<Count>(a.begin(), a.end()));
      ++scanned;
      // Generator of V applied at x, divided by V(x): sum rate (e^{dm} - 1).
      const double ratio = generator_apply(
          net,
          [&](const State& y) {
            return std::exp(static_cast<double>(y.total() - n));
          },
          x);
      // LV <= -C V + D  <=>  ratio + C <= D e^{-n}
      const double lhs = ratio + cert.c;
      const double rhs = std::exp(cert.log_d - static_cast<double>(n));
      const double margin = lhs - rhs;
      if (margin > 0.0) ++violations;
      if (lhs > 0.0 && !(weighted_outflow(net, a) < cert.threshold)) ++outside_threshold;
      if (margin > worst_margin) {
        worst_margin = margin;
        report.worst_total = n;
        report.worst_state = x;
      }
      const double closed = drift_ratio(net, a);
      const double gap = std::abs(ratio - closed);
      report.max_abs_residual = std::max(report.max_abs_residual, gap);
      report.max_rel_residual =
          std::max(report.max_rel_residual, gap / std::max(std::abs(closed), 1e-300));
    });
  }
  report.passed = violations == 0 && outside_threshold == 0 && std::isfinite(cert.d);
  report.metrics = {{"C", cert.c},
                    {"D", cert.d},
                    {"log_D", cert.log_d},
                    {"threshold", cert.threshold},
                    {"states_scanned", static_cast<double>(scanned)},
                    {"violations", static_cast<double>(violations)},
                    {"positive_outside_threshold", static_cast<double>(outside_threshold)}};
  std::ostringstream notes;
  notes << "V(x) = exp(|x|_1); residuals compare the generator summed over "
           "propensities with the closed form of LV/V; worst case is the "
           "state closest to violating LV <= -C V + D";
  report.notes = notes.str();
  return report;
}

// ---------------------------------------------------------------------------
// Moments

VerificationReport moment_zscore_report(const EnsembleResult& ens,
                                        const MixtureStationary& law,
                                        double volume) {
  const std::size_t count = ens.end_states.size();
  if (count < kMinMomentEnsemble) {
    throw UndersizedEnsembleError("moment comparison needs at least " +
                                  std::to_string(kMinMomentEnsemble) +
                                  " end states, got " + std::to_string(count));
  }
  const int d = law.dimension();
  if (ens.initial_state.dimension() != d) throw DomainError("dimension mismatch");
  const Moments exact = analytic_moments(law, volume);
  const auto du = static_cast<std::size_t>(d);
  const double nn = static_cast<double>(count);

  std::vector<double> mean(du, 0.0);
  for (const State& s : ens.end_states) {
    for (std::size_t i = 0; i < du; ++i) mean[i] += static_cast<double>(s[static_cast<int>(i)]) / volume;
  }
  for (double& m : mean) m /= nn;

  VerificationReport report;
  report.check_name = "moments";
  report.params = {{"dimension", std::int64_t{d}},
                   {"volume", volume},
                   {"n_traj", static_cast<std::int64_t>(count)},
                   {"end_time", ens.config.end_time},
                   {"master_seed", std::to_string(ens.config.master_seed)}};
  report.tolerance = 3.0;

  auto record = [&](const std::string& name, double estimate, double expected, double se) {
    const double z = (estimate - expected) / se;
    report.metrics.emplace_back(name, z);
    report.metrics.emplace_back(name + "_estimate", estimate);
    report.metrics.emplace_back(name + "_expected", expected);
    report.max_abs_residual = std::max(report.max_abs_residual, std::abs(estimate - expected));
    report.max_rel_residual = std::max(report.max_rel_residual, std::abs(z));
  };

  for (std::size_t i = 0; i < du; ++i) {
    const double se = std::sqrt(exact.covariance(static_cast<int>(i), static_cast<int>(i)) / nn);
    record("z_mean_" + std::to_string(i + 1), mean[i], exact.mean[i], se);
  }
  for (std::size_t i = 0; i < du; ++i) {
    for (std::size_t j = i; j < du; ++j) {
      // Sample covariance and the standard error of its product terms.
      double sum = 0.0;
      double sum_sq = 0.0;
      for (const State& s : ens.end_states) {
        const double prod = (static_cast<double>(s[static_cast<int>(i)]) / volume - mean[i]) *
                            (static_cast<double>(s[static_cast<int>(j)]) / volume - mean[j]);
        sum += prod;
        sum_sq += prod * prod;
      }
      const double cov = sum / (nn - 1.0);
      const double var_prod = (sum_sq - sum * sum / nn) / (nn - 1.0);
      const double se = std::sqrt(var_prod / nn);
      record("z_cov_" + std::to_string(i + 1) + "_" + std::to_string(j + 1), cov,
             exact.covariance(static_cast<int>(i), static_cast<int>(j)), se);
    }
  }
  report.passed = report.max_rel_residual <= report.tolerance;
  report.notes = "max_rel_residual holds the largest |z|; mean z-scores use the "
                 "analytic variance, covariance z-scores the empirical variance "
                 "of the centred products";
  return report;
}

}  // namespace autocat
