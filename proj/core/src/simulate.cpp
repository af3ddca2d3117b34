#include "autocat/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "autocat/error.hpp"
#include "autocat/lattice.hpp"

namespace autocat {

DirectMethod::DirectMethod(const ReactionNetwork& net)
    : net_(&net), rates_(net.channels().size(), 0.0) {}

double DirectMethod::propose(std::span<const Count> x, CounterRng& rng) {
  const auto channels = net_->channels();
  double total = 0.0;
  for (std::size_t k = 0; k < channels.size(); ++k) {
    const Channel& c = channels[k];
    double rate = c.coefficient;
    switch (c.kind) {
      case TransitionKind::kInflow:
        break;
      case TransitionKind::kOutflow:
        rate *= static_cast<double>(x[static_cast<std::size_t>(c.from)]);
        break;
      case TransitionKind::kAutocatalytic:
        rate *= static_cast<double>(x[static_cast<std::size_t>(c.from)]) *
                static_cast<double>(x[static_cast<std::size_t>(c.to)]);
        break;
    }
    rates_[k] = rate;
    total += rate;
  }

  const double wait = -std::log(rng.uniform_open()) / total;
  const double target = rng.uniform() * total;

  std::size_t chosen = channels.size();
  double cumulative = 0.0;
  for (std::size_t k = 0; k < channels.size(); ++k) {
    if (rates_[k] <= 0.0) continue;
    chosen = k;
    cumulative += rates_[k];
    if (target < cumulative) break;
  }
  // Inflow channels always have positive rate, so `chosen` is valid; if
  // round-off left target >= cumulative the last positive channel fires.
  last_ = chosen;
  return wait;
}

void DirectMethod::fire(std::span<Count> x) const {
  const Channel& c = net_->channels()[last_];
  auto& from = x[static_cast<std::size_t>(c.from)];
  switch (c.kind) {
    case TransitionKind::kInflow:
      if (from == std::numeric_limits<Count>::max()) {
        throw ResourceCapError("molecule count overflow");
      }
      ++from;
      break;
    case TransitionKind::kOutflow:
      --from;
      break;
    case TransitionKind::kAutocatalytic:
      --from;
      ++x[static_cast<std::size_t>(c.to)];
      break;
  }
}

StepResult ssa_step(const ReactionNetwork& net, const State& x,
                    CounterRng& rng) {
  check_state(net, x);
  DirectMethod method(net);
  std::vector<Count> counts(x.counts().begin(), x.counts().end());
  const double wait = method.step(counts, rng);
  const Channel& c = net.channels()[method.last_channel()];
  double rate = c.coefficient;
  if (c.kind == TransitionKind::kOutflow) {
    rate *= static_cast<double>(x[c.from]);
  } else if (c.kind == TransitionKind::kAutocatalytic) {
    rate *= static_cast<double>(x[c.from]) * static_cast<double>(x[c.to]);
  }
  return {wait, State(std::move(counts)), Transition{c.kind, c.from, c.to, rate}};
}

namespace {

void check_end_time(double end_time) {
  if (!(end_time > 0.0) || !std::isfinite(end_time)) {
    throw DomainError("simulation end time must be positive and finite");
  }
}

[[noreturn]] void throw_cap(std::uint64_t cap) {
  throw ResourceCapError("event cap of " + std::to_string(cap) +
                         " events exceeded");
}

// Runs the SSA on `counts` until end_time, calling on_event(time) after every
// jump.
template <class OnEvent>
void run(const ReactionNetwork& net, std::vector<Count>& counts,
         double end_time, std::uint64_t seed, std::uint64_t cap,
         OnEvent&& on_event) {
  DirectMethod method(net);
  CounterRng rng(seed);
  double t = 0.0;
  std::uint64_t events = 0;
  for (;;) {
    const double wait = method.propose(counts, rng);
    if (t + wait > end_time) return;
    if (events == cap) throw_cap(cap);
    ++events;
    t += wait;
    method.fire(counts);
    on_event(t);
  }
}

}  // namespace

Trajectory simulate_trajectory(const ReactionNetwork& net, const State& x0,
                               double end_time, std::uint64_t seed,
                               const SimulationOptions& options) {
  check_state(net, x0);
  check_end_time(end_time);
  Trajectory traj;
  traj.initial_state = x0;
  traj.end_time = end_time;
  traj.seed = seed;
  std::vector<Count> counts(x0.counts().begin(), x0.counts().end());
  run(net, counts, end_time, seed, options.event_cap, [&](double t) {
    traj.events.push_back({t, State(counts)});
  });
  return traj;
}

State simulate_end_state(const ReactionNetwork& net, const State& x0,
                         double end_time, std::uint64_t seed,
                         const SimulationOptions& options) {
  check_state(net, x0);
  check_end_time(end_time);
  std::vector<Count> counts(x0.counts().begin(), x0.counts().end());
  run(net, counts, end_time, seed, options.event_cap, [](double) {});
  return State(std::move(counts));
}

EnsembleResult ensemble_sample(const ReactionNetwork& net, const State& x0,
                               double end_time, std::uint64_t n_traj,
                               std::uint64_t master_seed,
                               const SimulationOptions& options) {
  check_state(net, x0);
  check_end_time(end_time);
  if (n_traj < 1) throw DomainError("ensemble needs at least one trajectory");

  EnsembleResult ens;
  ens.config = {n_traj, end_time, master_seed};
  ens.initial_state = x0;
  ens.seeds.resize(n_traj);
  for (std::uint64_t k = 0; k < n_traj; ++k) {
    ens.seeds[k] = stream_seed(master_seed, k);
  }
  ens.end_states.resize(n_traj);

  unsigned workers = options.threads != 0 ? options.threads
                                          : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(
      std::clamp<std::uint64_t>(workers == 0 ? 1 : workers, 1, n_traj));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t k = next.fetch_add(1);
      if (k >= n_traj) return;
      try {
        ens.end_states[k] =
            simulate_end_state(net, x0, end_time, ens.seeds[k], options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_traj);
        return;
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return ens;
}

ConditionalHistogram empirical_conditional(const EnsembleResult& ens, Count n) {
  if (n < 0) throw DomainError("total must be nonnegative");
  const int d = ens.end_states.empty() ? ens.initial_state.dimension()
                                       : ens.end_states.front().dimension();
  if (d < 1) throw EmptySliceError("ensemble has no end states");
  ConditionalHistogram hist;
  hist.total = n;
  hist.support = simplex_points(d, n);
  hist.pmf.assign(hist.support.size(), 0.0);
  for (const State& s : ens.end_states) {
    if (s.total() != n) continue;
    hist.pmf[simplex_rank(s.counts())] += 1.0;
    ++hist.retained;
  }
  if (hist.retained == 0) {
    throw EmptySliceError("no end state has total " + std::to_string(n));
  }
  for (double& p : hist.pmf) p /= static_cast<double>(hist.retained);
  return hist;
}

std::vector<double> LumpedPath::occupancy(Count max_total) const {
  std::vector<double> occ(static_cast<std::size_t>(max_total + 1), 0.0);
  auto add = [&](Count n, double dt) {
    if (n >= 0 && n <= max_total) occ[static_cast<std::size_t>(n)] += dt;
  };
  double t = 0.0;
  Count n = initial_total;
  for (const auto& [time, total] : jumps) {
    add(n, time - t);
    t = time;
    n = total;
  }
  add(n, end_time - t);
  for (double& o : occ) o /= end_time;
  return occ;
}

LumpedPath lumped_projection(const Trajectory& traj) {
  LumpedPath path;
  path.initial_total = traj.initial_state.total();
  path.end_time = traj.end_time;
  Count current = path.initial_total;
  for (const TrajectoryEvent& e : traj.events) {
    const Count n = e.state.total();
    if (n != current) {
      path.jumps.emplace_back(e.time, n);
      current = n;
    }
  }
  return path;
}

double DitStats::dominant_fraction() const {
  double dwell = 0.0;
  for (double d : dominant_dwell) dwell += d;
  return end_time > 0.0 ? dwell / end_time : 0.0;
}

DitStats dit_statistics(const Trajectory& traj, double epsilon, Count min_total) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("epsilon must lie in (0, 1)");
  }
  const int d = traj.initial_state.dimension();
  DitStats stats;
  stats.epsilon = epsilon;
  stats.min_total = min_total;
  stats.end_time = traj.end_time;
  stats.dominant_dwell.assign(static_cast<std::size_t>(d), 0.0);

  auto label = [&](const State& s) -> std::optional<int> {
    const Count n = s.total();
    if (n < min_total || n == 0) return std::nullopt;
    const double threshold = epsilon * static_cast<double>(n);
    std::optional<int> best;
    for (int i = 0; i < d; ++i) {
      if (static_cast<double>(s[i]) >= threshold &&
          (!best || s[i] > s[*best])) {
        best = i;
      }
    }
    return best;
  };

  std::optional<int> last_dominant;
  auto enter = [&](std::optional<int> species, double t) {
    if (!stats.pattern_sequence.empty() &&
        stats.pattern_sequence.back().species == species) {
      return;
    }
    stats.pattern_sequence.push_back({species, t});
    if (species) {
      if (last_dominant && *last_dominant != *species) ++stats.n_switches;
      last_dominant = species;
    }
  };

  std::optional<int> current = label(traj.initial_state);
  enter(current, 0.0);
  double t = 0.0;
  for (const TrajectoryEvent& e : traj.events) {
    if (current) stats.dominant_dwell[static_cast<std::size_t>(*current)] += e.time - t;
    t = e.time;
    current = label(e.state);
    enter(current, t);
  }
  if (current) {
    stats.dominant_dwell[static_cast<std::size_t>(*current)] += traj.end_time - t;
  }
  return stats;
}

std::string format_real(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value,
                                    std::chars_format::general, 17);
  return std::string(buf, result.ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const int d = traj.initial_state.dimension();
  out << "time";
  for (int i = 1; i <= d; ++i) out << ",a_" << i;
  out << '\n';
  auto row = [&](double t, const State& s) {
    out << format_real(t);
    for (Count c : s.counts()) out << ',' << c;
    out << '\n';
  };
  row(0.0, traj.initial_state);
  for (const TrajectoryEvent& e : traj.events) row(e.time, e.state);
}

void write_ensemble_csv(std::ostream& out, const EnsembleResult& ens) {
  const int d = ens.end_states.empty() ? ens.initial_state.dimension()
                                       : ens.end_states.front().dimension();
  out << "traj_id,seed";
  for (int i = 1; i <= d; ++i) out << ",a_" << i;
  out << '\n';
  for (std::size_t k = 0; k < ens.end_states.size(); ++k) {
    out << k << ',' << ens.seeds[k];
    for (Count c : ens.end_states[k].counts()) out << ',' << c;
    out << '\n';
  }
}

}  // namespace autocat
