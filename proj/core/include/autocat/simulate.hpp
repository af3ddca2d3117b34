#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "autocat/network.hpp"
#include "autocat/rng.hpp"

namespace autocat {

inline constexpr std::uint64_t kDefaultEventCap = 1'000'000'000;

struct SimulationOptions {
  /// Maximum number of events per trajectory before ResourceCapError.
  std::uint64_t event_cap = kDefaultEventCap;
  /// Worker threads for ensembles; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// Gillespie direct method over the network's channel list. Holds a scratch
/// buffer of rates; one instance per thread.
class DirectMethod {
 public:
  explicit DirectMethod(const ReactionNetwork& net);

  /// Draws the waiting time and the next channel at state x without
  /// changing it. The channel is available from last_channel().
  double propose(std::span<const Count> x, CounterRng& rng);

  /// Applies the channel chosen by the last propose() to x.
  void fire(std::span<Count> x) const;

  /// propose() followed by fire().
  double step(std::span<Count> x, CounterRng& rng) {
    const double wait = propose(x, rng);
    fire(x);
    return wait;
  }

  std::size_t last_channel() const noexcept { return last_; }
  const ReactionNetwork& network() const noexcept { return *net_; }

 private:
  const ReactionNetwork* net_;
  std::vector<double> rates_;
  std::size_t last_ = 0;
};

struct StepResult {
  double wait;
  State next;
  Transition transition;
};

/// One exact SSA step from x: wait ~ Exp(total propensity), transition chosen
/// proportionally to its rate.
StepResult ssa_step(const ReactionNetwork& net, const State& x, CounterRng& rng);

struct TrajectoryEvent {
  double time;
  State state;
};

struct Trajectory {
  State initial_state;
  std::vector<TrajectoryEvent> events;
  double end_time = 0.0;
  std::uint64_t seed = 0;

  const State& final_state() const {
    return events.empty() ? initial_state : events.back().state;
  }
};

/// Exact trajectory on [0, end_time] with the RNG keyed by `seed`.
Trajectory simulate_trajectory(const ReactionNetwork& net, const State& x0,
                               double end_time, std::uint64_t seed,
                               const SimulationOptions& options = {});

/// Same dynamics as simulate_trajectory but only the state at end_time is
/// kept; bit-identical to simulate_trajectory(...).final_state().
State simulate_end_state(const ReactionNetwork& net, const State& x0,
                         double end_time, std::uint64_t seed,
                         const SimulationOptions& options = {});

struct EnsembleConfig {
  std::uint64_t n_traj = 0;
  double end_time = 0.0;
  std::uint64_t master_seed = 0;
};

struct EnsembleResult {
  EnsembleConfig config;
  State initial_state;
  std::vector<std::uint64_t> seeds;
  std::vector<State> end_states;
};

/// n_traj independent end states X(end_time). Trajectory k uses
/// stream_seed(master_seed, k).
EnsembleResult ensemble_sample(const ReactionNetwork& net, const State& x0,
                               double end_time, std::uint64_t n_traj,
                               std::uint64_t master_seed,
                               const SimulationOptions& options = {});

/// Normalized histogram of end states on E_n. The support is all of E_n in
/// simplex rank order, unobserved points carrying zero mass.
struct ConditionalHistogram {
  Count total = 0;
  std::vector<State> support;
  std::vector<double> pmf;
  std::uint64_t retained = 0;
};

/// Throws EmptySliceError when no end state has total n.
ConditionalHistogram empirical_conditional(const EnsembleResult& ens, Count n);

/// Path of n(t) = |X(t)|_1 with autocatalytic events removed.
struct LumpedPath {
  Count initial_total = 0;
  std::vector<std::pair<double, Count>> jumps;
  double end_time = 0.0;

  /// Time spent at each total 0..max_total, divided by end_time. Mass above
  /// max_total is dropped.
  std::vector<double> occupancy(Count max_total) const;
};

LumpedPath lumped_projection(const Trajectory& traj);

struct PatternEntry {
  std::optional<int> species;  // nullopt: no dominant species
  double entry_time;
};

/// Switching statistics for discreteness-induced transitions.
struct DitStats {
  double epsilon = 0.0;
  Count min_total = 0;
  std::uint64_t n_switches = 0;
  std::vector<double> dominant_dwell;
  std::vector<PatternEntry> pattern_sequence;
  double end_time = 0.0;

  /// Fraction of [0, end_time] during which some species dominates.
  double dominant_fraction() const;
};

/// Species i dominates while a_i >= epsilon * n and n >= min_total.
/// A switch is a change of dominant species; intervals without a dominant
/// species are recorded in the pattern sequence but do not end a pattern.
DitStats dit_statistics(const Trajectory& traj, double epsilon,
                        Count min_total = 5);

/// Decimal text with 17 significant digits (round-trips a double).
std::string format_real(double value);

/// CSV with header time,a_1,...,a_d; first row is the initial state at t=0.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// CSV with header traj_id,seed,a_1,...,a_d.
void write_ensemble_csv(std::ostream& out, const EnsembleResult& ens);

}  // namespace autocat
