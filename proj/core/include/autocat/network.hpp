#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace autocat {

using Count = std::int64_t;

enum class Topology { kFullSymmetric, kTkCycle, kCustom };

std::string_view to_string(Topology topology);
/// Parses "full-symmetric", "tk-cycle" or "custom".
Topology parse_topology(std::string_view name);

/// Nonnegative molecule counts, one entry per species.
class State {
 public:
  State() = default;
  explicit State(std::vector<Count> counts);
  State(std::initializer_list<Count> counts)
      : State(std::vector<Count>(counts)) {}

  static State zeros(int dimension);

  int dimension() const noexcept { return static_cast<int>(counts_.size()); }
  Count operator[](int i) const { return counts_[static_cast<std::size_t>(i)]; }
  std::span<const Count> counts() const noexcept { return counts_; }
  Count total() const noexcept;

  friend bool operator==(const State&, const State&) = default;
  friend auto operator<=>(const State&, const State&) = default;

 private:
  std::vector<Count> counts_;
};

/// Dense row-major d x d matrix of autocatalytic rate constants.
class RateMatrix {
 public:
  RateMatrix() = default;
  explicit RateMatrix(int dimension, double fill = 0.0)
      : dim_(dimension),
        data_(static_cast<std::size_t>(dimension) * dimension, fill) {}

  int dimension() const noexcept { return dim_; }
  double operator()(int i, int j) const { return data_[index(i, j)]; }
  double& operator()(int i, int j) { return data_[index(i, j)]; }

  friend bool operator==(const RateMatrix&, const RateMatrix&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * dim_ + j;
  }
  int dim_ = 0;
  std::vector<double> data_;
};

/// Scalar broadcast to every species, or one value per species.
using VectorSpec = std::variant<double, std::vector<double>>;
/// Scalar (placed on the topology's pattern) or a full d x d matrix.
using KappaSpec = std::variant<double, std::vector<std::vector<double>>>;

enum class TransitionKind { kAutocatalytic, kInflow, kOutflow };

/// Structural reaction channel. For kAutocatalytic, A_from + A_to -> 2 A_to
/// (jump e_to - e_from, rate coefficient * a_from * a_to). Inflow and outflow
/// act on species `from` (`to == from`).
struct Channel {
  TransitionKind kind;
  int from;
  int to;
  double coefficient;
};

/// A channel evaluated at a particular state.
struct Transition {
  TransitionKind kind;
  int from;
  int to;
  double rate;

  /// Change in species `species` caused by firing this transition.
  int jump(int species) const noexcept;
  /// x + jump. Throws ResourceCapError on count overflow.
  State apply(const State& x) const;
};

/// A reaction network of the autocatalytic inflow/outflow family:
///   A_i + A_j -> 2 A_j   (rate kappa_ij a_i a_j)
///   0 -> A_i             (rate lambda_i)
///   A_i -> 0             (rate delta_i a_i)
/// Immutable once built; construct through create_network().
class ReactionNetwork {
 public:
  int dimension() const noexcept { return dim_; }
  Topology topology() const noexcept { return topology_; }
  const RateMatrix& kappa() const noexcept { return kappa_; }
  double kappa(int i, int j) const { return kappa_(i, j); }
  std::span<const double> lambda() const noexcept { return lambda_; }
  std::span<const double> delta() const noexcept { return delta_; }

  /// Every structural channel, zero-rate ones excluded only when the rate
  /// constant itself is zero. Order: inflows, outflows, then autocatalytic
  /// pairs in row-major (from, to) order.
  std::span<const Channel> channels() const noexcept { return channels_; }

  double total_inflow() const noexcept;
  /// True when every delta_i is bitwise equal to delta_0.
  bool has_equal_outflow() const noexcept;
  /// Common outflow rate; throws HypothesisError if the deltas differ.
  double common_outflow() const;

  /// Largest rate constant on the autocatalytic pattern (0 if none).
  double max_kappa() const noexcept;

  friend ReactionNetwork create_network(int, Topology, const KappaSpec&,
                                        const VectorSpec&, const VectorSpec&);

 private:
  ReactionNetwork() = default;
  void build_channels();

  int dim_ = 0;
  Topology topology_ = Topology::kCustom;
  RateMatrix kappa_;
  std::vector<double> lambda_;
  std::vector<double> delta_;
  std::vector<Channel> channels_;
};

/// Validates and builds a network. Scalars broadcast to all species; a scalar
/// kappa is placed on the topology's zero pattern (all off-diagonal pairs for
/// full-symmetric, j = (i+1) mod d for tk-cycle, rejected for custom).
ReactionNetwork create_network(int dimension, Topology topology,
                               const KappaSpec& kappa, const VectorSpec& lambda,
                               const VectorSpec& delta);

/// Rate constants before volume scaling (kappa', lambda'_i, delta').
struct PrimedParameters {
  KappaSpec kappa = 1.0;
  VectorSpec lambda = 1.0;
  VectorSpec delta = 1.0;

  /// kappa' = 1, lambda'_i = delta' = D.
  static PrimedParameters tk_preset(double rate) {
    return {1.0, rate, rate};
  }
};

/// kappa = kappa'/V, delta = delta', lambda_i = lambda'_i V.
ReactionNetwork apply_volume_scaling(const PrimedParameters& primed,
                                     double volume, int dimension,
                                     Topology topology);

/// Transitions with nonzero rate at x. Their rates sum to total_propensity().
std::vector<Transition> propensities(const ReactionNetwork& net,
                                     const State& x);

double total_propensity(const ReactionNetwork& net, const State& x);

/// (Lf)(x) = sum over transitions of rate * (f(x + jump) - f(x)).
template <class F>
double generator_apply(const ReactionNetwork& net, F&& f, const State& x) {
  const double fx = f(x);
  double sum = 0.0;
  for (const Transition& t : propensities(net, x)) {
    sum += t.rate * (f(t.apply(x)) - fx);
  }
  return sum;
}

/// Throws ValidationError unless x has the network's dimension.
void check_state(const ReactionNetwork& net, const State& x);

}  // namespace autocat
