#include "autocat/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "autocat/error.hpp"

namespace autocat {

namespace {

std::vector<double> broadcast(const VectorSpec& spec, int dim,
                              std::string_view name) {
  if (const auto* scalar = std::get_if<double>(&spec)) {
    return std::vector<double>(static_cast<std::size_t>(dim), *scalar);
  }
  const auto& values = std::get<std::vector<double>>(spec);
  if (static_cast<int>(values.size()) != dim) {
    std::ostringstream msg;
    msg << name << " has " << values.size() << " entries, expected " << dim;
    throw ValidationError(ValidationCode::kDimensionMismatch, msg.str());
  }
  return values;
}

bool on_pattern(Topology topology, int dim, int i, int j) {
  switch (topology) {
    case Topology::kFullSymmetric:
      return i != j;
    case Topology::kTkCycle:
      return j == (i + 1) % dim;
    case Topology::kCustom:
      return i != j;
  }
  return false;
}

RateMatrix build_kappa(const KappaSpec& spec, Topology topology, int dim) {
  RateMatrix kappa(dim);
  if (const auto* scalar = std::get_if<double>(&spec)) {
    if (topology == Topology::kCustom) {
      throw ValidationError(ValidationCode::kTopologyPattern,
                            "custom topology needs a full kappa matrix");
    }
    if (!(*scalar >= 0.0) || !std::isfinite(*scalar)) {
      throw ValidationError(ValidationCode::kNegativeKappa,
                            "kappa must be a finite nonnegative number");
    }
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        if (on_pattern(topology, dim, i, j)) kappa(i, j) = *scalar;
      }
    }
    return kappa;
  }

  const auto& rows = std::get<std::vector<std::vector<double>>>(spec);
  if (static_cast<int>(rows.size()) != dim) {
    throw ValidationError(ValidationCode::kDimensionMismatch,
                          "kappa must have d rows");
  }
  for (int i = 0; i < dim; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != dim) {
      throw ValidationError(ValidationCode::kDimensionMismatch,
                            "kappa must have d columns in every row");
    }
    for (int j = 0; j < dim; ++j) {
      kappa(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (!(kappa(i, j) >= 0.0) || !std::isfinite(kappa(i, j))) {
        throw ValidationError(ValidationCode::kNegativeKappa,
                              "kappa entries must be finite and nonnegative");
      }
    }
  }
  for (int i = 0; i < dim; ++i) {
    if (kappa(i, i) != 0.0) {
      throw ValidationError(ValidationCode::kNonzeroDiagonal,
                            "kappa diagonal must be zero");
    }
  }
  if (topology == Topology::kTkCycle) {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        if (!on_pattern(topology, dim, i, j) && kappa(i, j) != 0.0) {
          throw ValidationError(
              ValidationCode::kTopologyPattern,
              "tk-cycle kappa must vanish unless j = (i+1) mod d");
        }
      }
    }
  } else if (topology == Topology::kFullSymmetric && dim > 1) {
    const double common = kappa(0, 1);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        if (i != j && kappa(i, j) != common) {
          throw ValidationError(
              ValidationCode::kTopologyPattern,
              "full-symmetric kappa must have equal off-diagonal entries");
        }
      }
    }
  }
  return kappa;
}

}  // namespace

std::string_view to_string(Topology topology) {
  switch (topology) {
    case Topology::kFullSymmetric:
      return "full-symmetric";
    case Topology::kTkCycle:
      return "tk-cycle";
    case Topology::kCustom:
      return "custom";
  }
  return "custom";
}

Topology parse_topology(std::string_view name) {
  if (name == "full-symmetric") return Topology::kFullSymmetric;
  if (name == "tk-cycle") return Topology::kTkCycle;
  if (name == "custom") return Topology::kCustom;
  throw ValidationError(ValidationCode::kTopologyPattern,
                        "unknown topology '" + std::string(name) + "'");
}

State::State(std::vector<Count> counts) : counts_(std::move(counts)) {
  for (Count c : counts_) {
    if (c < 0) {
      throw ValidationError(ValidationCode::kInvalidState,
                            "molecule counts must be nonnegative");
    }
  }
}

State State::zeros(int dimension) {
  return State(std::vector<Count>(static_cast<std::size_t>(dimension), 0));
}

Count State::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), Count{0});
}

int Transition::jump(int species) const noexcept {
  switch (kind) {
    case TransitionKind::kInflow:
      return species == from ? 1 : 0;
    case TransitionKind::kOutflow:
      return species == from ? -1 : 0;
    case TransitionKind::kAutocatalytic:
      return (species == to ? 1 : 0) - (species == from ? 1 : 0);
  }
  return 0;
}

State Transition::apply(const State& x) const {
  std::vector<Count> next(x.counts().begin(), x.counts().end());
  for (int s = 0; s < x.dimension(); ++s) {
    const int dj = jump(s);
    if (dj > 0 && next[static_cast<std::size_t>(s)] ==
                      std::numeric_limits<Count>::max()) {
      throw ResourceCapError("molecule count overflow");
    }
    next[static_cast<std::size_t>(s)] += dj;
  }
  return State(std::move(next));
}

ReactionNetwork create_network(int dimension, Topology topology,
                               const KappaSpec& kappa, const VectorSpec& lambda,
                               const VectorSpec& delta) {
  if (dimension < 1) {
    throw ValidationError(ValidationCode::kDimension, "dimension must be >= 1");
  }
  if (topology == Topology::kTkCycle && dimension < 2) {
    throw ValidationError(ValidationCode::kDimension,
                          "tk-cycle needs at least two species");
  }
  ReactionNetwork net;
  net.dim_ = dimension;
  net.topology_ = topology;
  net.lambda_ = broadcast(lambda, dimension, "lambda");
  net.delta_ = broadcast(delta, dimension, "delta");
  for (double l : net.lambda_) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw ValidationError(ValidationCode::kNonPositiveInflow,
                            "inflow rates lambda_i must be positive");
    }
  }
  for (double d : net.delta_) {
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw ValidationError(ValidationCode::kNonPositiveOutflow,
                            "outflow rates delta_i must be positive");
    }
  }
  net.kappa_ = build_kappa(kappa, topology, dimension);
  net.build_channels();
  return net;
}

void ReactionNetwork::build_channels() {
  channels_.clear();
  for (int i = 0; i < dim_; ++i) {
    channels_.push_back({TransitionKind::kInflow, i, i, lambda_[static_cast<std::size_t>(i)]});
  }
  for (int i = 0; i < dim_; ++i) {
    channels_.push_back({TransitionKind::kOutflow, i, i, delta_[static_cast<std::size_t>(i)]});
  }
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      if (kappa_(i, j) > 0.0) {
        channels_.push_back({TransitionKind::kAutocatalytic, i, j, kappa_(i, j)});
      }
    }
  }
}

double ReactionNetwork::total_inflow() const noexcept {
  return std::accumulate(lambda_.begin(), lambda_.end(), 0.0);
}

bool ReactionNetwork::has_equal_outflow() const noexcept {
  return std::all_of(delta_.begin(), delta_.end(),
                     [&](double d) { return d == delta_.front(); });
}

double ReactionNetwork::common_outflow() const {
  if (!has_equal_outflow()) {
    throw HypothesisError("outflow rates differ; equal delta_i required");
  }
  return delta_.front();
}

double ReactionNetwork::max_kappa() const noexcept {
  double best = 0.0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) best = std::max(best, kappa_(i, j));
  }
  return best;
}

ReactionNetwork apply_volume_scaling(const PrimedParameters& primed,
                                     double volume, int dimension,
                                     Topology topology) {
  if (!(volume > 0.0) || !std::isfinite(volume)) {
    throw ValidationError(ValidationCode::kNonPositiveVolume,
                          "volume must be positive");
  }
  KappaSpec kappa;
  if (const auto* scalar = std::get_if<double>(&primed.kappa)) {
    kappa = *scalar / volume;
  } else {
    auto rows = std::get<std::vector<std::vector<double>>>(primed.kappa);
    for (auto& row : rows) {
      for (double& k : row) k /= volume;
    }
    kappa = std::move(rows);
  }
  VectorSpec lambda;
  if (const auto* scalar = std::get_if<double>(&primed.lambda)) {
    lambda = *scalar * volume;
  } else {
    auto values = std::get<std::vector<double>>(primed.lambda);
    for (double& l : values) l *= volume;
    lambda = std::move(values);
  }
  return create_network(dimension, topology, kappa, lambda, primed.delta);
}

void check_state(const ReactionNetwork& net, const State& x) {
  if (x.dimension() != net.dimension()) {
    throw ValidationError(ValidationCode::kDimensionMismatch,
                          "state dimension does not match the network");
  }
}

std::vector<Transition> propensities(const ReactionNetwork& net,
                                     const State& x) {
  check_state(net, x);
  std::vector<Transition> out;
  out.reserve(net.channels().size());
  for (const Channel& c : net.channels()) {
    double rate = 0.0;
    switch (c.kind) {
      case TransitionKind::kInflow:
        rate = c.coefficient;
        break;
      case TransitionKind::kOutflow:
        rate = c.coefficient * static_cast<double>(x[c.from]);
        break;
      case TransitionKind::kAutocatalytic:
        rate = c.coefficient * static_cast<double>(x[c.from]) *
               static_cast<double>(x[c.to]);
        break;
    }
    if (rate > 0.0) out.push_back({c.kind, c.from, c.to, rate});
  }
  return out;
}

double total_propensity(const ReactionNetwork& net, const State& x) {
  double sum = 0.0;
  for (const Transition& t : propensities(net, x)) sum += t.rate;
  return sum;
}

}  // namespace autocat
