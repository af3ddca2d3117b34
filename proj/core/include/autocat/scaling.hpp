#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "autocat/analytic.hpp"
#include "autocat/network.hpp"

namespace autocat {

/// Volume at which the conditional law is exactly uniform under the
/// kappa' = 1, lambda'_i = delta' = rate scaling: d/rate for full-symmetric,
/// d/((d-1) rate) for tk-cycle. Custom topologies have no closed form and
/// raise HypothesisError.
double critical_volume(int dimension, double rate, Topology topology);

enum class Modality {
  kBoundaryConcentrated,
  kFlat,
  kInteriorUnimodal,
  kMixed,
  kUnknown,
};

std::string_view to_string(Modality modality);

/// all alpha_i > 1: interior-unimodal; all = 1: flat; all < 1:
/// boundary-concentrated; otherwise mixed. "= 1" means within `tolerance`
/// relative. Non-finite weights give kUnknown.
Modality modality_class(std::span<const double> alpha, double tolerance = 1e-12);

/// max over a in E_n of |pi(a|n) - 1/|E_n||.
double flatness(const ConditionalLaw& law, Count n);

struct ScalingRecord {
  double volume = 0.0;
  double mu = 0.0;
  Count reference_n = 0;
  /// False when no closed-form conditional law is known at this volume;
  /// the fields below other than mu are then NaN / kUnknown.
  bool conditional_known = false;
  std::vector<double> alpha;
  Modality modality = Modality::kUnknown;
  double flatness = 0.0;
  double corner_mass = 0.0;
  Moments moments;
};

struct ScalingSweep {
  PrimedParameters primed;
  int dimension = 0;
  Topology topology = Topology::kFullSymmetric;
  std::vector<ScalingRecord> records;  // aligned with the volume grid
};

/// One record per volume: network by apply_volume_scaling, weights by
/// dirichlet_params (or the uniform law at the cycle's critical relation),
/// modality, flatness and corner mass at the reference total, and the
/// analytic moments of X/V. reference_n defaults to max(1, round(mu)) per
/// volume.
ScalingSweep scaling_sweep(const PrimedParameters& primed,
                           std::span<const double> volumes, int dimension,
                           Topology topology,
                           std::optional<Count> reference_n = std::nullopt);

/// CSV: V,alpha_1..alpha_d,modality,flatness,corner_mass,mean_1..mean_d,var_11
void write_sweep_csv(std::ostream& out, const ScalingSweep& sweep);

}  // namespace autocat
