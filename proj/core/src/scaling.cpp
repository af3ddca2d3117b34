#include "autocat/scaling.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "autocat/error.hpp"
#include "autocat/lattice.hpp"
#include "autocat/simulate.hpp"

namespace autocat {

double critical_volume(int dimension, double rate, Topology topology) {
  if (dimension < 2) throw DomainError("critical volume needs d >= 2");
  if (!(rate > 0.0)) throw DomainError("rate parameter must be positive");
  const double d = static_cast<double>(dimension);
  switch (topology) {
    case Topology::kFullSymmetric:
      return d / rate;
    case Topology::kTkCycle:
      return d / ((d - 1.0) * rate);
    case Topology::kCustom:
      break;
  }
  throw HypothesisError("custom topology has no closed-form critical volume");
}

std::string_view to_string(Modality modality) {
  switch (modality) {
    case Modality::kBoundaryConcentrated:
      return "boundary-concentrated";
    case Modality::kFlat:
      return "flat";
    case Modality::kInteriorUnimodal:
      return "interior-unimodal";
    case Modality::kMixed:
      return "mixed";
    case Modality::kUnknown:
      return "unknown";
  }
  return "unknown";
}

Modality modality_class(std::span<const double> alpha, double tolerance) {
  if (alpha.empty()) return Modality::kUnknown;
  bool all_above = true;
  bool all_one = true;
  bool all_below = true;
  for (double a : alpha) {
    if (!std::isfinite(a) || !(a > 0.0)) return Modality::kUnknown;
    const bool one = std::abs(a - 1.0) <= tolerance;
    all_one = all_one && one;
    all_above = all_above && !one && a > 1.0;
    all_below = all_below && !one && a < 1.0;
  }
  if (all_one) return Modality::kFlat;
  if (all_above) return Modality::kInteriorUnimodal;
  if (all_below) return Modality::kBoundaryConcentrated;
  return Modality::kMixed;
}

double flatness(const ConditionalLaw& law, Count n) {
  const int d = dimension_of(law);
  const double uniform = 1.0 / static_cast<double>(simplex_size(d, n));
  double worst = 0.0;
  for_each_simplex_point(d, n, [&](std::span<const Count> a) {
    worst = std::max(worst, std::abs(conditional_pmf(law, n, a) - uniform));
  });
  return worst;
}

ScalingSweep scaling_sweep(const PrimedParameters& primed,
                           std::span<const double> volumes, int dimension,
                           Topology topology, std::optional<Count> reference_n) {
  if (volumes.empty()) throw DomainError("volume grid is empty");
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  ScalingSweep sweep;
  sweep.primed = primed;
  sweep.dimension = dimension;
  sweep.topology = topology;
  sweep.records.reserve(volumes.size());

  for (double volume : volumes) {
    const ReactionNetwork net = apply_volume_scaling(primed, volume, dimension, topology);
    ScalingRecord rec;
    rec.volume = volume;
    rec.mu = mixing_intensity(net);
    rec.reference_n = reference_n.value_or(
        std::max<Count>(1, static_cast<Count>(std::llround(rec.mu))));

    std::optional<MixtureStationary> law;
    try {
      law = stationary_law(net);
    } catch (const HypothesisError&) {
    }
    if (law) {
      rec.conditional_known = true;
      if (const auto* dm = std::get_if<DirichletMultinomial>(&law->conditional)) {
        rec.alpha = dm->alpha;
      } else {
        rec.alpha.assign(static_cast<std::size_t>(dimension), 1.0);
      }
      rec.modality = modality_class(rec.alpha);
      rec.flatness = flatness(law->conditional, rec.reference_n);
      rec.corner_mass = corner_mass(rec.alpha, rec.reference_n);
      rec.moments = analytic_moments(*law, volume);
    } else {
      const auto du = static_cast<std::size_t>(dimension);
      rec.alpha.assign(du, kNaN);
      rec.modality = Modality::kUnknown;
      rec.flatness = kNaN;
      rec.corner_mass = kNaN;
      // Only the lumped law is known. With equal inflows the cycle is
      // invariant under rotation of the species, so the means split evenly.
      const auto lambda = net.lambda();
      const bool even = std::all_of(lambda.begin(), lambda.end(),
                                    [&](double l) { return l == lambda.front(); });
      rec.moments.mean.assign(du, even ? rec.mu / (volume * dimension) : kNaN);
      rec.moments.cov.assign(du * du, kNaN);
    }
    sweep.records.push_back(std::move(rec));
  }
  return sweep;
}

void write_sweep_csv(std::ostream& out, const ScalingSweep& sweep) {
  const int d = sweep.dimension;
  out << 'V';
  for (int i = 1; i <= d; ++i) out << ",alpha_" << i;
  out << ",modality,flatness,corner_mass";
  for (int i = 1; i <= d; ++i) out << ",mean_" << i;
  out << ",var_11\n";
  for (const ScalingRecord& rec : sweep.records) {
    out << format_real(rec.volume);
    for (double a : rec.alpha) out << ',' << format_real(a);
    out << ',' << to_string(rec.modality) << ',' << format_real(rec.flatness) << ','
        << format_real(rec.corner_mass);
    for (double m : rec.moments.mean) out << ',' << format_real(m);
    out << ',' << format_real(rec.moments.cov.empty() ? std::nan("") : rec.moments.cov.front())
        << '\n';
  }
}

}  // namespace autocat
