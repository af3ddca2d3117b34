#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "autocat/network.hpp"

namespace autocat {

/// A network read from a configuration document. When the document has a
/// `volume` block the network is the volume-scaled one and the primed
/// parameters are kept alongside.
struct NetworkConfig {
  ReactionNetwork network;
  std::optional<double> volume;
  std::optional<PrimedParameters> primed;
};

/// Parses
///   {"dimension": 2, "topology": "full-symmetric",
///    "kappa": 0.05 | [[...]], "lambda": 0.2 | [...], "delta": 0.01 | [...],
///    "volume": {"V": 20, "kappa_prime": 1, "lambda_prime": 0.01,
///               "delta_prime": 0.01}}
/// Unknown keys are rejected. The direct parameters may be omitted when a
/// volume block is present, which then takes precedence.
/// Throws ConfigError for malformed documents and ValidationError for
/// invalid parameters.
NetworkConfig parse_network_config(std::string_view text);

NetworkConfig load_network_config(const std::filesystem::path& path);

/// Canonical JSON form of a network (used in metadata sidecars).
std::string network_to_json(const ReactionNetwork& net);

}  // namespace autocat
