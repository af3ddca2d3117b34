#include "autocat/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "autocat/error.hpp"

namespace autocat {

namespace {

using Json = nlohmann::json;

void reject_unknown(const Json& object, const std::set<std::string>& allowed,
                    std::string_view where) {
  for (const auto& [key, _] : object.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

const Json& require(const Json& object, const std::string& key) {
  if (!object.contains(key)) throw ConfigError("missing key '" + key + "'");
  return object.at(key);
}

double as_number(const Json& value, std::string_view key) {
  if (!value.is_number()) {
    throw ConfigError("'" + std::string(key) + "' must be a number");
  }
  return value.get<double>();
}

VectorSpec as_vector(const Json& value, std::string_view key) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_array()) {
    throw ConfigError("'" + std::string(key) + "' must be a number or an array");
  }
  std::vector<double> out;
  for (const Json& v : value) out.push_back(as_number(v, key));
  return out;
}

KappaSpec as_kappa(const Json& value, std::string_view key) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_array()) {
    throw ConfigError("'" + std::string(key) + "' must be a number or a matrix");
  }
  std::vector<std::vector<double>> rows;
  for (const Json& row : value) {
    if (!row.is_array()) throw ConfigError("'" + std::string(key) + "' rows must be arrays");
    std::vector<double> r;
    for (const Json& v : row) r.push_back(as_number(v, key));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

NetworkConfig parse_network_config(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("network config must be a JSON object");
  reject_unknown(doc, {"dimension", "topology", "kappa", "lambda", "delta", "volume"},
                 "network config");

  const Json& dim_value = require(doc, "dimension");
  if (!dim_value.is_number_integer()) throw ConfigError("'dimension' must be an integer");
  const int dimension = dim_value.get<int>();
  const Json& topo_value = require(doc, "topology");
  if (!topo_value.is_string()) throw ConfigError("'topology' must be a string");
  Topology topology;
  try {
    topology = parse_topology(topo_value.get<std::string>());
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }

  if (doc.contains("volume")) {
    const Json& block = doc.at("volume");
    if (!block.is_object()) throw ConfigError("'volume' must be an object");
    reject_unknown(block, {"V", "kappa_prime", "lambda_prime", "delta_prime"}, "volume block");
    PrimedParameters primed;
    primed.kappa = as_kappa(require(block, "kappa_prime"), "kappa_prime");
    primed.lambda = as_vector(require(block, "lambda_prime"), "lambda_prime");
    primed.delta = as_vector(require(block, "delta_prime"), "delta_prime");
    const double volume = as_number(require(block, "V"), "V");
    return NetworkConfig{apply_volume_scaling(primed, volume, dimension, topology), volume,
                         primed};
  }

  return NetworkConfig{
      create_network(dimension, topology, as_kappa(require(doc, "kappa"), "kappa"),
                     as_vector(require(doc, "lambda"), "lambda"),
                     as_vector(require(doc, "delta"), "delta")),
      std::nullopt, std::nullopt};
}

NetworkConfig load_network_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_network_config(buffer.str());
}

std::string network_to_json(const ReactionNetwork& net) {
  const int d = net.dimension();
  Json kappa = Json::array();
  for (int i = 0; i < d; ++i) {
    Json row = Json::array();
    for (int j = 0; j < d; ++j) row.push_back(net.kappa(i, j));
    kappa.push_back(row);
  }
  nlohmann::ordered_json j;
  j["dimension"] = d;
  j["topology"] = std::string(to_string(net.topology()));
  j["kappa"] = kappa;
  j["lambda"] = std::vector<double>(net.lambda().begin(), net.lambda().end());
  j["delta"] = std::vector<double>(net.delta().begin(), net.delta().end());
  return j.dump();
}

}  // namespace autocat
