#pragma once

#include <string>

#include <json.hpp>

#include "qbsim/cavity.hpp"
#include "qbsim/fock.hpp"

namespace qbsim {

// JSON state schema, version "1": {schema_version, type, n_max, blocks:
// [{row, col, data}]} with data row-major [re, im] pairs. Single-mode states
// use a single full matrix under "data".
inline constexpr const char* kSchemaVersion = "1";

nlohmann::json to_json(const TwoModeState& state);
TwoModeState two_mode_state_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SingleModeState& state);
SingleModeState single_mode_state_from_json(const nlohmann::json& j);

nlohmann::json to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);

struct ChannelSpec {
  RamanHamiltonianConfig config;
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};
};

nlohmann::json to_json(const ChannelSpec& spec);
ChannelSpec channel_spec_from_json(const nlohmann::json& j);

void save_json(const nlohmann::json& j, const std::string& path);
nlohmann::json load_json(const std::string& path);

}  // namespace qbsim
