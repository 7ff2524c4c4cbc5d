#include "qbsim/io.hpp"

#include <fstream>

namespace qbsim {

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      data.push_back({m(i, j).real(), m(i, j).imag()});
    }
  }
  return data;
}

Eigen::MatrixXcd matrix_from_json(const nlohmann::json& data, Eigen::Index rows,
                                  Eigen::Index cols) {
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw ParseError("data", "matrix entry count does not match its shape");
  }
  Eigen::MatrixXcd m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j, ++k) {
      const auto& entry = data[k];
      if (!entry.is_array() || entry.size() != 2) {
        throw ParseError("data", "matrix entries must be [re, im] pairs");
      }
      m(i, j) = Complex{entry[0].get<double>(), entry[1].get<double>()};
    }
  }
  return m;
}

void check_schema(const nlohmann::json& j, const std::string& expected_type) {
  if (!j.is_object()) throw ParseError("", "state document must be an object");
  if (j.value("schema_version", "") != kSchemaVersion) {
    throw ParseError("schema_version", "unsupported schema version");
  }
  if (j.value("type", "") != expected_type) {
    throw ParseError("type", "expected type '" + expected_type + "'");
  }
}

}  // namespace

nlohmann::json to_json(const TwoModeState& state) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = "two_mode_state";
  j["n_max"] = state.n_max();
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& [key, b] : state.blocks()) {
    blocks.push_back({{"row", key.first},
                      {"col", key.second},
                      {"data", matrix_to_json(b)}});
  }
  j["blocks"] = std::move(blocks);
  return j;
}

TwoModeState two_mode_state_from_json(const nlohmann::json& j) {
  check_schema(j, "two_mode_state");
  const int n_max = j.at("n_max").get<int>();
  if (n_max < 0) throw ParseError("n_max", "n_max must be nonnegative");
  TwoModeState state{FockCutoff{n_max}};
  for (const auto& entry : j.at("blocks")) {
    const int row = entry.at("row").get<int>();
    const int col = entry.at("col").get<int>();
    if (row < 0 || col < 0 || row > n_max || col > n_max) {
      throw ParseError("blocks", "block index outside the cutoff");
    }
    state.set_block(row, col,
                    matrix_from_json(entry.at("data"),
                                     FockCutoff::block_dim(row),
                                     FockCutoff::block_dim(col)));
  }
  return state;
}

nlohmann::json to_json(const SingleModeState& state) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = "single_mode_state";
  j["n_max"] = state.n_max();
  j["data"] = matrix_to_json(state.matrix);
  return j;
}

SingleModeState single_mode_state_from_json(const nlohmann::json& j) {
  check_schema(j, "single_mode_state");
  const int n_max = j.at("n_max").get<int>();
  if (n_max < 0) throw ParseError("n_max", "n_max must be nonnegative");
  return SingleModeState{
      matrix_from_json(j.at("data"), n_max + 1, n_max + 1)};
}

nlohmann::json to_json(Complex z) { return {z.real(), z.imag()}; }

Complex complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Complex{j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex{j[0].get<double>(), j[1].get<double>()};
  }
  throw ParseError("", "expected a number or an [re, im] pair");
}

nlohmann::json to_json(const ChannelSpec& spec) {
  return {{"g", spec.config.g},
          {"r", spec.config.r},
          {"tau", spec.config.tau},
          {"include_stark", spec.config.include_stark},
          {"alpha", to_json(spec.alpha)},
          {"beta", to_json(spec.beta)}};
}

ChannelSpec channel_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("channel", "channel must be an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "g" && key != "r" && key != "tau" && key != "include_stark" &&
        key != "alpha" && key != "beta") {
      throw ValidationError("channel." + key, "unknown key");
    }
  }
  ChannelSpec spec;
  spec.config.g = j.value("g", 1.0);
  spec.config.r = j.value("r", 1.0);
  spec.config.tau = j.value("tau", 1.0);
  spec.config.include_stark = j.value("include_stark", true);
  if (j.contains("alpha")) spec.alpha = complex_from_json(j.at("alpha"));
  if (j.contains("beta")) spec.beta = complex_from_json(j.at("beta"));
  spec.config.validate();
  return spec;
}

void save_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path, e.what());
  }
}

}  // namespace qbsim
