#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "swgain/system.hpp"

namespace swgain {

namespace {

using nlohmann::json;

Eigen::MatrixXd MatrixFromJson(const json& value, int rows, int cols,
                               const std::string& what) {
  if (!value.is_array()) {
    throw std::invalid_argument(what + " must be a nested array");
  }
  if (static_cast<int>(value.size()) != rows) {
    throw std::invalid_argument(what + " has " + std::to_string(value.size()) +
                                " rows, expected " + std::to_string(rows));
  }
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = value[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw std::invalid_argument(what + " row " + std::to_string(i) +
                                  " must have " + std::to_string(cols) +
                                  " entries");
    }
    for (int j = 0; j < cols; ++j) {
      if (!row[j].is_number()) {
        throw std::invalid_argument(what + " entries must be numbers");
      }
      M(i, j) = row[j].get<double>();
      if (!std::isfinite(M(i, j))) {
        throw std::invalid_argument(what + " has non-finite entries");
      }
    }
  }
  return M;
}

json MatrixToJson(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json ParseDocument(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

int PositiveInt(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer()) {
    throw std::invalid_argument(std::string("missing integer field \"") + key +
                                "\"");
  }
  const int value = doc[key].get<int>();
  if (value <= 0) {
    throw std::invalid_argument(std::string("field \"") + key +
                                "\" must be positive");
  }
  return value;
}

}  // namespace

SystemSpec parse_system(std::string_view text) {
  const json doc = ParseDocument(text);
  if (!doc.is_object()) throw std::invalid_argument("system must be an object");
  const int n = PositiveInt(doc, "n");
  const int m = PositiveInt(doc, "m");
  const int p = PositiveInt(doc, "p");
  if (!doc.contains("modes") || !doc["modes"].is_array() ||
      doc["modes"].empty()) {
    throw std::invalid_argument("\"modes\" must be a non-empty array");
  }
  std::vector<Mode> modes;
  int index = 0;
  for (const json& entry : doc["modes"]) {
    if (!entry.is_object() || !entry.contains("A") || !entry.contains("B") ||
        !entry.contains("C")) {
      throw std::invalid_argument("every mode needs A, B and C");
    }
    const std::string prefix = "mode " + std::to_string(index) + " ";
    modes.push_back({MatrixFromJson(entry["A"], n, n, prefix + "A"),
                     MatrixFromJson(entry["B"], n, m, prefix + "B"),
                     MatrixFromJson(entry["C"], p, n, prefix + "C")});
    ++index;
  }
  std::string label;
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) {
      throw std::invalid_argument("\"label\" must be a string");
    }
    label = doc["label"].get<std::string>();
  }
  return SystemSpec(n, m, p, std::move(modes), std::move(label));
}

std::string serialize_system(const SystemSpec& sys) {
  json doc;
  doc["n"] = sys.n();
  doc["m"] = sys.m();
  doc["p"] = sys.p();
  json modes = json::array();
  for (const Mode& mode : sys.modes()) {
    modes.push_back({{"A", MatrixToJson(mode.A)},
                     {"B", MatrixToJson(mode.B)},
                     {"C", MatrixToJson(mode.C)}});
  }
  doc["modes"] = std::move(modes);
  doc["label"] = sys.label();
  return doc.dump(2) + "\n";
}

Signal parse_signal(std::string_view text) {
  const json doc = ParseDocument(text);
  if (!doc.is_object() || !doc.contains("segments") ||
      !doc["segments"].is_array()) {
    throw std::invalid_argument("signal needs a \"segments\" array");
  }
  std::vector<Segment> segments;
  for (const json& entry : doc["segments"]) {
    if (!entry.is_array() || entry.size() != 2 ||
        !entry[0].is_number_integer() || !entry[1].is_number()) {
      throw std::invalid_argument(
          "each segment must be [mode_index, duration]");
    }
    segments.push_back({entry[0].get<int>(), entry[1].get<double>()});
  }
  return Signal(std::move(segments));
}

std::string serialize_signal(const Signal& sig) {
  json segments = json::array();
  for (const Segment& s : sig.segments()) {
    segments.push_back(json::array({s.mode, s.duration}));
  }
  return json{{"segments", segments}}.dump() + "\n";
}

WeightSignal parse_weight_signal(std::string_view text) {
  const json doc = ParseDocument(text);
  if (!doc.is_object() || !doc.contains("weights") ||
      !doc["weights"].is_array()) {
    throw std::invalid_argument("weight signal needs a \"weights\" array");
  }
  std::vector<WeightSegment> segments;
  for (const json& entry : doc["weights"]) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
        !entry[1].is_number()) {
      throw std::invalid_argument("each weight must be [alpha, duration]");
    }
    segments.push_back({entry[0].get<double>(), entry[1].get<double>()});
  }
  return WeightSignal(std::move(segments));
}

}  // namespace swgain
