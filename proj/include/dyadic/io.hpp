#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "carleson.hpp"
#include "step_function.hpp"

namespace dyadic {

/// {"depth": D, "leaves": [v_0, ..., v_{2^D - 1}]}, leaves left to right.
inline nlohmann::json to_json(const StepFunction& f) {
  nlohmann::json j;
  j["depth"] = f.depth();
  j["leaves"] = std::vector<double>(f.leaves().begin(), f.leaves().end());
  return j;
}

inline StepFunction step_function_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("depth") || !j.contains("leaves"))
    throw std::invalid_argument("step function JSON needs \"depth\" and \"leaves\"");
  const DyadicGrid grid(j.at("depth").get<int>());
  return StepFunction(grid, j.at("leaves").get<std::vector<double>>());
}

inline StepFunction load_step_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return step_function_from_json(j);
}

inline void save_step_function(const StepFunction& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_json(f).dump() << '\n';
}

/// {"depth": D, "entries": [{"level": l, "index": k, "value": x}, ...]}; zero entries are omitted.
inline nlohmann::json to_json(const IndexedSequence& seq) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t p = 1; p < seq.values().size(); ++p) {
    if (seq.values()[p] == 0.0) continue;
    const IntervalId I = IntervalId::from_heap(p);
    entries.push_back({{"level", I.level}, {"index", I.index}, {"value", seq.values()[p]}});
  }
  return {{"depth", seq.grid().depth()}, {"entries", std::move(entries)}};
}

inline IndexedSequence sequence_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("depth") || !j.contains("entries"))
    throw std::invalid_argument("sequence JSON needs \"depth\" and \"entries\"");
  IndexedSequence seq{DyadicGrid(j.at("depth").get<int>())};
  for (const auto& e : j.at("entries"))
    seq.set({e.at("level").get<int>(), e.at("index").get<std::size_t>()}, e.at("value").get<double>());
  return seq;
}

}  // namespace dyadic
