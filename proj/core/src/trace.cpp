#include "lawfuzz/trace.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lawfuzz {

const Value& Scene::get(const std::string& key) const {
  auto it = signals.find(key);
  if (it == signals.end()) {
    throw std::out_of_range("scene has no signal '" + key + "'");
  }
  return it->second;
}

const Value* Scene::try_get(const std::string& key) const {
  auto it = signals.find(key);
  return it == signals.end() ? nullptr : &it->second;
}

void write_trace_jsonl(const Trace& trace, std::ostream& os) {
  for (std::size_t t = 0; t < trace.scenes.size(); ++t) {
    nlohmann::ordered_json line;
    line["t"] = t;
    nlohmann::ordered_json sig = nlohmann::ordered_json::object();
    for (const auto& [key, value] : trace.scenes[t].signals) {
      if (const bool* b = std::get_if<bool>(&value)) {
        sig[key] = *b;
      } else if (const double* d = std::get_if<double>(&value)) {
        sig[key] = *d;
      } else {
        sig[key] = std::get<std::string>(value);
      }
    }
    line["signals"] = std::move(sig);
    os << line.dump() << '\n';
  }
}

Trace read_trace_jsonl(std::istream& is) {
  Trace trace;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.contains("signals") || !j["signals"].is_object()) {
      throw std::runtime_error("trace line " + std::to_string(lineno) +
                               ": missing \"signals\" object");
    }
    Scene scene;
    for (const auto& [key, value] : j["signals"].items()) {
      if (value.is_boolean()) {
        scene.signals[key] = value.get<bool>();
      } else if (value.is_number()) {
        scene.signals[key] = value.get<double>();
      } else if (value.is_string()) {
        scene.signals[key] = value.get<std::string>();
      } else {
        throw std::runtime_error("trace line " + std::to_string(lineno) + ": signal '" +
                                 key + "' has unsupported type");
      }
    }
    trace.scenes.push_back(std::move(scene));
  }
  if (trace.scenes.empty()) throw std::runtime_error("trace file has no scenes");
  return trace;
}

void save_trace_jsonl(const Trace& trace, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write trace file '" + path + "'");
  write_trace_jsonl(trace, os);
}

Trace load_trace_jsonl(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read trace file '" + path + "'");
  return read_trace_jsonl(is);
}

}  // namespace lawfuzz
