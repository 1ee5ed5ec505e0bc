#include "circuitforge/io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace circuitforge {

namespace {

using nlohmann::json;

std::string where(std::size_t loop, int branch) {
  return "loops[" + std::to_string(loop) + "].branches[" +
         std::to_string(branch) + "]";
}

double positive_field(const json& j, const char* key, const std::string& loc) {
  if (!j.contains(key)) {
    throw ParseError(loc + ": missing field \"" + key + "\"");
  }
  if (!j[key].is_number()) {
    throw ParseError(loc + ": field \"" + key + "\" must be a number");
  }
  const double v = j[key].get<double>();
  if (!(v > 0.0)) {
    throw ParseError(loc + ": field \"" + key + "\" must be positive, got " +
                     std::to_string(v));
  }
  return v;
}

}  // namespace

ChainCircuit parse_circuit(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("loops") || !root["loops"].is_array()) {
    throw ParseError("top level must be an object with a \"loops\" array");
  }
  ChainCircuit circuit;
  for (std::size_t k = 0; k < root["loops"].size(); ++k) {
    const json& jl = root["loops"][k];
    const std::string lloc = "loops[" + std::to_string(k) + "]";
    LoopTopology loop;
    loop.external_phase = jl.value("phi_x", 0.0);
    if (!jl.contains("branches") || !jl["branches"].is_array() ||
        jl["branches"].size() != 4) {
      throw ParseError(lloc + ": expected exactly 4 branches");
    }
    for (int l = 0; l < 4; ++l) {
      const json& jb = jl["branches"][l];
      const std::string bloc = where(k, l);
      const std::string kind = jb.value("kind", "");
      if (kind == "C") {
        loop.branches[l] = BranchSpec::capacitor(positive_field(jb, "C", bloc));
      } else if (kind == "L") {
        loop.branches[l] = BranchSpec::inductor(positive_field(jb, "L", bloc));
      } else if (kind == "JJ") {
        loop.branches[l] = BranchSpec::junction(positive_field(jb, "CJ", bloc),
                                                positive_field(jb, "EJ", bloc));
      } else if (kind == "none") {
        loop.branches[l] = BranchSpec::absent();
      } else {
        throw ParseError(bloc + ": unknown element kind \"" + kind + "\"");
      }
    }
    circuit.loops.push_back(loop);
  }
  if (root.contains("couplings")) {
    if (!root["couplings"].is_array()) {
      throw ParseError("\"couplings\" must be an array of farads");
    }
    for (std::size_t k = 0; k < root["couplings"].size(); ++k) {
      const json& jc = root["couplings"][k];
      if (!jc.is_number() || !(jc.get<double>() > 0.0)) {
        throw ParseError("couplings[" + std::to_string(k) +
                         "] must be a positive number");
      }
      circuit.coupling_capacitances.push_back(jc.get<double>());
    }
  }
  if (circuit.loops.empty()) throw ParseError("circuit needs at least one loop");
  if (circuit.coupling_capacitances.size() + 1 != circuit.loops.size()) {
    throw ParseError("expected " + std::to_string(circuit.loops.size() - 1) +
                     " coupling capacitors, got " +
                     std::to_string(circuit.coupling_capacitances.size()));
  }
  return circuit;
}

std::string serialize_circuit(const ChainCircuit& circuit) {
  json root;
  root["loops"] = json::array();
  for (const auto& loop : circuit.loops) {
    json jl;
    jl["phi_x"] = loop.external_phase;
    jl["branches"] = json::array();
    for (const auto& b : loop.branches) {
      json jb;
      switch (b.kind) {
        case BranchKind::Capacitor:
          jb["kind"] = "C";
          jb["C"] = b.capacitance;
          break;
        case BranchKind::Inductor:
          jb["kind"] = "L";
          jb["L"] = b.inductance;
          break;
        case BranchKind::JosephsonJunction:
          jb["kind"] = "JJ";
          jb["CJ"] = b.junction_capacitance;
          jb["EJ"] = b.josephson_energy;
          break;
        case BranchKind::Absent:
          jb["kind"] = "none";
          break;
      }
      jl["branches"].push_back(jb);
    }
    root["loops"].push_back(jl);
  }
  root["couplings"] = circuit.coupling_capacitances;
  return root.dump(2) + "\n";
}

ChainCircuit load_circuit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open circuit file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_circuit(ss.str());
}

void save_circuit_file(const ChainCircuit& circuit, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write circuit file: " + path);
  out << serialize_circuit(circuit);
}

}  // namespace circuitforge
