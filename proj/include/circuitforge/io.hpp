#pragma once

#include <string>

#include "circuitforge/circuit.hpp"

namespace circuitforge {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Circuit file format (JSON, SI base units):
// {"loops": [{"phi_x": rad,
//             "branches": [{"kind": "C"|"L"|"JJ"|"none",
//                           "C": farads, "L": henries,
//                           "CJ": farads, "EJ": hertz}, x4]}, ...],
//  "couplings": [farads, ...]}
ChainCircuit parse_circuit(const std::string& text);
std::string serialize_circuit(const ChainCircuit& circuit);

ChainCircuit load_circuit_file(const std::string& path);
void save_circuit_file(const ChainCircuit& circuit, const std::string& path);

}  // namespace circuitforge
