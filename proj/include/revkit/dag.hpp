#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace revkit::bennett {

enum class NodeOp { And, Or, Not };

struct DagNode {
  std::string id;
  NodeOp op;
  // Operand indices into the flat name table: 0..#inputs-1 are primary
  // inputs, then nodes in definition order.
  std::vector<int> args;
  int line = 0;
};

// Combinational AND/OR/NOT network. Operands must be defined before use,
// so well-formed input is acyclic by construction.
struct GateDAG {
  std::vector<std::string> inputs;
  std::vector<DagNode> nodes;
  std::vector<int> outputs;  // flat indices; inputs may be outputs too

  int num_inputs() const { return static_cast<int>(inputs.size()); }
  int num_gates() const { return static_cast<int>(nodes.size()); }
  int num_outputs() const { return static_cast<int>(outputs.size()); }
  const std::string& name_of(int flat_index) const;
};

// Netlist grammar, one statement per ';':
//   in a b;
//   n1 = AND a b;
//   n2 = NOT n1;
//   out n2 a;
// '#' comments run to end of line. Identifiers are [A-Za-z_][A-Za-z0-9_]*.
// Use-before-definition of an id defined later (or of the id being defined)
// is reported as a cycle; names never defined are unknown operands.
GateDAG parse_dag(const std::string& text);

// Evaluates with input bits packed most significant variable first, in
// 'in' declaration order; returns output bits packed the same way in 'out'
// declaration order.
std::uint32_t evaluate_dag(const GateDAG& dag, std::uint32_t input_bits);

}  // namespace revkit::bennett
