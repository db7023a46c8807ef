#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "revkit/dag.hpp"

namespace revkit::bennett {

// Gate vocabulary of compiled schedules. Each writes (or, inverted, clears)
// a dedicated target wire and is injective given its precondition:
//   rev_and/rev_or: target starts 0, becomes f(a,b)
//   copy:           target starts 0, becomes the source bit
//   copy_not:       target starts 0, becomes the negated source bit
enum class StepGate { RevAnd, RevOr, Copy, CopyNot };

const char* step_gate_name(StepGate g);

struct Step {
  StepGate gate;
  int a = -1;       // first operand wire
  int b = -1;       // second operand wire; unused for copy/copy_not
  int target = -1;  // written wire
  bool forward = true;
};

// Straight-line program over a register file laid out as
// [primary inputs | one ancilla per gate | one wire per output].
struct ReversibleSchedule {
  int input_width = 0;
  int ancilla_width = 0;
  int result_width = 0;
  std::vector<Step> steps;
  bool verified = false;    // set by bennett_embed when desk-checkable
  std::string warning;      // non-empty when verification was skipped

  int width() const { return input_width + ancilla_width + result_width; }
};

// Compute/copy/uncompute embedding of a gate network: each node writes a
// fresh zero ancilla, every output is copied out, then the compute phase
// runs in reverse to clear the ancillas. The result maps (x, 0, 0) to
// (x, 0, f(x)) in exactly 2*G + M steps. Networks wider than 24 bits are
// emitted unverified with a warning.
ReversibleSchedule bennett_embed(const GateDAG& dag);

// Applies every step to a packed full-width state (most significant wire
// first). Throws PreconditionViolation naming the offending step when a
// target is found outside its guaranteed value.
std::uint32_t execute_schedule(const ReversibleSchedule& s, std::uint32_t state);

// Steps reversed and direction flags flipped; running one after the other
// restores any state the forward schedule accepts.
ReversibleSchedule inverse(const ReversibleSchedule& s);

struct VerifyCounterexample {
  std::uint32_t input = 0;
  int step = -1;  // -1 when the failure is not tied to one step
  std::string what;
};

struct VerifyReport {
  bool preconditions_ok = true;  // no step ever saw a bad target
  bool outputs_ok = true;        // result wires match the network
  bool ancilla_ok = true;        // ancillas return to zero
  bool injective = true;         // distinct inputs give distinct finals
  std::optional<VerifyCounterexample> counterexample;

  bool all_ok() const {
    return preconditions_ok && outputs_ok && ancilla_ok && injective;
  }
};

// Exhaustive check over every primary input assignment.
VerifyReport verify_schedule(const ReversibleSchedule& s, const GateDAG& dag);

// Text form, one step per line:
//   step 0 rev_and 0 1 2 fwd
// preceded by a header: "schedule <inputs> <ancillas> <results>".
void write_schedule(std::ostream& out, const ReversibleSchedule& s);
ReversibleSchedule read_schedule(std::istream& in);

}  // namespace revkit::bennett
