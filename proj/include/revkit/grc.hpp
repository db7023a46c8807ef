#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace revkit::grc {

// Finite space of bit tuples. Widths above 24 are rejected: every operation
// here materializes dense 2^width tables.
class StateSpace {
 public:
  explicit StateSpace(int width);
  int width() const { return width_; }
  std::uint32_t size() const { return std::uint32_t{1} << width_; }
  bool operator==(const StateSpace&) const = default;

 private:
  int width_;
};

// One concrete state. Variable 0 is the most significant bit: the packed
// index of "110" over width 3 is 6, and serialized strings read left to
// right in variable order.
class BitState {
 public:
  BitState(std::uint32_t packed, int width);
  static BitState parse(const std::string& bits);

  int width() const { return width_; }
  std::uint32_t index() const { return bits_; }
  int bit(int var) const;
  BitState with_bit(int var, int value) const;
  std::string str() const;
  bool operator==(const BitState&) const = default;

 private:
  std::uint32_t bits_;
  int width_;
};

// Probability mass over a state space. Construction validates: masses
// non-negative, total within 1e-12 of 1.
class Distribution {
 public:
  Distribution(StateSpace space, std::vector<double> mass);
  static Distribution uniform(StateSpace space);
  static Distribution point(StateSpace space, std::uint32_t state);

  const StateSpace& space() const { return space_; }
  double mass(std::uint32_t state) const { return mass_[state]; }
  const std::vector<double>& masses() const { return mass_; }

 private:
  StateSpace space_;
  std::vector<double> mass_;
};

// The set of initial states an operation promises to be applied to.
// States outside it are declared unreachable by the surrounding design.
struct Precondition {
  explicit Precondition(StateSpace space, bool allow_all = true);
  static Precondition full(StateSpace space) { return Precondition(space, true); }
  static Precondition none(StateSpace space) { return Precondition(space, false); }

  StateSpace space;
  std::vector<std::uint8_t> allowed;  // size 2^width

  bool admits(std::uint32_t state) const { return allowed[state] != 0; }
  std::size_t count() const;
};

// A total deterministic map on a state space paired with a precondition.
// The map is defined everywhere so that simulation of out-of-contract
// states is still meaningful; the reversibility guarantees only quantify
// over the allowed set.
struct ConditionedOp {
  StateSpace space;
  std::vector<std::uint32_t> table;  // size 2^width, table[s] = image of s
  Precondition pre;

  std::uint32_t apply(std::uint32_t state) const { return table[state]; }
  void validate() const;  // sizes agree, images in range
};

enum class GateKind {
  Not,
  Cnot,
  Toffoli,
  Fredkin,
  Erase,
  OverwriteOr,
  OverwriteAnd,
  RevOr,
  RevAnd,
  Copy,
};

const char* gate_name(GateKind kind);
std::optional<GateKind> gate_from_name(const std::string& name);

// Builds a library gate acting on the given variables of a width-bit space.
// Wiring order follows the gate's natural signature, controls first, target
// last (RevOr: a, b, q). The guarded gates RevOr/RevAnd/Copy carry the
// "target initially 0" precondition; the rest allow the full space.
ConditionedOp make_gate(GateKind kind, std::span<const int> wiring, int width);

// Left-to-right composition: result(s) = last(...(first(s))). The composed
// precondition admits s only when every intermediate state lands inside the
// next op's precondition. An empty composed precondition is an error.
ConditionedOp compose(std::span<const ConditionedOp> ops);

// Inverse of the op restricted to its allowed set. Defined on the image of
// the allowed set (which becomes the precondition); identity elsewhere.
// Requires the restriction to be injective.
ConditionedOp invert_restricted(const ConditionedOp& op);

enum class ReversibilityClass {
  UnconditionallyReversible,  // bijection on the full space
  ConditionallyReversible,    // injective on the allowed set only
  Irreversible,               // merges states inside the allowed set
};

const char* to_string(ReversibilityClass c);

ReversibilityClass classify(const ConditionedOp& op);

// Shannon entropy in bits. Zero-mass states contribute nothing.
double entropy(const Distribution& d);

// Image distribution of d under op. Spaces must match.
Distribution pushforward(const ConditionedOp& op, const Distribution& d);

struct LossReport {
  double input_entropy = 0;
  double output_entropy = 0;
  double loss = 0;  // bits; >= 0 up to rounding
  std::optional<double> temperature;
  std::optional<double> min_heat;  // J, loss * kT ln2 when temperature given
};

// Entropy lost pushing d through op. A computed loss below -1e-12 would mean
// a deterministic map increased entropy and is reported as an internal error.
LossReport information_loss(const ConditionedOp& op, const Distribution& d,
                            std::optional<double> temperature = std::nullopt);

struct MergeWitness {
  std::uint32_t state_a = 0;  // both in the support of the distribution
  std::uint32_t state_b = 0;
  std::uint32_t image = 0;
};

struct NoMergeResult {
  bool no_merge = true;
  std::optional<MergeWitness> witness;
};

// Checks that no two support states of d map to the same image. Equivalent
// to zero information loss for every distribution with this support.
NoMergeResult verify_no_merge(const ConditionedOp& op, const Distribution& d);

}  // namespace revkit::grc
