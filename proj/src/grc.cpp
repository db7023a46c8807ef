#include "revkit/grc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "revkit/constants.hpp"
#include "revkit/errors.hpp"

namespace revkit::grc {

namespace {
constexpr double kMassTolerance = 1e-12;
}

StateSpace::StateSpace(int width) : width_(width) {
  if (width < 1 || width > 24)
    throw ValidationError("state space width must be in [1, 24], got " +
                          std::to_string(width));
}

BitState::BitState(std::uint32_t packed, int width) : bits_(packed), width_(width) {
  StateSpace check(width);
  if (packed >= check.size())
    throw ValidationError("packed state out of range for width " +
                          std::to_string(width));
}

BitState BitState::parse(const std::string& bits) {
  std::uint32_t packed = 0;
  for (char c : bits) {
    if (c != '0' && c != '1')
      throw ValidationError("bit string may contain only 0 and 1: " + bits);
    packed = (packed << 1) | static_cast<std::uint32_t>(c - '0');
  }
  return BitState(packed, static_cast<int>(bits.size()));
}

int BitState::bit(int var) const {
  if (var < 0 || var >= width_)
    throw ValidationError("variable index out of range");
  return static_cast<int>((bits_ >> (width_ - 1 - var)) & 1u);
}

BitState BitState::with_bit(int var, int value) const {
  if (var < 0 || var >= width_)
    throw ValidationError("variable index out of range");
  std::uint32_t mask = std::uint32_t{1} << (width_ - 1 - var);
  std::uint32_t next = value ? (bits_ | mask) : (bits_ & ~mask);
  return BitState(next, width_);
}

std::string BitState::str() const {
  std::string s(static_cast<std::size_t>(width_), '0');
  for (int v = 0; v < width_; ++v) s[static_cast<std::size_t>(v)] += static_cast<char>(bit(v));
  return s;
}

Distribution::Distribution(StateSpace space, std::vector<double> mass)
    : space_(space), mass_(std::move(mass)) {
  if (mass_.size() != space_.size())
    throw ValidationError("distribution has " + std::to_string(mass_.size()) +
                          " masses for a space of size " +
                          std::to_string(space_.size()));
  double total = 0;
  for (double m : mass_) {
    if (m < 0) throw ValidationError("negative probability mass");
    total += m;
  }
  if (std::abs(total - 1.0) > kMassTolerance)
    throw ValidationError("distribution mass sums to " + std::to_string(total) +
                          ", not 1");
}

Distribution Distribution::uniform(StateSpace space) {
  std::vector<double> m(space.size(), 1.0 / static_cast<double>(space.size()));
  return Distribution(space, std::move(m));
}

Distribution Distribution::point(StateSpace space, std::uint32_t state) {
  if (state >= space.size()) throw ValidationError("point state out of range");
  std::vector<double> m(space.size(), 0.0);
  m[state] = 1.0;
  return Distribution(space, std::move(m));
}

Precondition::Precondition(StateSpace s, bool allow_all)
    : space(s), allowed(s.size(), allow_all ? 1 : 0) {}

std::size_t Precondition::count() const {
  return static_cast<std::size_t>(std::count(allowed.begin(), allowed.end(), 1));
}

void ConditionedOp::validate() const {
  if (table.size() != space.size())
    throw ValidationError("transition table size does not match space");
  if (!(pre.space == space))
    throw ValidationError("precondition space does not match op space");
  for (std::uint32_t img : table)
    if (img >= space.size()) throw ValidationError("table image out of range");
}

const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::Not: return "not";
    case GateKind::Cnot: return "cnot";
    case GateKind::Toffoli: return "toffoli";
    case GateKind::Fredkin: return "fredkin";
    case GateKind::Erase: return "erase";
    case GateKind::OverwriteOr: return "overwrite_or";
    case GateKind::OverwriteAnd: return "overwrite_and";
    case GateKind::RevOr: return "rev_or";
    case GateKind::RevAnd: return "rev_and";
    case GateKind::Copy: return "copy";
  }
  return "?";
}

std::optional<GateKind> gate_from_name(const std::string& name) {
  for (GateKind k : {GateKind::Not, GateKind::Cnot, GateKind::Toffoli,
                     GateKind::Fredkin, GateKind::Erase, GateKind::OverwriteOr,
                     GateKind::OverwriteAnd, GateKind::RevOr, GateKind::RevAnd,
                     GateKind::Copy})
    if (name == gate_name(k)) return k;
  return std::nullopt;
}

namespace {

int gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::Not:
    case GateKind::Erase:
      return 1;
    case GateKind::Cnot:
    case GateKind::Copy:
      return 2;
    default:
      return 3;
  }
}

struct Vars {
  // Bit accessors for one packed state, most significant variable first.
  int width;
  std::uint32_t s;
  int get(int var) const { return static_cast<int>((s >> (width - 1 - var)) & 1u); }
  void set(int var, int value) {
    std::uint32_t mask = std::uint32_t{1} << (width - 1 - var);
    s = value ? (s | mask) : (s & ~mask);
  }
};

}  // namespace

ConditionedOp make_gate(GateKind kind, std::span<const int> wiring, int width) {
  StateSpace space(width);
  int arity = gate_arity(kind);
  if (static_cast<int>(wiring.size()) != arity)
    throw ValidationError(std::string(gate_name(kind)) + " expects " +
                          std::to_string(arity) + " wires, got " +
                          std::to_string(wiring.size()));
  for (std::size_t i = 0; i < wiring.size(); ++i) {
    if (wiring[i] < 0 || wiring[i] >= width)
      throw ValidationError("wire index out of range: " + std::to_string(wiring[i]));
    for (std::size_t j = i + 1; j < wiring.size(); ++j)
      if (wiring[i] == wiring[j])
        throw ValidationError("wiring collision on variable " +
                              std::to_string(wiring[i]));
  }

  ConditionedOp op{space, std::vector<std::uint32_t>(space.size()),
                   Precondition::full(space)};
  for (std::uint32_t s = 0; s < space.size(); ++s) {
    Vars v{width, s};
    switch (kind) {
      case GateKind::Not:
        v.set(wiring[0], 1 - v.get(wiring[0]));
        break;
      case GateKind::Cnot:
        if (v.get(wiring[0])) v.set(wiring[1], 1 - v.get(wiring[1]));
        break;
      case GateKind::Toffoli:
        if (v.get(wiring[0]) && v.get(wiring[1]))
          v.set(wiring[2], 1 - v.get(wiring[2]));
        break;
      case GateKind::Fredkin:
        if (v.get(wiring[0])) {
          int a = v.get(wiring[1]);
          v.set(wiring[1], v.get(wiring[2]));
          v.set(wiring[2], a);
        }
        break;
      case GateKind::Erase:
        v.set(wiring[0], 0);
        break;
      case GateKind::OverwriteOr:
      case GateKind::RevOr:
        v.set(wiring[2], v.get(wiring[0]) | v.get(wiring[1]));
        break;
      case GateKind::OverwriteAnd:
      case GateKind::RevAnd:
        v.set(wiring[2], v.get(wiring[0]) & v.get(wiring[1]));
        break;
      case GateKind::Copy:
        v.set(wiring[1], v.get(wiring[0]));
        break;
    }
    op.table[s] = v.s;
  }

  // Guarded gates promise a cleared target on entry; overwrite variants and
  // the unconditional gates accept anything.
  bool guarded = kind == GateKind::RevOr || kind == GateKind::RevAnd ||
                 kind == GateKind::Copy;
  if (guarded) {
    int target = wiring[arity - 1];
    for (std::uint32_t s = 0; s < space.size(); ++s) {
      Vars v{width, s};
      op.pre.allowed[s] = v.get(target) == 0 ? 1 : 0;
    }
  }
  return op;
}

ConditionedOp compose(std::span<const ConditionedOp> ops) {
  if (ops.empty()) throw ValidationError("cannot compose an empty sequence");
  for (const auto& op : ops) {
    op.validate();
    if (!(op.space == ops.front().space))
      throw ValidationError("composed ops must share one state space");
  }
  StateSpace space = ops.front().space;
  ConditionedOp out{space, std::vector<std::uint32_t>(space.size()),
                    Precondition::none(space)};
  std::size_t admitted = 0;
  for (std::uint32_t s = 0; s < space.size(); ++s) {
    std::uint32_t cur = s;
    bool ok = true;
    for (const auto& op : ops) {
      if (!op.pre.admits(cur)) ok = false;
      cur = op.apply(cur);
    }
    out.table[s] = cur;
    out.pre.allowed[s] = ok ? 1 : 0;
    if (ok) ++admitted;
  }
  if (admitted == 0)
    throw ValidationError("composition has an empty precondition");
  return out;
}

ConditionedOp invert_restricted(const ConditionedOp& op) {
  op.validate();
  StateSpace space = op.space;
  std::vector<std::int64_t> preimage(space.size(), -1);
  for (std::uint32_t s = 0; s < space.size(); ++s) {
    if (!op.pre.admits(s)) continue;
    std::uint32_t img = op.apply(s);
    if (preimage[img] >= 0)
      throw ValidationError("op is not injective on its allowed set");
    preimage[img] = s;
  }
  ConditionedOp inv{space, std::vector<std::uint32_t>(space.size()),
                    Precondition::none(space)};
  for (std::uint32_t s = 0; s < space.size(); ++s) {
    if (preimage[s] >= 0) {
      inv.table[s] = static_cast<std::uint32_t>(preimage[s]);
      inv.pre.allowed[s] = 1;
    } else {
      inv.table[s] = s;
    }
  }
  return inv;
}

const char* to_string(ReversibilityClass c) {
  switch (c) {
    case ReversibilityClass::UnconditionallyReversible:
      return "unconditionally-reversible";
    case ReversibilityClass::ConditionallyReversible:
      return "conditionally-reversible";
    case ReversibilityClass::Irreversible:
      return "irreversible";
  }
  return "?";
}

ReversibilityClass classify(const ConditionedOp& op) {
  op.validate();
  std::vector<std::uint8_t> hit_full(op.space.size(), 0);
  std::vector<std::uint8_t> hit_allowed(op.space.size(), 0);
  bool bijective = true;
  bool injective_on_allowed = true;
  for (std::uint32_t s = 0; s < op.space.size(); ++s) {
    std::uint32_t img = op.apply(s);
    if (hit_full[img]) bijective = false;
    hit_full[img] = 1;
    if (op.pre.admits(s)) {
      if (hit_allowed[img]) injective_on_allowed = false;
      hit_allowed[img] = 1;
    }
  }
  if (bijective) return ReversibilityClass::UnconditionallyReversible;
  if (injective_on_allowed) return ReversibilityClass::ConditionallyReversible;
  return ReversibilityClass::Irreversible;
}

double entropy(const Distribution& d) {
  double h = 0;
  for (double p : d.masses())
    if (p > 0) h -= p * std::log2(p);
  return h;
}

Distribution pushforward(const ConditionedOp& op, const Distribution& d) {
  op.validate();
  if (!(op.space == d.space()))
    throw ValidationError("op and distribution live on different spaces");
  std::vector<double> out(op.space.size(), 0.0);
  for (std::uint32_t s = 0; s < op.space.size(); ++s) {
    double p = d.mass(s);
    if (p > 0) out[op.apply(s)] += p;
  }
  return Distribution(op.space, std::move(out));
}

LossReport information_loss(const ConditionedOp& op, const Distribution& d,
                            std::optional<double> temperature) {
  LossReport r;
  r.input_entropy = entropy(d);
  r.output_entropy = entropy(pushforward(op, d));
  r.loss = r.input_entropy - r.output_entropy;
  if (r.loss < -1e-12)
    throw std::logic_error("entropy increased under a deterministic map");
  if (temperature) {
    r.temperature = temperature;
    r.min_heat = r.loss * k_boltzmann * *temperature * std::numbers::ln2;
  }
  return r;
}

NoMergeResult verify_no_merge(const ConditionedOp& op, const Distribution& d) {
  op.validate();
  if (!(op.space == d.space()))
    throw ValidationError("op and distribution live on different spaces");
  std::vector<std::int64_t> seen_from(op.space.size(), -1);
  for (std::uint32_t s = 0; s < op.space.size(); ++s) {
    if (!(d.mass(s) > 0)) continue;
    std::uint32_t img = op.apply(s);
    if (seen_from[img] >= 0) {
      NoMergeResult r;
      r.no_merge = false;
      r.witness = MergeWitness{static_cast<std::uint32_t>(seen_from[img]), s, img};
      return r;
    }
    seen_from[img] = s;
  }
  return NoMergeResult{};
}

}  // namespace revkit::grc
