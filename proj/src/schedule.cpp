#include "revkit/schedule.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "revkit/errors.hpp"

namespace revkit::bennett {

const char* step_gate_name(StepGate g) {
  switch (g) {
    case StepGate::RevAnd: return "rev_and";
    case StepGate::RevOr: return "rev_or";
    case StepGate::Copy: return "copy";
    case StepGate::CopyNot: return "copy_not";
  }
  return "?";
}

ReversibleSchedule bennett_embed(const GateDAG& dag) {
  ReversibleSchedule s;
  s.input_width = dag.num_inputs();
  s.ancilla_width = dag.num_gates();
  s.result_width = dag.num_outputs();

  // Flat DAG index -> wire: inputs keep their position, node j lives on
  // ancilla j.
  auto wire_of = [&](int flat) { return flat; };

  std::vector<Step> forward;
  for (int g = 0; g < dag.num_gates(); ++g) {
    const DagNode& node = dag.nodes[static_cast<std::size_t>(g)];
    Step st;
    st.target = dag.num_inputs() + g;
    switch (node.op) {
      case NodeOp::And:
        st.gate = StepGate::RevAnd;
        st.a = wire_of(node.args[0]);
        st.b = wire_of(node.args[1]);
        break;
      case NodeOp::Or:
        st.gate = StepGate::RevOr;
        st.a = wire_of(node.args[0]);
        st.b = wire_of(node.args[1]);
        break;
      case NodeOp::Not:
        st.gate = StepGate::CopyNot;
        st.a = wire_of(node.args[0]);
        break;
    }
    forward.push_back(st);
  }

  s.steps = forward;
  for (int m = 0; m < dag.num_outputs(); ++m) {
    Step st;
    st.gate = StepGate::Copy;
    st.a = wire_of(dag.outputs[static_cast<std::size_t>(m)]);
    st.target = dag.num_inputs() + dag.num_gates() + m;
    s.steps.push_back(st);
  }
  for (auto it = forward.rbegin(); it != forward.rend(); ++it) {
    Step st = *it;
    st.forward = false;
    s.steps.push_back(st);
  }

  if (s.width() <= 24) {
    s.verified = true;
  } else {
    s.verified = false;
    s.warning = "schedule is " + std::to_string(s.width()) +
                " wires wide; exhaustive verification skipped above 24";
  }
  return s;
}

namespace {

int wire_bit(std::uint32_t state, int width, int wire) {
  return static_cast<int>((state >> (width - 1 - wire)) & 1u);
}

std::uint32_t set_wire(std::uint32_t state, int width, int wire, int value) {
  std::uint32_t mask = std::uint32_t{1} << (width - 1 - wire);
  return value ? (state | mask) : (state & ~mask);
}

// Value the step writes into its target (forward direction).
int step_value(const Step& st, std::uint32_t state, int width) {
  int a = wire_bit(state, width, st.a);
  switch (st.gate) {
    case StepGate::RevAnd: return a & wire_bit(state, width, st.b);
    case StepGate::RevOr: return a | wire_bit(state, width, st.b);
    case StepGate::Copy: return a;
    case StepGate::CopyNot: return 1 - a;
  }
  return 0;
}

}  // namespace

std::uint32_t execute_schedule(const ReversibleSchedule& s, std::uint32_t state) {
  int w = s.width();
  if (w < 1 || w > 24)
    throw ValidationError("schedule width " + std::to_string(w) +
                          " is not executable (1..24)");
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    const Step& st = s.steps[i];
    int value = step_value(st, state, w);
    int target = wire_bit(state, w, st.target);
    if (st.forward) {
      // Forward guarded gates require a cleared target.
      if (target != 0)
        throw PreconditionViolation(
            static_cast<int>(i), state,
            std::string(step_gate_name(st.gate)) + " target wire " +
                std::to_string(st.target) + " is not 0");
      state = set_wire(state, w, st.target, value);
    } else {
      // Inverted gates require the target to hold the recomputed value,
      // then clear it.
      if (target != value)
        throw PreconditionViolation(
            static_cast<int>(i), state,
            std::string(step_gate_name(st.gate)) + " target wire " +
                std::to_string(st.target) + " does not hold its computed value");
      state = set_wire(state, w, st.target, 0);
    }
  }
  return state;
}

ReversibleSchedule inverse(const ReversibleSchedule& s) {
  ReversibleSchedule inv = s;
  std::reverse(inv.steps.begin(), inv.steps.end());
  for (Step& st : inv.steps) st.forward = !st.forward;
  return inv;
}

VerifyReport verify_schedule(const ReversibleSchedule& s, const GateDAG& dag) {
  VerifyReport report;
  int w = s.width();
  if (w > 24) {
    report.preconditions_ok = report.outputs_ok = report.ancilla_ok =
        report.injective = false;
    report.counterexample = VerifyCounterexample{0, -1, "schedule too wide to verify"};
    return report;
  }
  int n_in = dag.num_inputs();
  int n_res = dag.num_outputs();
  std::map<std::uint32_t, std::uint32_t> finals;  // final state -> input

  for (std::uint32_t x = 0; x < (std::uint32_t{1} << n_in); ++x) {
    // (x, 0, 0): inputs occupy the most significant wires.
    std::uint32_t init = x << (w - n_in);
    std::uint32_t fin;
    try {
      fin = execute_schedule(s, init);
    } catch (const PreconditionViolation& e) {
      report.preconditions_ok = false;
      report.counterexample = VerifyCounterexample{x, e.step(), e.what()};
      return report;
    }

    std::uint32_t want_out = evaluate_dag(dag, x);
    std::uint32_t got_out = fin & ((std::uint32_t{1} << n_res) - 1);
    if (got_out != want_out) {
      report.outputs_ok = false;
      if (!report.counterexample)
        report.counterexample = VerifyCounterexample{x, -1, "output mismatch"};
    }
    std::uint32_t ancilla = (fin >> n_res) & ((std::uint32_t{1} << s.ancilla_width) - 1);
    if (s.ancilla_width > 0 && ancilla != 0) {
      report.ancilla_ok = false;
      if (!report.counterexample)
        report.counterexample = VerifyCounterexample{x, -1, "dirty ancilla"};
    }
    std::uint32_t kept_input = fin >> (w - n_in);
    if (kept_input != x) {
      report.outputs_ok = false;
      if (!report.counterexample)
        report.counterexample = VerifyCounterexample{x, -1, "input not preserved"};
    }

    auto [it, inserted] = finals.emplace(fin, x);
    if (!inserted) {
      report.injective = false;
      if (!report.counterexample)
        report.counterexample =
            VerifyCounterexample{x, -1, "collides with input " + std::to_string(it->second)};
    }
  }
  return report;
}

void write_schedule(std::ostream& out, const ReversibleSchedule& s) {
  out << "schedule " << s.input_width << ' ' << s.ancilla_width << ' '
      << s.result_width << "\n";
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    const Step& st = s.steps[i];
    out << "step " << i << ' ' << step_gate_name(st.gate) << ' ' << st.a;
    if (st.gate == StepGate::RevAnd || st.gate == StepGate::RevOr)
      out << ' ' << st.b;
    out << ' ' << st.target << ' ' << (st.forward ? "fwd" : "inv") << "\n";
  }
}

ReversibleSchedule read_schedule(std::istream& in) {
  ReversibleSchedule s;
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string head;
    if (!(ss >> head)) continue;
    if (!saw_header) {
      if (head != "schedule")
        throw ParseError(lineno, 0, "expected 'schedule <in> <anc> <res>' header");
      if (!(ss >> s.input_width >> s.ancilla_width >> s.result_width))
        throw ParseError(lineno, 0, "bad schedule header");
      saw_header = true;
      continue;
    }
    if (head != "step") throw ParseError(lineno, 0, "expected 'step' line");
    std::size_t idx;
    std::string gate_s;
    if (!(ss >> idx >> gate_s))
      throw ParseError(lineno, 0, "bad step line");
    if (idx != s.steps.size())
      throw ParseError(lineno, 0, "steps out of order");
    Step st;
    if (gate_s == "rev_and") st.gate = StepGate::RevAnd;
    else if (gate_s == "rev_or") st.gate = StepGate::RevOr;
    else if (gate_s == "copy") st.gate = StepGate::Copy;
    else if (gate_s == "copy_not") st.gate = StepGate::CopyNot;
    else throw ParseError(lineno, 0, "unknown step gate: " + gate_s);
    bool binary = st.gate == StepGate::RevAnd || st.gate == StepGate::RevOr;
    std::string dir;
    bool ok = binary ? static_cast<bool>(ss >> st.a >> st.b >> st.target >> dir)
                     : static_cast<bool>(ss >> st.a >> st.target >> dir);
    if (!ok || (dir != "fwd" && dir != "inv"))
      throw ParseError(lineno, 0, "bad step line");
    st.forward = dir == "fwd";
    int w = s.input_width + s.ancilla_width + s.result_width;
    for (int wire : {st.a, st.b, st.target})
      if (wire != -1 && (wire < 0 || wire >= w))
        throw ParseError(lineno, 0, "wire index out of range");
    s.steps.push_back(st);
  }
  if (!saw_header) throw ParseError(lineno, 0, "empty schedule");
  return s;
}

}  // namespace revkit::bennett
