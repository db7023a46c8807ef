#pragma once

// Tick-level simulator for dual-rail adiabatic pass-gate pipelines.
//
// Encoding convention, used everywhere below:
//   - every logical signal is a rail pair (N, P) with P nominally at 1 - N;
//   - rest state (logic 0): N = 0, P = 1;
//   - valid 1: N = 1, P = 0;
//   - levels are normalized to [0, 1], 1 meaning the full supply swing.
// With this convention an input held at logic 0 causes no transitions at
// all: rails sit at their rest levels and only leakage accrues.
//
// Transmission gates connect two signals (both rails pairwise) while their
// control signal is at a valid logic level: a normal gate conducts on
// valid 1, an inverted gate on valid 0 (rest). Mid-swing controls never
// conduct. Energy is booked per rail: a gradual swing costs the adiabatic
// dissipation for the configured ramp time scaled by swing squared, and
// the non-adiabatic rule violations cost CV^2/2 scaled by the squared
// level mismatch.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "revkit/energy.hpp"

namespace revkit::twolal {

enum class RailMode { Held, Ramping, Floating };
const char* rail_mode_name(RailMode m);

enum class WaveKind { ClockPhase, Data, Const, Script };

// One interval of a scripted driver: ramp (or step) to `target`.
struct ScriptEntry {
  double target = 0.0;
  bool step = false;
};

// Driver waveform, expressed on the N rail; the P rail mirrors it.
//
// ClockPhase k (requires 4 intervals per cycle): ramp up during quarter k,
// hold high, ramp down during quarter k+2, hold low. Data: after `delay`
// cycles, per cycle ramp to the next pattern bit during quarter `qoffset`,
// hold it one quarter, ramp back to rest; repeats the pattern. Const: pin
// the rail. Script: one entry per interval, repeated every cycle.
struct Waveform {
  WaveKind kind = WaveKind::Const;
  int phase = 0;                    // ClockPhase
  std::vector<int> bits;            // Data
  int delay = 0;                    // Data: cycles before the pattern starts
  int qoffset = 0;                  // Data: quarter in which the ramp-up runs
  int level = 0;                    // Const
  std::vector<ScriptEntry> script;  // Script
};

struct Signal {
  std::string name;
  int n_rail = -1;
  int p_rail = -1;
};

// Dual-rail transmission gate: 4 physical transistors (one CMOS pair per
// rail). Connects a<->b pairwise while `control` is valid (inverted: while
// control is at rest).
struct TGate {
  int control = -1;
  bool invert = false;
  int a = -1;
  int b = -1;
};

struct Driver {
  int signal = -1;
  Waveform wave;
};

struct ClockSpec {
  int ticks_per_interval = 16;
  int intervals_per_cycle = 4;
};

struct Circuit {
  ClockSpec clock;
  std::vector<Signal> signals;
  std::vector<TGate> gates;
  std::vector<Driver> drivers;

  int add_signal(const std::string& name);
  int find_signal(const std::string& name) const;  // -1 when absent
  long transistor_count() const { return 4 * static_cast<long>(gates.size()); }
  void validate() const;
};

// Element builders (dual-rail, pass-gate logic on the shared convention).
// OR: two gates in parallel from drive to out. AND: two gates in series
// through a fresh internal signal. BUF: a single gate.
void add_or_element(Circuit& c, int a, int b, int drive, int q);
void add_and_element(Circuit& c, int a, int b, int drive, int q);
void add_buf_element(Circuit& c, int a, int drive, int q);

// Shift register with 4 pass-gate cells per stage, one stage of delay per
// clock cycle. Cell i charges from phase i mod 4 under control of cell
// i-1 and is later discharged back into its phase under control of cell
// i+1's copy. The pattern enters through a data driver on s0 and the
// environment absorbs the output through a delayed copy of the pattern.
Circuit build_shift_register(int stages, const std::vector<int>& pattern);
int shift_register_input(const Circuit& c);   // signal index of s0
int shift_register_output(const Circuit& c);  // signal index of the last cell

// Single OR element driven through one canonical compute/decompute cycle.
// LatchOutput: inputs decompute first, q stays latched on its rails.
// RestoreDrive: the drive rail restores first, decomputing q.
enum class DecomputeOption { LatchOutput = 1, RestoreDrive = 2 };
Circuit build_or_demo(int a_bit, int b_bit, DecomputeOption option);

// Text format (one stanza per line, '#' comments):
//   clock <ticks_per_interval> <intervals_per_cycle>
//   signal <name>
//   driver <sig> phase <0..3>
//   driver <sig> data <bits> [delay <n>] [qoffset <q>]
//   driver <sig> const <0|1>
//   driver <sig> script <entry>...   entry: ramp:<lvl> | step:<lvl> | hold
//   tgate <ctrl> <a> <b> [inv]
//   element or|and <a> <b> <drive> <out>
//   element buf <a> <drive> <out>
//   shiftreg <stages> <pattern>
Circuit parse_circuit(std::istream& in);
Circuit parse_circuit_file(const std::string& path);

enum class ViolationKind {
  TurnOnWithDifferential,
  TurnOffWhileConductingMidRamp,
  DriveFloatingNodeFromDifferentLevel,
};
const char* violation_name(ViolationKind k);

struct AdiabaticEvent {
  long tick = 0;
  int rail = -1;
  double swing = 0.0;
  double energy = 0.0;
};

struct ViolationEvent {
  long tick = 0;
  ViolationKind kind = ViolationKind::TurnOnWithDifferential;
  int rail = -1;
  double energy = 0.0;
};

struct EnergyLedger {
  energy::TechnologyParams params;
  std::vector<AdiabaticEvent> adiabatic;
  std::vector<ViolationEvent> violations;
  double leakage_total = 0.0;

  double adiabatic_total() const;
  double violation_total() const;
  double total() const {
    return adiabatic_total() + violation_total() + leakage_total;
  }
};

class Simulator {
 public:
  Simulator(Circuit circuit, energy::TechnologyParams params);

  void step();  // advance one tick
  void run_ticks(long n);
  void run_cycles(int n);

  long tick() const { return tick_; }
  int cycle() const;
  int interval() const;  // interval index within the current cycle

  const Circuit& circuit() const { return circuit_; }
  const EnergyLedger& ledger() const { return ledger_; }

  double rail_level(int rail) const {
    return level_[static_cast<std::size_t>(rail)];
  }
  RailMode rail_mode(int rail) const {
    return mode_[static_cast<std::size_t>(rail)];
  }
  std::string rail_name(int rail) const;

  // +1 / 0 for a signal at a valid level, -1 otherwise.
  int signal_logic(int signal) const;
  // Names of signals whose rail pair is not at a valid level right now.
  std::vector<std::string> dual_rail_issues() const;

  struct TraceRow {
    long tick;
    std::string node;
    double level;
    std::string mode;
    std::string event;
    double energy;
  };
  void set_trace_sink(std::function<void(const TraceRow&)> sink);

 private:
  double driver_level(const Driver& d, long t) const;
  bool control_valid(const TGate& g) const;

  Circuit circuit_;
  energy::TechnologyParams params_;
  EnergyLedger ledger_;
  double e_adiabatic_full_ = 0.0;
  double tick_seconds_ = 0.0;

  long tick_ = 0;
  std::vector<double> level_;
  std::vector<double> prev_level_;
  std::vector<double> interval_start_;
  std::vector<double> last_delta_;
  std::vector<RailMode> mode_;
  std::vector<int> driver_of_rail_;
  std::vector<char> conducting_;
  std::function<void(const TraceRow&)> sink_;
};

struct Summary {
  long transistors = 0;
  double cycles = 0;
  double adiabatic_J = 0;
  double violation_J = 0;
  double leakage_J = 0;
  double total_J = 0;
  std::size_t violation_count = 0;
  double per_transistor_cycle_J = 0;
  double per_transistor_cycle_eV = 0;
  double adiabatic_per_transistor_cycle_eV = 0;
  double adiabatic_signal_ratio = 0;  // adiabatic per transistor-cycle / CV^2
};
Summary energy_summary(const EnergyLedger& ledger, const Circuit& circuit,
                       double cycles);

struct TraceTotals {
  double adiabatic = 0;
  double violation = 0;
  double leakage = 0;
};

void write_trace_header(std::ostream& out);
void write_trace_row(std::ostream& out, const Simulator::TraceRow& row);
TraceTotals read_trace_totals(std::istream& in);

}  // namespace revkit::twolal
