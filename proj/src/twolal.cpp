#include "revkit/twolal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "revkit/constants.hpp"
#include "revkit/errors.hpp"

namespace revkit::twolal {

namespace {
constexpr double kLevelEps = 1e-9;

// Rail index scheme: rail 2s is signal s's N rail, 2s+1 its P rail.
int n_rail_of(int sig) { return 2 * sig; }
int p_rail_of(int sig) { return 2 * sig + 1; }
double rest_of_rail(int rail) { return rail % 2 == 0 ? 0.0 : 1.0; }
}  // namespace

const char* rail_mode_name(RailMode m) {
  switch (m) {
    case RailMode::Held: return "held";
    case RailMode::Ramping: return "ramping";
    case RailMode::Floating: return "floating";
  }
  return "?";
}

const char* violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::TurnOnWithDifferential:
      return "turn_on_with_differential";
    case ViolationKind::TurnOffWhileConductingMidRamp:
      return "turn_off_while_conducting_mid_ramp";
    case ViolationKind::DriveFloatingNodeFromDifferentLevel:
      return "drive_floating_node_from_different_level";
  }
  return "?";
}

int Circuit::add_signal(const std::string& name) {
  if (find_signal(name) >= 0)
    throw ValidationError("duplicate signal: " + name);
  Signal s;
  s.name = name;
  s.n_rail = n_rail_of(static_cast<int>(signals.size()));
  s.p_rail = p_rail_of(static_cast<int>(signals.size()));
  signals.push_back(s);
  return static_cast<int>(signals.size()) - 1;
}

int Circuit::find_signal(const std::string& name) const {
  for (std::size_t i = 0; i < signals.size(); ++i)
    if (signals[i].name == name) return static_cast<int>(i);
  return -1;
}

void Circuit::validate() const {
  if (clock.ticks_per_interval < 2)
    throw ValidationError("ticks_per_interval must be >= 2");
  if (clock.intervals_per_cycle < 1)
    throw ValidationError("intervals_per_cycle must be >= 1");
  auto check_sig = [&](int s, const char* what) {
    if (s < 0 || s >= static_cast<int>(signals.size()))
      throw ValidationError(std::string("bad signal index in ") + what);
  };
  for (const auto& g : gates) {
    check_sig(g.control, "tgate control");
    check_sig(g.a, "tgate terminal");
    check_sig(g.b, "tgate terminal");
    if (g.a == g.b) throw ValidationError("tgate terminals must differ");
  }
  std::vector<char> driven(signals.size(), 0);
  for (const auto& d : drivers) {
    check_sig(d.signal, "driver");
    if (driven[static_cast<std::size_t>(d.signal)])
      throw ValidationError("signal has two drivers: " +
                            signals[static_cast<std::size_t>(d.signal)].name);
    driven[static_cast<std::size_t>(d.signal)] = 1;
    const Waveform& w = d.wave;
    switch (w.kind) {
      case WaveKind::ClockPhase:
        if (clock.intervals_per_cycle != 4)
          throw ValidationError("clock phases need 4 intervals per cycle");
        if (w.phase < 0 || w.phase > 3)
          throw ValidationError("clock phase must be 0..3");
        break;
      case WaveKind::Data:
        if (w.bits.empty()) throw ValidationError("data driver has no bits");
        for (int b : w.bits)
          if (b != 0 && b != 1) throw ValidationError("data bits must be 0/1");
        if (w.qoffset < 0 || w.qoffset > clock.intervals_per_cycle - 3)
          throw ValidationError("data window does not fit in the cycle");
        if (w.delay < 0) throw ValidationError("data delay must be >= 0");
        break;
      case WaveKind::Const:
        if (w.level != 0 && w.level != 1)
          throw ValidationError("const level must be 0 or 1");
        break;
      case WaveKind::Script:
        if (static_cast<int>(w.script.size()) != clock.intervals_per_cycle)
          throw ValidationError("script must list one entry per interval");
        for (const auto& e : w.script)
          if (e.target < 0.0 || e.target > 1.0)
            throw ValidationError("script targets must be in [0, 1]");
        break;
    }
  }
}

void add_or_element(Circuit& c, int a, int b, int drive, int q) {
  c.gates.push_back({a, false, drive, q});
  c.gates.push_back({b, false, drive, q});
}

void add_and_element(Circuit& c, int a, int b, int drive, int q) {
  int mid = c.add_signal(c.signals[static_cast<std::size_t>(q)].name + "__and_mid");
  c.gates.push_back({a, false, drive, mid});
  c.gates.push_back({b, false, mid, q});
}

void add_buf_element(Circuit& c, int a, int drive, int q) {
  c.gates.push_back({a, false, drive, q});
}

Circuit build_shift_register(int stages, const std::vector<int>& pattern) {
  if (stages < 1) throw ValidationError("shift register needs >= 1 stage");
  if (pattern.empty()) throw ValidationError("shift register needs a pattern");
  for (int b : pattern)
    if (b != 0 && b != 1) throw ValidationError("pattern bits must be 0/1");

  Circuit c;
  c.clock = ClockSpec{16, 4};
  int phi[4];
  for (int k = 0; k < 4; ++k) {
    phi[k] = c.add_signal("phi" + std::to_string(k));
    Waveform w;
    w.kind = WaveKind::ClockPhase;
    w.phase = k;
    c.drivers.push_back({phi[k], w});
  }

  int latches = 4 * stages;
  std::vector<int> s(static_cast<std::size_t>(latches) + 1);
  s[0] = c.add_signal("s0");
  {
    Waveform w;
    w.kind = WaveKind::Data;
    w.bits = pattern;
    w.delay = 0;
    w.qoffset = 0;
    c.drivers.push_back({s[0], w});
  }
  for (int i = 1; i <= latches; ++i)
    s[static_cast<std::size_t>(i)] = c.add_signal("s" + std::to_string(i));

  // Cell i: a forward gate charges s_i from phase i mod 4 while s_{i-1} is
  // valid, and a reverse gate later discharges s_{i-1} back into the phase
  // that charged it, steered by the fresh copy held on s_i.
  for (int i = 1; i <= latches; ++i) {
    c.gates.push_back({s[static_cast<std::size_t>(i - 1)], false, phi[i % 4],
                       s[static_cast<std::size_t>(i)]});
    c.gates.push_back({s[static_cast<std::size_t>(i)], false,
                       s[static_cast<std::size_t>(i - 1)], phi[(i - 1) % 4]});
  }

  // The environment absorbs the last cell's value: a driver that replays
  // the pattern with the pipeline delay steers the final discharge gate.
  int abs_sig = c.add_signal("absorb");
  {
    Waveform w;
    w.kind = WaveKind::Data;
    w.bits = pattern;
    w.delay = stages;
    w.qoffset = 1;
    c.drivers.push_back({abs_sig, w});
  }
  c.gates.push_back({abs_sig, false, s[static_cast<std::size_t>(latches)],
                     phi[latches % 4]});

  c.validate();
  return c;
}

int shift_register_input(const Circuit& c) { return c.find_signal("s0"); }

int shift_register_output(const Circuit& c) {
  int best = -1;
  for (std::size_t i = 0; i < c.signals.size(); ++i) {
    const std::string& n = c.signals[i].name;
    if (n.size() > 1 && n[0] == 's') best = static_cast<int>(i);
  }
  return best;
}

double EnergyLedger::adiabatic_total() const {
  double t = 0;
  for (const auto& e : adiabatic) t += e.energy;
  return t;
}

double EnergyLedger::violation_total() const {
  double t = 0;
  for (const auto& e : violations) t += e.energy;
  return t;
}

Simulator::Simulator(Circuit circuit, energy::TechnologyParams params)
    : circuit_(std::move(circuit)), params_(params) {
  circuit_.validate();
  params_.validate();
  ledger_.params = params_;
  e_adiabatic_full_ = energy::adiabatic_dissipation(params_);
  tick_seconds_ = params_.tau / circuit_.clock.ticks_per_interval;

  std::size_t nrails = 2 * circuit_.signals.size();
  level_.assign(nrails, 0.0);
  driver_of_rail_.assign(nrails, -1);
  for (std::size_t r = 0; r < nrails; ++r)
    level_[r] = rest_of_rail(static_cast<int>(r));
  for (std::size_t d = 0; d < circuit_.drivers.size(); ++d) {
    const Driver& drv = circuit_.drivers[d];
    int sn = n_rail_of(drv.signal), sp = p_rail_of(drv.signal);
    driver_of_rail_[static_cast<std::size_t>(sn)] = static_cast<int>(d);
    driver_of_rail_[static_cast<std::size_t>(sp)] = static_cast<int>(d);
    double init = driver_level(drv, -1);
    level_[static_cast<std::size_t>(sn)] = init;
    level_[static_cast<std::size_t>(sp)] = 1.0 - init;
  }
  prev_level_ = level_;
  interval_start_ = level_;
  last_delta_.assign(nrails, 0.0);
  mode_.assign(nrails, RailMode::Floating);
  conducting_.assign(circuit_.gates.size(), 0);
  // Settled pre-tick levels so the first conduction check sees time 0.
  for (std::size_t g = 0; g < circuit_.gates.size(); ++g)
    conducting_[g] = control_valid(circuit_.gates[g]) ? 1 : 0;
}

std::string Simulator::rail_name(int rail) const {
  const Signal& s = circuit_.signals[static_cast<std::size_t>(rail / 2)];
  return s.name + (rail % 2 == 0 ? ".n" : ".p");
}

int Simulator::cycle() const {
  return static_cast<int>(tick_ / (static_cast<long>(circuit_.clock.ticks_per_interval) *
                                   circuit_.clock.intervals_per_cycle));
}

int Simulator::interval() const {
  long gi = tick_ / circuit_.clock.ticks_per_interval;
  return static_cast<int>(gi % circuit_.clock.intervals_per_cycle);
}

namespace {

// N-rail target at the end of a global interval, by waveform kind.
double wave_target(const Waveform& w, const ClockSpec& clk, long gi) {
  long ipc = clk.intervals_per_cycle;
  long cycle = gi >= 0 ? gi / ipc : -1;
  int q = gi >= 0 ? static_cast<int>(gi % ipc) : static_cast<int>(ipc - 1);
  switch (w.kind) {
    case WaveKind::ClockPhase: {
      int rel = ((q - w.phase) % 4 + 4) % 4;
      return (rel == 0 || rel == 1) ? 1.0 : 0.0;
    }
    case WaveKind::Data: {
      int rel = q - w.qoffset;
      if (rel != 0 && rel != 1) return 0.0;
      if (cycle < w.delay) return 0.0;
      long idx = (cycle - w.delay) % static_cast<long>(w.bits.size());
      return static_cast<double>(w.bits[static_cast<std::size_t>(idx)]);
    }
    case WaveKind::Const:
      return static_cast<double>(w.level);
    case WaveKind::Script:
      return w.script[static_cast<std::size_t>(q)].target;
  }
  return 0.0;
}

bool wave_steps(const Waveform& w, const ClockSpec& clk, long gi) {
  if (w.kind != WaveKind::Script || gi < 0) return false;
  int q = static_cast<int>(gi % clk.intervals_per_cycle);
  return w.script[static_cast<std::size_t>(q)].step;
}

}  // namespace

// Level of the driver's N rail at the end of the given tick; tick -1 gives
// the initial (pre-simulation) level.
double Simulator::driver_level(const Driver& d, long t) const {
  const ClockSpec& clk = circuit_.clock;
  if (t < 0) return wave_target(d.wave, clk, -1);
  long gi = t / clk.ticks_per_interval;
  int k = static_cast<int>(t % clk.ticks_per_interval);
  double start = wave_target(d.wave, clk, gi - 1);
  double end = wave_target(d.wave, clk, gi);
  if (wave_steps(d.wave, clk, gi)) return end;
  return start + (end - start) * (static_cast<double>(k + 1) / clk.ticks_per_interval);
}

bool Simulator::control_valid(const TGate& g) const {
  double n = prev_level_[static_cast<std::size_t>(
      n_rail_of(g.control))];
  double p = prev_level_[static_cast<std::size_t>(p_rail_of(g.control))];
  if (!g.invert) return std::abs(n - 1.0) <= kLevelEps && std::abs(p) <= kLevelEps;
  return std::abs(n) <= kLevelEps && std::abs(p - 1.0) <= kLevelEps;
}

void Simulator::step() {
  const std::size_t nrails = level_.size();
  const int tpi = circuit_.clock.ticks_per_interval;
  prev_level_ = level_;

  std::vector<char> was_conducting = conducting_;
  for (std::size_t g = 0; g < circuit_.gates.size(); ++g)
    conducting_[g] = control_valid(circuit_.gates[g]) ? 1 : 0;

  // Drivers move first; everything else follows through conducting gates.
  std::vector<char> driver_moved(nrails, 0);
  for (const Driver& d : circuit_.drivers) {
    double n = driver_level(d, tick_);
    std::size_t rn = static_cast<std::size_t>(n_rail_of(d.signal));
    std::size_t rp = static_cast<std::size_t>(p_rail_of(d.signal));
    level_[rn] = n;
    level_[rp] = 1.0 - n;
    driver_moved[rn] = std::abs(level_[rn] - prev_level_[rn]) > kLevelEps;
    driver_moved[rp] = std::abs(level_[rp] - prev_level_[rp]) > kLevelEps;
  }

  // Union-find over rails through conducting gates.
  std::vector<int> parent(nrails);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  };
  for (std::size_t g = 0; g < circuit_.gates.size(); ++g) {
    if (!conducting_[g]) continue;
    const TGate& tg = circuit_.gates[g];
    unite(n_rail_of(tg.a), n_rail_of(tg.b));
    unite(p_rail_of(tg.a), p_rail_of(tg.b));
  }

  std::vector<int> order(nrails);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return find(a) < find(b); });

  double half_cv2 = 0.5 * energy::signal_energy(params_);
  auto emit_violation = [&](ViolationKind kind, int rail, double delta) {
    ViolationEvent ev;
    ev.tick = tick_;
    ev.kind = kind;
    ev.rail = rail;
    ev.energy = half_cv2 * delta * delta;
    ledger_.violations.push_back(ev);
    if (sink_)
      sink_({tick_, rail_name(rail), level_[static_cast<std::size_t>(rail)],
             rail_mode_name(mode_[static_cast<std::size_t>(rail)]),
             violation_name(kind), ev.energy});
  };

  std::vector<RailMode> mode_next(nrails, RailMode::Floating);
  double snap_threshold = 1.5 / tpi;

  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    int root = find(order[i]);
    while (j < order.size() && find(order[j]) == root) ++j;
    // Component is order[i..j).
    int drv_rail = -1;
    bool conflict = false;
    for (std::size_t k = i; k < j; ++k) {
      int r = order[k];
      if (driver_of_rail_[static_cast<std::size_t>(r)] < 0) continue;
      if (drv_rail < 0) {
        drv_rail = r;
      } else if (std::abs(level_[static_cast<std::size_t>(r)] -
                          level_[static_cast<std::size_t>(drv_rail)]) > kLevelEps) {
        conflict = true;
        throw ConflictError("drivers disagree on a connected component: " +
                            rail_name(drv_rail) + " vs " + rail_name(r));
      }
    }
    (void)conflict;

    if (drv_rail >= 0) {
      double target = level_[static_cast<std::size_t>(drv_rail)];
      bool moving = driver_moved[static_cast<std::size_t>(drv_rail)] != 0;
      for (std::size_t k = i; k < j; ++k) {
        int r = order[k];
        std::size_t ri = static_cast<std::size_t>(r);
        if (driver_of_rail_[ri] >= 0) {
          mode_next[ri] = driver_moved[ri] ? RailMode::Ramping : RailMode::Held;
          continue;
        }
        double delta = target - prev_level_[ri];
        if (std::abs(delta) > snap_threshold) {
          ViolationKind kind = mode_[ri] == RailMode::Floating
                                   ? ViolationKind::DriveFloatingNodeFromDifferentLevel
                                   : ViolationKind::TurnOnWithDifferential;
          level_[ri] = target;
          emit_violation(kind, r, delta);
          interval_start_[ri] = target;  // snap is not an adiabatic swing
        } else {
          level_[ri] = target;
        }
        mode_next[ri] = moving ? RailMode::Ramping : RailMode::Held;
      }
    } else if (j - i > 1) {
      // Floating island: newly merged latched rails must agree.
      int anchor = order[i];
      double base = prev_level_[static_cast<std::size_t>(anchor)];
      for (std::size_t k = i; k < j; ++k) {
        int r = order[k];
        std::size_t ri = static_cast<std::size_t>(r);
        double delta = base - prev_level_[ri];
        if (std::abs(delta) > kLevelEps) {
          level_[ri] = base;
          emit_violation(ViolationKind::DriveFloatingNodeFromDifferentLevel, r,
                         delta);
          interval_start_[ri] = base;
        }
        mode_next[ri] = RailMode::Floating;
      }
    }
    i = j;
  }

  // A gate that stops conducting while the path through it was mid-ramp
  // interrupts current; flag it unless a parallel path still closes the
  // connection.
  for (std::size_t g = 0; g < circuit_.gates.size(); ++g) {
    if (!was_conducting[g] || conducting_[g]) continue;
    const TGate& tg = circuit_.gates[g];
    if (find(n_rail_of(tg.a)) == find(n_rail_of(tg.b))) continue;
    for (int rail : {n_rail_of(tg.a), n_rail_of(tg.b), p_rail_of(tg.a),
                     p_rail_of(tg.b)}) {
      std::size_t ri = static_cast<std::size_t>(rail);
      if (std::abs(last_delta_[ri]) > kLevelEps) {
        double lvl = prev_level_[ri];
        double residual = std::min(lvl, 1.0 - lvl);
        emit_violation(ViolationKind::TurnOffWhileConductingMidRamp, rail,
                       residual);
        break;
      }
    }
  }

  for (std::size_t r = 0; r < nrails; ++r)
    last_delta_[r] = level_[r] - prev_level_[r];
  mode_ = mode_next;

  // Interval boundary: close out gradual transitions.
  if (tick_ % tpi == tpi - 1) {
    for (std::size_t r = 0; r < nrails; ++r) {
      if (driver_of_rail_[r] >= 0) continue;  // supply rails are lossless
      double swing = std::abs(level_[r] - interval_start_[r]);
      if (swing > kLevelEps) {
        AdiabaticEvent ev;
        ev.tick = tick_;
        ev.rail = static_cast<int>(r);
        ev.swing = swing;
        ev.energy = e_adiabatic_full_ * swing * swing;
        ledger_.adiabatic.push_back(ev);
        if (sink_)
          sink_({tick_, rail_name(static_cast<int>(r)), level_[r],
                 rail_mode_name(mode_[r]), "adiabatic", ev.energy});
      }
    }
    interval_start_ = level_;
  }

  double leak = params_.i_off * params_.v_swing * tick_seconds_ *
                static_cast<double>(circuit_.transistor_count());
  ledger_.leakage_total += leak;
  if (sink_) sink_({tick_, "*", 0.0, "-", "leakage", leak});

  ++tick_;
}

void Simulator::run_ticks(long n) {
  for (long i = 0; i < n; ++i) step();
}

void Simulator::run_cycles(int n) {
  run_ticks(static_cast<long>(n) * circuit_.clock.ticks_per_interval *
            circuit_.clock.intervals_per_cycle);
}

int Simulator::signal_logic(int signal) const {
  const Signal& s = circuit_.signals[static_cast<std::size_t>(signal)];
  double n = level_[static_cast<std::size_t>(s.n_rail)];
  double p = level_[static_cast<std::size_t>(s.p_rail)];
  if (std::abs(n - 1.0) <= kLevelEps && std::abs(p) <= kLevelEps) return 1;
  if (std::abs(n) <= kLevelEps && std::abs(p - 1.0) <= kLevelEps) return 0;
  return -1;
}

std::vector<std::string> Simulator::dual_rail_issues() const {
  std::vector<std::string> out;
  for (std::size_t s = 0; s < circuit_.signals.size(); ++s)
    if (signal_logic(static_cast<int>(s)) < 0)
      out.push_back(circuit_.signals[s].name);
  return out;
}

void Simulator::set_trace_sink(std::function<void(const TraceRow&)> sink) {
  sink_ = std::move(sink);
}

Summary energy_summary(const EnergyLedger& ledger, const Circuit& circuit,
                       double cycles) {
  Summary s;
  s.transistors = circuit.transistor_count();
  s.cycles = cycles;
  s.adiabatic_J = ledger.adiabatic_total();
  s.violation_J = ledger.violation_total();
  s.leakage_J = ledger.leakage_total;
  s.total_J = ledger.total();
  s.violation_count = ledger.violations.size();
  double norm = static_cast<double>(s.transistors) * cycles;
  if (norm > 0) {
    s.per_transistor_cycle_J = s.total_J / norm;
    s.per_transistor_cycle_eV = s.per_transistor_cycle_J / electron_volt;
    s.adiabatic_per_transistor_cycle_eV = s.adiabatic_J / norm / electron_volt;
    s.adiabatic_signal_ratio =
        (s.adiabatic_J / norm) / energy::signal_energy(ledger.params);
  }
  return s;
}

void write_trace_header(std::ostream& out) {
  out << "tick,node,level,mode,event_kind,energy_J\n";
}

void write_trace_row(std::ostream& out, const Simulator::TraceRow& row) {
  out.precision(17);
  out << row.tick << ',' << row.node << ',' << row.level << ',' << row.mode
      << ',' << row.event << ',' << row.energy << "\n";
}

TraceTotals read_trace_totals(std::istream& in) {
  TraceTotals t;
  std::string line;
  bool first = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (first) {
      first = false;
      continue;  // header
    }
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    if (cols.size() != 6) throw ParseError(lineno, 0, "expected 6 CSV columns");
    double energy;
    try {
      energy = std::stod(cols[5]);
    } catch (const std::exception&) {
      throw ParseError(lineno, 0, "bad energy value: " + cols[5]);
    }
    const std::string& kind = cols[4];
    if (kind == "adiabatic") t.adiabatic += energy;
    else if (kind == "leakage") t.leakage += energy;
    else t.violation += energy;
  }
  return t;
}

// --- circuit text format ---

namespace {

std::vector<std::vector<std::string>> read_stanzas(std::istream& in,
                                                   std::vector<int>& line_of) {
  std::vector<std::vector<std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    if (tokens.empty()) continue;
    out.push_back(std::move(tokens));
    line_of.push_back(lineno);
  }
  return out;
}

int require_signal(const Circuit& c, const std::string& name, int lineno) {
  int s = c.find_signal(name);
  if (s < 0) throw ParseError(lineno, 0, "unknown signal: " + name);
  return s;
}

int parse_int(const std::string& s, int lineno) {
  try {
    std::size_t pos;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(lineno, 0, "bad integer: " + s);
  }
}

std::vector<int> parse_bits(const std::string& s, int lineno) {
  std::vector<int> bits;
  for (char ch : s) {
    if (ch != '0' && ch != '1')
      throw ParseError(lineno, 0, "bits must be 0/1: " + s);
    bits.push_back(ch - '0');
  }
  return bits;
}

}  // namespace

Circuit parse_circuit(std::istream& in) {
  std::vector<int> line_of;
  auto stanzas = read_stanzas(in, line_of);
  Circuit c;

  for (std::size_t si = 0; si < stanzas.size(); ++si) {
    const auto& t = stanzas[si];
    int ln = line_of[si];
    const std::string& head = t[0];

    if (head == "clock") {
      if (t.size() != 3)
        throw ParseError(ln, 0, "expected 'clock <ticks_per_interval> <intervals_per_cycle>'");
      c.clock.ticks_per_interval = parse_int(t[1], ln);
      c.clock.intervals_per_cycle = parse_int(t[2], ln);
    } else if (head == "signal") {
      if (t.size() != 2) throw ParseError(ln, 0, "expected 'signal <name>'");
      if (c.find_signal(t[1]) >= 0)
        throw ParseError(ln, 0, "duplicate signal: " + t[1]);
      c.add_signal(t[1]);
    } else if (head == "driver") {
      if (t.size() < 3) throw ParseError(ln, 0, "driver needs a signal and a kind");
      int sig = require_signal(c, t[1], ln);
      Waveform w;
      const std::string& kind = t[2];
      if (kind == "phase") {
        if (t.size() != 4) throw ParseError(ln, 0, "expected 'driver <sig> phase <k>'");
        w.kind = WaveKind::ClockPhase;
        w.phase = parse_int(t[3], ln);
      } else if (kind == "data") {
        if (t.size() < 4) throw ParseError(ln, 0, "expected 'driver <sig> data <bits> ...'");
        w.kind = WaveKind::Data;
        w.bits = parse_bits(t[3], ln);
        for (std::size_t a = 4; a < t.size(); a += 2) {
          if (a + 1 >= t.size())
            throw ParseError(ln, 0, "data options come in pairs");
          if (t[a] == "delay") w.delay = parse_int(t[a + 1], ln);
          else if (t[a] == "qoffset") w.qoffset = parse_int(t[a + 1], ln);
          else throw ParseError(ln, 0, "unknown data option: " + t[a]);
        }
      } else if (kind == "const") {
        if (t.size() != 4) throw ParseError(ln, 0, "expected 'driver <sig> const <0|1>'");
        w.kind = WaveKind::Const;
        w.level = parse_int(t[3], ln);
      } else if (kind == "script") {
        w.kind = WaveKind::Script;
        double prev_target = -1;
        std::vector<std::optional<double>> targets;
        std::vector<bool> steps;
        for (std::size_t a = 3; a < t.size(); ++a) {
          const std::string& e = t[a];
          if (e == "hold") {
            targets.push_back(std::nullopt);
            steps.push_back(false);
          } else if (e.rfind("ramp:", 0) == 0 || e.rfind("step:", 0) == 0) {
            try {
              targets.push_back(std::stod(e.substr(5)));
            } catch (const std::exception&) {
              throw ParseError(ln, 0, "bad script level: " + e);
            }
            steps.push_back(e[0] == 's');
          } else {
            throw ParseError(ln, 0, "bad script entry: " + e);
          }
        }
        // 'hold' repeats the previous target, wrapping from the end.
        for (auto it = targets.rbegin(); it != targets.rend(); ++it)
          if (*it) {
            prev_target = **it;
            break;
          }
        if (prev_target < 0) prev_target = 0;
        for (std::size_t a = 0; a < targets.size(); ++a) {
          double tgt = targets[a] ? *targets[a] : prev_target;
          prev_target = tgt;
          w.script.push_back({tgt, steps[a]});
        }
      } else {
        throw ParseError(ln, 0, "unknown driver kind: " + kind);
      }
      c.drivers.push_back({sig, w});
    } else if (head == "tgate") {
      if (t.size() != 4 && !(t.size() == 5 && t[4] == "inv"))
        throw ParseError(ln, 0, "expected 'tgate <ctrl> <a> <b> [inv]'");
      TGate g;
      g.control = require_signal(c, t[1], ln);
      g.a = require_signal(c, t[2], ln);
      g.b = require_signal(c, t[3], ln);
      g.invert = t.size() == 5;
      c.gates.push_back(g);
    } else if (head == "element") {
      if (t.size() < 2) throw ParseError(ln, 0, "element needs a kind");
      const std::string& kind = t[1];
      if (kind == "or" || kind == "and") {
        if (t.size() != 6)
          throw ParseError(ln, 0, "expected 'element " + kind + " <a> <b> <drive> <out>'");
        int a = require_signal(c, t[2], ln);
        int b = require_signal(c, t[3], ln);
        int d = require_signal(c, t[4], ln);
        int q = require_signal(c, t[5], ln);
        if (kind == "or") add_or_element(c, a, b, d, q);
        else add_and_element(c, a, b, d, q);
      } else if (kind == "buf") {
        if (t.size() != 5)
          throw ParseError(ln, 0, "expected 'element buf <a> <drive> <out>'");
        add_buf_element(c, require_signal(c, t[2], ln), require_signal(c, t[3], ln),
                        require_signal(c, t[4], ln));
      } else {
        throw ParseError(ln, 0, "unknown element kind: " + kind);
      }
    } else if (head == "shiftreg") {
      if (t.size() != 3) throw ParseError(ln, 0, "expected 'shiftreg <stages> <pattern>'");
      if (!c.signals.empty() || !c.gates.empty() || !c.drivers.empty())
        throw ParseError(ln, 0, "shiftreg must be the only structure in the file");
      ClockSpec keep = c.clock;
      c = build_shift_register(parse_int(t[1], ln), parse_bits(t[2], ln));
      c.clock.ticks_per_interval = keep.ticks_per_interval;
    } else {
      throw ParseError(ln, 0, "unknown stanza: " + head);
    }
  }

  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw ParseError(line_of.empty() ? 1 : line_of.back(), 0, e.what());
  }
  return c;
}

Circuit parse_circuit_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open circuit file: " + path);
  return parse_circuit(f);
}

Circuit build_or_demo(int a_bit, int b_bit, DecomputeOption option) {
  if ((a_bit != 0 && a_bit != 1) || (b_bit != 0 && b_bit != 1))
    throw ValidationError("input bits must be 0/1");
  Circuit c;
  c.clock = ClockSpec{16, 4};
  int a = c.add_signal("a");
  int b = c.add_signal("b");
  int d = c.add_signal("d");
  int q = c.add_signal("q");
  auto script = [&](std::initializer_list<double> targets) {
    Waveform w;
    w.kind = WaveKind::Script;
    for (double t : targets) w.script.push_back({t, false});
    return w;
  };
  double av = a_bit, bv = b_bit;
  if (option == DecomputeOption::LatchOutput) {
    // Inputs decompute in the third interval; the drive rail stays up until
    // the gates are off, leaving q latched.
    c.drivers.push_back({a, script({av, av, 0, 0})});
    c.drivers.push_back({b, script({bv, bv, 0, 0})});
    c.drivers.push_back({d, script({0, 1, 1, 0})});
  } else {
    // The drive rail restores in the third interval with inputs held,
    // decomputing q; inputs then return to rest.
    c.drivers.push_back({a, script({av, av, av, 0})});
    c.drivers.push_back({b, script({bv, bv, bv, 0})});
    c.drivers.push_back({d, script({0, 1, 0, 0})});
  }
  add_or_element(c, a, b, d, q);
  c.validate();
  return c;
}

}  // namespace revkit::twolal
