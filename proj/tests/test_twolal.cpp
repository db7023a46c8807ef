#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "revkit/constants.hpp"
#include "revkit/energy.hpp"
#include "revkit/errors.hpp"
#include "revkit/twolal.hpp"
#include "testutil.hpp"

using namespace revkit;
using namespace revkit::twolal;

namespace {

energy::TechnologyParams defaults;

Simulator make_sim(Circuit c) { return Simulator(std::move(c), defaults); }

int rail_n(const Circuit& c, const std::string& name) {
  return c.signals[static_cast<std::size_t>(c.find_signal(name))].n_rail;
}

}  // namespace

TEST_CASE("circuit validation catches wiring mistakes") {
  Circuit c;
  c.add_signal("a");
  CHECK_THROWS_AS(c.add_signal("a"), ValidationError);
  int b = c.add_signal("b");

  c.gates.push_back({0, false, 1, 1});  // both terminals on b
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.gates.clear();

  Waveform w;
  w.kind = WaveKind::Const;
  w.level = 1;
  c.drivers.push_back({b, w});
  c.drivers.push_back({b, w});
  CHECK_THROWS_AS(c.validate(), ValidationError);  // two drivers, one signal
  c.drivers.pop_back();

  c.clock.ticks_per_interval = 1;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.clock.ticks_per_interval = 16;

  Waveform phase;
  phase.kind = WaveKind::ClockPhase;
  phase.phase = 5;
  c.drivers.push_back({0, phase});
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.drivers.back().wave.phase = 2;
  CHECK_NOTHROW(c.validate());

  Waveform data;
  data.kind = WaveKind::Data;
  data.bits = {1, 0};
  data.qoffset = 2;  // ramp-down quarter would spill into the next cycle
  c.drivers.back() = {0, data};
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("clock phases tile the cycle in quadrature") {
  Simulator sim = make_sim(build_shift_register(1, {1}));
  const Circuit& c = sim.circuit();
  // Before the first tick: phases 2 and 3 idle high, 0 and 1 low.
  CHECK(sim.rail_level(rail_n(c, "phi0")) == 0.0);
  CHECK(sim.rail_level(rail_n(c, "phi1")) == 0.0);
  CHECK(sim.rail_level(rail_n(c, "phi2")) == 1.0);
  CHECK(sim.rail_level(rail_n(c, "phi3")) == 1.0);

  sim.run_ticks(16);  // end of quarter 0
  CHECK(sim.rail_level(rail_n(c, "phi0")) == 1.0);
  CHECK(sim.rail_level(rail_n(c, "phi1")) == 0.0);
  CHECK(sim.rail_level(rail_n(c, "phi2")) == 0.0);
  CHECK(sim.rail_level(rail_n(c, "phi3")) == 1.0);

  sim.run_ticks(16);  // end of quarter 1
  CHECK(sim.rail_level(rail_n(c, "phi0")) == 1.0);
  CHECK(sim.rail_level(rail_n(c, "phi1")) == 1.0);
  CHECK(sim.rail_level(rail_n(c, "phi2")) == 0.0);
  CHECK(sim.rail_level(rail_n(c, "phi3")) == 0.0);

  // P rails mirror N rails tick for tick.
  int phi0 = c.find_signal("phi0");
  CHECK(sim.rail_level(c.signals[static_cast<std::size_t>(phi0)].p_rail) == 0.0);
}

TEST_CASE("or element computes and latches") {
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b <= 1; ++b) {
      Simulator sim = make_sim(build_or_demo(a, b, DecomputeOption::LatchOutput));
      int q = sim.circuit().find_signal("q");
      sim.run_ticks(32);  // settled end of the compute quarter
      CHECK(sim.signal_logic(q) == (a | b));
      sim.run_ticks(32);  // finish the cycle
      CHECK(sim.signal_logic(q) == (a | b));  // still latched
      if (a | b) CHECK(sim.rail_mode(rail_n(sim.circuit(), "q")) == RailMode::Floating);
      CHECK(sim.ledger().violations.empty());
    }
  }
}

TEST_CASE("or element decomputes through the drive rail") {
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b <= 1; ++b) {
      Simulator sim = make_sim(build_or_demo(a, b, DecomputeOption::RestoreDrive));
      int q = sim.circuit().find_signal("q");
      sim.run_ticks(32);
      CHECK(sim.signal_logic(q) == (a | b));
      sim.run_ticks(32);
      CHECK(sim.signal_logic(q) == 0);  // energy handed back to the drive rail
      CHECK(sim.ledger().violations.empty());
      CHECK(sim.dual_rail_issues().empty());
    }
  }
}

TEST_CASE("a resting input costs nothing but leakage") {
  Simulator sim = make_sim(build_or_demo(0, 0, DecomputeOption::RestoreDrive));
  sim.run_cycles(1);
  CHECK(sim.ledger().adiabatic.empty());
  CHECK(sim.ledger().violations.empty());
  CHECK(sim.ledger().total() == sim.ledger().leakage_total);
  CHECK(sim.ledger().leakage_total > 0.0);
}

TEST_CASE("every full swing books the ramp energy exactly") {
  Simulator sim = make_sim(build_or_demo(1, 0, DecomputeOption::RestoreDrive));
  sim.run_cycles(1);
  const EnergyLedger& led = sim.ledger();

  // q.n and q.p each swing once up (end of quarter 1) and once down (end of
  // quarter 2); drivers book nothing.
  REQUIRE(led.adiabatic.size() == 4);
  double e1 = energy::adiabatic_dissipation(defaults);
  for (const AdiabaticEvent& ev : led.adiabatic) {
    CHECK(ev.swing == 1.0);
    CHECK(ev.energy == e1);
    CHECK((ev.tick == 31 || ev.tick == 47));
  }
  CHECK(led.adiabatic_total() == ((e1 + e1) + e1) + e1);

  // Latching instead skips the give-back swing.
  Simulator latch = make_sim(build_or_demo(1, 0, DecomputeOption::LatchOutput));
  latch.run_cycles(1);
  CHECK(latch.ledger().adiabatic.size() == 2);
}

TEST_CASE("parallel gates passing the same level do not conflict") {
  Simulator sim = make_sim(build_or_demo(1, 1, DecomputeOption::RestoreDrive));
  CHECK_NOTHROW(sim.run_cycles(1));
  CHECK(sim.ledger().violations.empty());
}

TEST_CASE("and element conducts only when both inputs are valid ones") {
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b <= 1; ++b) {
      Circuit c;
      c.clock = ClockSpec{16, 4};
      int ia = c.add_signal("a");
      int ib = c.add_signal("b");
      int id = c.add_signal("d");
      int iq = c.add_signal("q");
      auto script = [](std::initializer_list<double> t) {
        Waveform w;
        w.kind = WaveKind::Script;
        for (double x : t) w.script.push_back({x, false});
        return w;
      };
      double av = a, bv = b;
      c.drivers.push_back({ia, script({av, av, av, 0})});
      c.drivers.push_back({ib, script({bv, bv, bv, 0})});
      c.drivers.push_back({id, script({0, 1, 0, 0})});
      add_and_element(c, ia, ib, id, iq);

      Simulator sim = make_sim(std::move(c));
      sim.run_ticks(32);
      CHECK(sim.signal_logic(iq) == (a & b));
      sim.run_ticks(32);
      CHECK(sim.signal_logic(iq) == 0);
      CHECK(sim.ledger().violations.empty());
      CHECK(sim.dual_rail_issues().empty());  // the internal node restores too
    }
  }
}

TEST_CASE("losing the control mid-transfer is flagged once") {
  // Downstream buffer keeps charging from d2 while its control q decomputes:
  // the path is cut with current flowing.
  Circuit c = build_or_demo(1, 0, DecomputeOption::RestoreDrive);
  int d2 = c.add_signal("d2");
  int r = c.add_signal("r");
  Waveform w;
  w.kind = WaveKind::Script;
  w.script = {{0, false}, {0, false}, {1, false}, {0, false}};
  c.drivers.push_back({d2, w});
  add_buf_element(c, c.find_signal("q"), d2, r);

  Simulator sim = make_sim(std::move(c));
  sim.run_cycles(1);
  const auto& vs = sim.ledger().violations;
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].kind == ViolationKind::TurnOffWhileConductingMidRamp);
  CHECK(vs[0].tick == 33);  // one tick after the decompute quarter starts
  // One tick of ramp was in flight: the stranded charge is 1/16 of a swing.
  double expect = 0.5 * energy::signal_energy(defaults) * (1.0 / 16) * (1.0 / 16);
  CHECK(vs[0].energy == expect);
  // The orphaned output rail floats at an invalid level from then on.
  std::vector<std::string> issues = sim.dual_rail_issues();
  REQUIRE(issues.size() == 1);
  CHECK(issues[0] == "r");
}

TEST_CASE("stepping a held node costs half CV^2 per rail") {
  Circuit c = parse_circuit_file(testutil::data_file("bad_step_driver.ckt"));
  Simulator sim(std::move(c), defaults);
  sim.run_cycles(1);
  const auto& vs = sim.ledger().violations;
  REQUIRE(vs.size() == 4);  // two rails at the step up, two at the step down
  double half_cv2 = 0.5 * energy::signal_energy(defaults);
  for (const auto& v : vs) {
    CHECK(v.kind == ViolationKind::TurnOnWithDifferential);
    CHECK(v.energy == half_cv2);
    CHECK((v.tick == 16 || v.tick == 48));
  }
}

TEST_CASE("re-driving a latched node from a new level is non-adiabatic") {
  Circuit c = parse_circuit_file(testutil::data_file("latched_redrive.ckt"));
  Simulator sim(std::move(c), defaults);
  sim.run_cycles(2);
  const auto& vs = sim.ledger().violations;
  REQUIRE(vs.size() == 2);
  // q floats at a full 1 while d starts its ramp from 0: the first reconnect
  // tick yanks q to d's 1/16 point, a 15/16 differential.
  double expect = 0.5 * energy::signal_energy(defaults) * (15.0 / 16) * (15.0 / 16);
  for (const auto& v : vs) {
    CHECK(v.kind == ViolationKind::DriveFloatingNodeFromDifferentLevel);
    CHECK(v.tick == 80);
    CHECK(v.energy == expect);
  }
}

TEST_CASE("shorted drivers abort the simulation") {
  Circuit c = parse_circuit_file(testutil::data_file("conflict.ckt"));
  Simulator sim(std::move(c), defaults);
  try {
    sim.step();
    FAIL_CHECK("conflicting drivers must throw");
  } catch (const ConflictError& e) {
    std::string what = e.what();
    CHECK(what.find("x.n") != std::string::npos);
    CHECK(what.find("y.n") != std::string::npos);
  }
}

TEST_CASE("shift register structure") {
  Circuit c = build_shift_register(2, {1, 0});
  // 4 clock phases, s0..s8, and the absorber control.
  CHECK(c.signals.size() == 14);
  CHECK(c.gates.size() == 17);  // two per latch plus the absorber gate
  CHECK(c.transistor_count() == 68);
  CHECK(c.signals[static_cast<std::size_t>(shift_register_input(c))].name == "s0");
  CHECK(c.signals[static_cast<std::size_t>(shift_register_output(c))].name == "s8");

  CHECK_THROWS_AS(build_shift_register(0, {1}), ValidationError);
  CHECK_THROWS_AS(build_shift_register(2, {}), ValidationError);
  CHECK_THROWS_AS(build_shift_register(2, {2}), ValidationError);
}

TEST_CASE("shift register delays the pattern by one cycle per stage") {
  std::vector<int> pattern{1, 0, 1, 1, 0};
  for (int stages : {1, 3}) {
    Simulator sim = make_sim(build_shift_register(stages, pattern));
    int out = shift_register_output(sim.circuit());
    int cycles = stages + 2 * static_cast<int>(pattern.size());
    std::vector<int> got = testutil::sample_shift_register(sim, out, cycles);
    CHECK(got == testutil::delay_oracle(pattern, stages, cycles));
    CHECK(sim.ledger().violations.empty());
    // Every booked swing is a clean full swing.
    for (const AdiabaticEvent& ev : sim.ledger().adiabatic) CHECK(ev.swing == 1.0);
  }
}

TEST_CASE("identical runs produce identical ledgers and levels") {
  auto run = [] {
    Simulator sim = make_sim(build_shift_register(4, {1, 1, 0, 1}));
    sim.run_cycles(12);
    return sim;
  };
  Simulator s1 = run();
  Simulator s2 = run();
  CHECK(s1.ledger().adiabatic_total() == s2.ledger().adiabatic_total());
  CHECK(s1.ledger().leakage_total == s2.ledger().leakage_total);
  CHECK(s1.ledger().adiabatic.size() == s2.ledger().adiabatic.size());
  for (std::size_t i = 0; i < s1.ledger().adiabatic.size(); ++i) {
    CHECK(s1.ledger().adiabatic[i].tick == s2.ledger().adiabatic[i].tick);
    CHECK(s1.ledger().adiabatic[i].rail == s2.ledger().adiabatic[i].rail);
    CHECK(s1.ledger().adiabatic[i].energy == s2.ledger().adiabatic[i].energy);
  }
  for (std::size_t r = 0; r < 2 * s1.circuit().signals.size(); ++r)
    CHECK(s1.rail_level(static_cast<int>(r)) == s2.rail_level(static_cast<int>(r)));
}

TEST_CASE("halving the ramp time doubles the adiabatic bill") {
  auto total = [](double tau) {
    energy::TechnologyParams p;
    p.tau = tau;
    Simulator sim(build_shift_register(2, {1, 0, 1}), p);
    sim.run_cycles(10);
    CHECK(sim.ledger().violations.empty());
    return sim.ledger().adiabatic_total();
  };
  double slow = total(2e-6);
  double fast = total(1e-6);
  CHECK(fast == 2.0 * slow);
}

TEST_CASE("leakage accrues per transistor-tick") {
  Simulator sim = make_sim(build_or_demo(0, 0, DecomputeOption::LatchOutput));
  sim.run_ticks(10);
  double per_tick = defaults.i_off * defaults.v_swing * (defaults.tau / 16) *
                    static_cast<double>(sim.circuit().transistor_count());
  CHECK(sim.ledger().leakage_total ==
        doctest::Approx(10 * per_tick).epsilon(1e-12));
}

TEST_CASE("mid-ramp signals are reported as invalid") {
  Simulator sim = make_sim(build_or_demo(1, 0, DecomputeOption::RestoreDrive));
  sim.run_ticks(8);  // a is halfway up its ramp
  int a = sim.circuit().find_signal("a");
  CHECK(sim.signal_logic(a) == -1);
  std::vector<std::string> issues = sim.dual_rail_issues();
  REQUIRE(issues.size() == 1);
  CHECK(issues[0] == "a");
}

TEST_CASE("trace rows reproduce the ledger totals exactly") {
  Circuit c = build_shift_register(2, {1, 0, 1, 1});
  Simulator sim = make_sim(std::move(c));
  std::ostringstream csv;
  write_trace_header(csv);
  sim.set_trace_sink([&](const Simulator::TraceRow& row) { write_trace_row(csv, row); });
  sim.run_cycles(8);

  std::istringstream back(csv.str());
  TraceTotals t = read_trace_totals(back);
  CHECK(t.adiabatic == sim.ledger().adiabatic_total());
  CHECK(t.violation == sim.ledger().violation_total());
  CHECK(t.leakage == sim.ledger().leakage_total);
  CHECK(t.adiabatic > 0.0);

  std::istringstream broken("tick,node\n1,x.n,0.5,held\n");
  CHECK_THROWS_AS(read_trace_totals(broken), ParseError);
}

TEST_CASE("energy summary normalizes per transistor-cycle") {
  Simulator sim = make_sim(build_or_demo(1, 0, DecomputeOption::RestoreDrive));
  sim.run_cycles(1);
  Summary s = energy_summary(sim.ledger(), sim.circuit(), 1.0);
  CHECK(s.transistors == 8);
  CHECK(s.violation_count == 0);
  CHECK(s.adiabatic_J == sim.ledger().adiabatic_total());
  CHECK(s.per_transistor_cycle_J == s.total_J / 8.0);
  CHECK(s.per_transistor_cycle_eV == s.per_transistor_cycle_J / electron_volt);
  CHECK(s.adiabatic_signal_ratio ==
        (s.adiabatic_J / 8.0) / energy::signal_energy(defaults));
}

TEST_CASE("circuit files parse into the same structures") {
  Circuit c = parse_circuit_file(testutil::data_file("sr8.ckt"));
  CHECK(c.clock.ticks_per_interval == 16);
  CHECK(c.clock.intervals_per_cycle == 4);
  CHECK(c.signals.size() == 38);  // 4 phases + s0..s32 + absorb
  CHECK(c.gates.size() == 65);
  CHECK(c.drivers.size() == 6);
  CHECK(c.transistor_count() == 260);
}

TEST_CASE("script hold entries repeat the previous target") {
  std::istringstream in(
      "clock 16 4\n"
      "signal d\n"
      "driver d script hold ramp:1 hold ramp:0\n");
  Circuit c = parse_circuit(in);
  const auto& s = c.drivers[0].wave.script;
  REQUIRE(s.size() == 4);
  CHECK(s[0].target == 0.0);  // leading hold wraps around to the final ramp:0
  CHECK(s[1].target == 1.0);
  CHECK(s[2].target == 1.0);
  CHECK(s[3].target == 0.0);
  CHECK_FALSE(s[1].step);
}

TEST_CASE("circuit parse errors carry line numbers") {
  auto expect_line = [](const std::string& text, int line) {
    std::istringstream in(text);
    try {
      parse_circuit(in);
      FAIL_CHECK("expected ParseError for:\n" << text);
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
    }
  };
  expect_line("clock 16 4\nwobble x\n", 2);                       // unknown stanza
  expect_line("clock 16 4\nsignal a\nsignal a\n", 3);             // duplicate
  expect_line("clock 16 4\nsignal a\ntgate a b c\n", 3);          // unknown signal
  expect_line("clock 16 4\nsignal a\ndriver a const 2\n", 3);     // bad const level
  expect_line("clock 16\n", 1);                                   // short clock stanza
  expect_line("clock 16 4\nsignal a\ndriver a script ramp:1\n", 3);
  expect_line("clock 16 4\nsignal a\ndriver a data 012\n", 3);    // non-binary bits
  expect_line("clock 16 4\nsignal a\nshiftreg 2 10\n", 3);        // not alone
  expect_line("clock 16 4\nsignal a\ndriver a wave 1\n", 3);      // unknown kind
  expect_line("clock 16 4\nsignal a\nsignal b\ntgate a b b\n", 4);

  std::istringstream sr("clock 8 4\nshiftreg 2 10\n");
  Circuit c = parse_circuit(sr);
  CHECK(c.clock.ticks_per_interval == 8);  // shiftreg keeps the chosen tpi

  CHECK_THROWS_AS(parse_circuit_file("/nonexistent.ckt"), ValidationError);
}
