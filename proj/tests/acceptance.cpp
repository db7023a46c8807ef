// Acceptance gate: one line per criterion, [PASS] or [FAIL], exit 0 only
// when every criterion holds. Tolerances are pinned here, next to the
// checks, so a regression cannot be hidden by loosening a config file.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "revkit/dag.hpp"
#include "revkit/energy.hpp"
#include "revkit/grc.hpp"
#include "revkit/pebble.hpp"
#include "revkit/schedule.hpp"
#include "revkit/twolal.hpp"
#include "testutil.hpp"

using namespace revkit;

namespace {

struct Harness {
  int failures = 0;

  void criterion(int n, const std::string& label,
                 const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    auto t0 = std::chrono::steady_clock::now();
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    std::printf("[%s] criterion %d: %s%s%s [%.2f s]\n", ok ? "PASS" : "FAIL",
                n, label.c_str(), detail.empty() ? "" : " -- ",
                detail.c_str(), secs);
    if (!ok) ++failures;
  }
};

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

bool rel_close(double got, double want, double tol) {
  return std::fabs(got - want) <= tol * std::fabs(want);
}

// Criterion 4 helper: a random distribution over the given support states.
grc::Distribution random_support_dist(std::mt19937& rng,
                                      grc::StateSpace space,
                                      const std::vector<std::uint32_t>& support) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> m(space.size(), 0.0);
  double total = 0.0;
  // Occasionally drop states so sparse supports are exercised too.
  std::uniform_int_distribution<int> keep(0, 3);
  bool any = false;
  for (std::uint32_t s : support) {
    if (keep(rng) == 0 && support.size() > 1) continue;
    m[s] = u(rng) + 1e-3;
    any = true;
  }
  if (!any) m[support.front()] = 1.0;
  for (double x : m) total += x;
  for (double& x : m) x /= total;
  return grc::Distribution(space, m);
}

}  // namespace

int main() {
  Harness h;

  h.criterion(1, "heat floor per lost bit at 300 K", [](std::string& d) {
    auto r = testutil::run_cli("energy --temp 300");
    if (r.exit_code != 0) {
      d = "exit code " + std::to_string(r.exit_code);
      return false;
    }
    double floor = testutil::report_number(r.out, "landauer_floor_J");
    d = fmt(floor) + " J vs 2.8709e-21 J, tol 1e-4 relative";
    return rel_close(floor, 2.8709e-21, 1e-4);
  });

  h.criterion(2, "nanoscale device margin below the floor", [](std::string& d) {
    auto r = testutil::run_cli("energy --temp 300 --device-energy 3.9e-26");
    if (r.exit_code != 0) {
      d = "exit code " + std::to_string(r.exit_code);
      return false;
    }
    double ratio = testutil::report_number(r.out, "floor_over_device");
    d = fmt(ratio) + "x vs 74000x, tol 2%";
    return rel_close(ratio, 74000.0, 0.02);
  });

  h.criterion(3, "device ops implied per composite operation", [](std::string& d) {
    auto r = testutil::run_cli(
        "energy --device-energy 3.9e-26 --composite-rate 1.28e21");
    if (r.exit_code != 0) {
      d = "exit code " + std::to_string(r.exit_code);
      return false;
    }
    double ops = testutil::report_number(r.out, "implied_ops_per_composite");
    d = fmt(ops) + " vs 2.0e4, tol 1%";
    return rel_close(ops, 2.0e4, 0.01);
  });

  h.criterion(4, "guarded OR is lossless on contract, one bit off it",
              [](std::string& d) {
    grc::StateSpace space(3);
    grc::ConditionedOp revor =
        grc::make_gate(grc::GateKind::RevOr, std::vector<int>{0, 1, 2}, 3);
    std::vector<std::uint32_t> support{0b000, 0b010, 0b100, 0b110};

    std::mt19937 rng(4);
    for (int trial = 0; trial < 1000; ++trial) {
      grc::Distribution dist = random_support_dist(rng, space, support);
      double loss = grc::information_loss(revor, dist).loss;
      if (std::fabs(loss) > 1e-12) {
        d = "trial " + std::to_string(trial) + " loss " + fmt(loss);
        return false;
      }
      if (!grc::verify_no_merge(revor, dist).no_merge) {
        d = "trial " + std::to_string(trial) + " reported a merge";
        return false;
      }
    }

    // Full-support uniform input: the guard is violated in half the states
    // and exactly one bit must drown.
    grc::Distribution uniform = grc::Distribution::uniform(space);
    double lib_loss = grc::information_loss(revor, uniform).loss;

    // Independent recount with natural logs.
    std::vector<double> out_mass(space.size(), 0.0);
    for (std::uint32_t s = 0; s < space.size(); ++s)
      out_mass[revor.apply(s)] += 1.0 / space.size();
    double h_out = 0.0;
    for (double p : out_mass)
      if (p > 0) h_out -= p * std::log(p);
    double oracle_loss = 3.0 - h_out / std::log(2.0);

    d = "1000 contract dists lossless; uniform loss " + fmt(lib_loss);
    return lib_loss == 1.0 && std::fabs(oracle_loss - 1.0) <= 1e-12;
  });

  h.criterion(5, "zero loss on all sampled inputs iff the table is injective",
              [](std::string& d) {
    grc::StateSpace space(4);
    std::mt19937 rng(5);
    std::uniform_int_distribution<std::uint32_t> img(0, space.size() - 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int injective_seen = 0, merging_seen = 0;

    for (int trial = 0; trial < 10000; ++trial) {
      // A blind uniform table is almost never injective, so alternate:
      // permutations, permutations with one entry clobbered (a single
      // subtle merge), and fully random tables.
      grc::ConditionedOp op{space, {}, grc::Precondition::full(space)};
      op.table.resize(space.size());
      if (trial % 2 == 0) {
        for (std::uint32_t s = 0; s < space.size(); ++s) op.table[s] = s;
        std::shuffle(op.table.begin(), op.table.end(), rng);
        if (trial % 10 == 0) op.table[img(rng)] = img(rng);
      } else {
        for (std::uint32_t s = 0; s < space.size(); ++s) op.table[s] = img(rng);
      }

      bool injective = true;
      {
        std::vector<char> seen(space.size(), 0);
        for (std::uint32_t v : op.table) {
          if (seen[v]) injective = false;
          seen[v] = 1;
        }
      }
      injective ? ++injective_seen : ++merging_seen;

      // Sampled inputs: the uniform distribution plus 20 random ones.
      bool all_lossless = true;
      double worst = 0.0;
      auto probe = [&](const grc::Distribution& dist) {
        double loss = grc::information_loss(op, dist).loss;
        worst = std::max(worst, std::fabs(loss));
        if (loss > 1e-12) all_lossless = false;
      };
      probe(grc::Distribution::uniform(space));
      for (int k = 0; k < 20 && all_lossless; ++k) {
        std::vector<double> m(space.size());
        double total = 0.0;
        for (double& x : m) total += (x = u(rng) + 1e-6);
        for (double& x : m) x /= total;
        probe(grc::Distribution(space, m));
      }

      if (all_lossless != injective) {
        d = "trial " + std::to_string(trial) + ": injective=" +
            (injective ? "yes" : "no") + " but worst |loss| " + fmt(worst);
        return false;
      }
    }
    d = std::to_string(injective_seen) + " injective / " +
        std::to_string(merging_seen) + " merging tables agree";
    return true;
  });

  h.criterion(6, "random netlists embed with 2G+M steps and verify",
              [](std::string& d) {
    std::mt19937 rng(6);
    for (int trial = 0; trial < 200; ++trial) {
      bennett::GateDAG dag =
          bennett::parse_dag(testutil::random_netlist(rng, 6, 10));
      bennett::ReversibleSchedule s = bennett::bennett_embed(dag);
      if (static_cast<int>(s.steps.size()) !=
              2 * dag.num_gates() + dag.num_outputs() ||
          s.ancilla_width != dag.num_gates()) {
        d = "trial " + std::to_string(trial) + " has wrong shape";
        return false;
      }
      bennett::VerifyReport rep = bennett::verify_schedule(s, dag);
      if (!rep.preconditions_ok || !rep.outputs_ok || !rep.ancilla_ok ||
          !rep.injective) {
        d = "trial " + std::to_string(trial) + " failed verification";
        return false;
      }
    }
    d = "200 netlists, up to 10 gates over up to 6 inputs";
    return true;
  });

  h.criterion(7, "checkpointing strategies are legal and minimal moves are "
                 "monotone in the budget",
              [](std::string& d) {
    for (int k : {2, 3, 4}) {
      for (int n = 1; n <= 64; ++n) {
        bennett::PebbleStrategy s = bennett::pebble_bennett_recursive(n, k);
        bennett::PebbleReplay r = bennett::replay_pebble_moves(n, s.moves);
        if (!r.legal || !r.reaches_goal) {
          d = "recursive n=" + std::to_string(n) + " k=" + std::to_string(k) +
              " is illegal";
          return false;
        }
      }
    }
    for (int n = 1; n <= 8; ++n) {
      int prev = -1;  // optimal step count at the previous (smaller) budget
      for (int budget = 1; budget <= n; ++budget) {
        auto s = bennett::pebble_exhaustive(n, budget);
        if (!s) {
          if (prev >= 0) {
            d = "n=" + std::to_string(n) + ": budget " + std::to_string(budget) +
                " infeasible after a feasible smaller one";
            return false;
          }
          continue;
        }
        if (prev >= 0 && s->step_count > prev) {
          d = "n=" + std::to_string(n) + ": more pebbles lengthened the optimum";
          return false;
        }
        prev = s->step_count;
      }
    }
    d = "recursive n<=64 k in {2,3,4}; exhaustive n<=8 monotone";
    return true;
  });

  h.criterion(8, "adiabatic energy of an 8-stage register scales as 1/tau",
              [](std::string& d) {
    std::vector<int> pattern{1, 0, 1, 1, 0, 0, 1, 0};
    std::vector<double> lx, ly;
    for (int i = 0; i < 8; ++i) {
      energy::TechnologyParams p;
      p.tau = 1e-6 * static_cast<double>(1 << i);
      twolal::Simulator sim(twolal::build_shift_register(8, pattern), p);
      sim.run_cycles(16);
      if (!sim.ledger().violations.empty()) {
        d = "violations at tau " + fmt(p.tau);
        return false;
      }
      lx.push_back(std::log(p.tau));
      ly.push_back(std::log(sim.ledger().adiabatic_total()));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      num += (lx[i] - mx) * (ly[i] - my);
      den += (lx[i] - mx) * (lx[i] - mx);
    }
    double slope = num / den;
    d = "log-log slope " + fmt(slope) + " over tau..128tau, tol -1 +/- 0.05";
    return std::fabs(slope + 1.0) <= 0.05;
  });

  h.criterion(9, "sub-eV per transistor-cycle at the shipped design point",
              [](std::string& d) {
    energy::TechnologyParams p =
        energy::read_params_file(testutil::params_file("ev_point.cfg"));
    twolal::Simulator sim(twolal::build_shift_register(8, {1}), p);
    int cycles = 64;
    sim.run_cycles(cycles);
    if (!sim.ledger().violations.empty()) {
      d = "rule violations at the design point";
      return false;
    }
    twolal::Summary s =
        twolal::energy_summary(sim.ledger(), sim.circuit(), cycles);
    d = fmt(s.per_transistor_cycle_eV) + " eV/transistor-cycle, " +
        "recovery ratio " + fmt(s.adiabatic_signal_ratio) +
        " vs 1e-5 within 3x";
    return s.per_transistor_cycle_eV <= 1.0 &&
           s.adiabatic_signal_ratio >= 1e-5 / 3.0 &&
           s.adiabatic_signal_ratio <= 3e-5;
  });

  h.criterion(10, "registers match the pure-delay oracle, bit-identically "
                  "across reruns",
              [](std::string& d) {
    std::mt19937 rng(10);
    std::uniform_int_distribution<int> stages_d(1, 16);
    std::uniform_int_distribution<int> len_d(4, 12);
    std::uniform_int_distribution<int> bit_d(0, 1);
    for (int trial = 0; trial < 1000; ++trial) {
      int stages = stages_d(rng);
      std::vector<int> pattern(static_cast<std::size_t>(len_d(rng)));
      for (int& b : pattern) b = bit_d(rng);
      int cycles = stages + static_cast<int>(pattern.size()) + 2;

      twolal::Simulator sim(twolal::build_shift_register(stages, pattern),
                            energy::TechnologyParams{});
      int out = twolal::shift_register_output(sim.circuit());
      std::vector<int> got = testutil::sample_shift_register(sim, out, cycles);
      if (got != testutil::delay_oracle(pattern, stages, cycles)) {
        d = "trial " + std::to_string(trial) + " diverged from the oracle";
        return false;
      }
      if (!sim.ledger().violations.empty()) {
        d = "trial " + std::to_string(trial) + " raised violations";
        return false;
      }

      if (trial % 100 == 0) {  // re-run a subset and demand bit equality
        twolal::Simulator again(twolal::build_shift_register(stages, pattern),
                                energy::TechnologyParams{});
        std::vector<int> got2 = testutil::sample_shift_register(again, out, cycles);
        if (got2 != got ||
            again.ledger().adiabatic_total() != sim.ledger().adiabatic_total() ||
            again.ledger().leakage_total != sim.ledger().leakage_total) {
          d = "trial " + std::to_string(trial) + " was not deterministic";
          return false;
        }
      }
    }
    d = "1000 patterns, 1..16 stages";
    return true;
  });

  if (h.failures == 0) {
    std::printf("all criteria pass\n");
    return 0;
  }
  std::printf("%d criterion(s) failing\n", h.failures);
  return 1;
}
