// revkit: classify transition tables, compile netlists to reversible
// schedules, simulate dual-rail adiabatic circuits, report energy figures.
//
// Exit codes: 0 success, 2 invalid input, 3 verification failure,
// 4 driver conflict during simulation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "revkit/constants.hpp"
#include "revkit/dag.hpp"
#include "revkit/energy.hpp"
#include "revkit/errors.hpp"
#include "revkit/grc.hpp"
#include "revkit/grc_io.hpp"
#include "revkit/schedule.hpp"
#include "revkit/twolal.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

struct Output {
  std::string format = "text";
  std::string path;  // empty = stdout
  std::string command;
  unsigned long long seed = 0;
  ordered_json obj = ordered_json::object();
  std::vector<std::string> trailer;  // extra body lines, text format only

  template <typename T>
  void set(const std::string& key, const T& value) {
    obj[key] = value;
  }

  static std::string render(const ordered_json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }

  void emit() const {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!path.empty()) {
      file.open(path);
      if (!file)
        throw revkit::ValidationError("cannot open output file: " + path);
      os = &file;
    }
    if (format == "json") {
      ordered_json root = ordered_json::object();
      root["command"] = command;
      root["seed"] = seed;
      for (const auto& item : obj.items()) root[item.key()] = item.value();
      if (!trailer.empty()) root["body"] = trailer;
      *os << root.dump(2) << "\n";
      return;
    }
    const char* sep = format == "csv" ? "," : " = ";
    *os << "# revkit " << command << " seed=" << seed << "\n";
    for (const auto& item : obj.items())
      *os << item.key() << sep << render(item.value()) << "\n";
    if (format == "text")
      for (const auto& line : trailer) *os << line << "\n";
  }
};

revkit::energy::TechnologyParams resolve_params(
    const std::string& params_file, const std::vector<std::string>& sets,
    std::optional<double> tau, std::optional<double> temp) {
  revkit::energy::TechnologyParams p;
  const char* env = std::getenv("REVKIT_PARAMS");
  if (!params_file.empty())
    p = revkit::energy::read_params_file(params_file);
  else if (env && *env)
    p = revkit::energy::read_params_file(env);
  for (const std::string& kv : sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw revkit::ValidationError("override must be key=value: " + kv);
    double v;
    try {
      std::size_t pos;
      v = std::stod(kv.substr(eq + 1), &pos);
      if (pos != kv.size() - eq - 1) throw std::invalid_argument(kv);
    } catch (const std::exception&) {
      throw revkit::ValidationError("bad override value: " + kv);
    }
    revkit::energy::apply_param(p, kv.substr(0, eq), v);
  }
  if (tau) p.tau = *tau;
  if (temp) p.temperature = *temp;
  p.validate();
  return p;
}

int run_classify(Output& out, const std::string& op_path,
                 const std::string& dist_path, std::optional<double> temp) {
  namespace grc = revkit::grc;
  grc::ConditionedOp op = grc::read_op_file(op_path);
  out.set("class", grc::to_string(grc::classify(op)));
  out.set("space_width", op.space.width());
  out.set("precondition_states", static_cast<long>(op.pre.count()));
  out.set("space_states", static_cast<long>(op.space.size()));
  if (!dist_path.empty()) {
    grc::Distribution d = grc::read_dist_file(dist_path);
    grc::LossReport loss = grc::information_loss(op, d, temp);
    out.set("input_entropy_bits", loss.input_entropy);
    out.set("output_entropy_bits", loss.output_entropy);
    out.set("information_loss_bits", loss.loss);
    if (loss.temperature) out.set("temperature_K", *loss.temperature);
    if (loss.min_heat) out.set("min_heat_J", *loss.min_heat);
    grc::NoMergeResult nm = grc::verify_no_merge(op, d);
    out.set("no_merge", nm.no_merge);
    if (nm.witness) {
      int w = op.space.width();
      out.set("merge_witness", grc::BitState(nm.witness->state_a, w).str() +
                                   " " +
                                   grc::BitState(nm.witness->state_b, w).str() +
                                   " -> " +
                                   grc::BitState(nm.witness->image, w).str());
    }
  }
  out.emit();
  return 0;
}

int run_compile(Output& out, const std::string& net_path, bool verify,
                const std::string& schedule_out) {
  namespace bennett = revkit::bennett;
  std::ifstream f(net_path);
  if (!f) throw revkit::ValidationError("cannot open netlist: " + net_path);
  std::stringstream buf;
  buf << f.rdbuf();
  bennett::GateDAG dag = bennett::parse_dag(buf.str());
  bennett::ReversibleSchedule sched = bennett::bennett_embed(dag);

  out.set("inputs", dag.num_inputs());
  out.set("gates", dag.num_gates());
  out.set("outputs", dag.num_outputs());
  out.set("steps", static_cast<long>(sched.steps.size()));
  out.set("ancillas", sched.ancilla_width);
  out.set("width", sched.width());
  if (!sched.warning.empty()) out.set("warning", sched.warning);

  int rc = 0;
  if (verify) {
    if (!sched.verified) {
      out.set("verify", "skipped");
    } else {
      bennett::VerifyReport rep = bennett::verify_schedule(sched, dag);
      out.set("verify", rep.all_ok() ? "pass" : "fail");
      out.set("verify_preconditions", rep.preconditions_ok);
      out.set("verify_outputs", rep.outputs_ok);
      out.set("verify_ancillas", rep.ancilla_ok);
      out.set("verify_injective", rep.injective);
      if (rep.counterexample) {
        out.set("counterexample_input",
                static_cast<long>(rep.counterexample->input));
        out.set("counterexample", rep.counterexample->what);
      }
      if (!rep.all_ok()) rc = 3;
    }
  }

  std::ostringstream body;
  bennett::write_schedule(body, sched);
  if (!schedule_out.empty()) {
    std::ofstream sf(schedule_out);
    if (!sf)
      throw revkit::ValidationError("cannot open schedule file: " + schedule_out);
    sf << body.str();
  } else {
    std::istringstream lines(body.str());
    std::string line;
    while (std::getline(lines, line)) out.trailer.push_back(line);
  }
  out.emit();
  return rc;
}

int run_sim(Output& out, const std::string& circuit_path, int cycles,
            const revkit::energy::TechnologyParams& params,
            const std::string& trace_path) {
  namespace twolal = revkit::twolal;
  twolal::Circuit circuit = twolal::parse_circuit_file(circuit_path);
  twolal::Simulator sim(circuit, params);

  std::ofstream trace;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace)
      throw revkit::ValidationError("cannot open trace file: " + trace_path);
    twolal::write_trace_header(trace);
    sim.set_trace_sink([&trace](const twolal::Simulator::TraceRow& row) {
      twolal::write_trace_row(trace, row);
    });
  }

  sim.run_cycles(cycles);  // ConflictError propagates to main -> exit 4

  twolal::Summary s = twolal::energy_summary(sim.ledger(), circuit, cycles);
  out.set("signals", static_cast<long>(circuit.signals.size()));
  out.set("tgates", static_cast<long>(circuit.gates.size()));
  out.set("transistors", s.transistors);
  out.set("cycles", cycles);
  out.set("ticks", sim.tick());
  out.set("adiabatic_J", s.adiabatic_J);
  out.set("violation_J", s.violation_J);
  out.set("leakage_J", s.leakage_J);
  out.set("total_J", s.total_J);
  out.set("violation_count", static_cast<long>(s.violation_count));
  out.set("per_transistor_cycle_J", s.per_transistor_cycle_J);
  out.set("per_transistor_cycle_eV", s.per_transistor_cycle_eV);
  out.set("adiabatic_per_transistor_cycle_eV",
          s.adiabatic_per_transistor_cycle_eV);
  out.set("adiabatic_signal_ratio", s.adiabatic_signal_ratio);
  const auto& viol = sim.ledger().violations;
  for (std::size_t i = 0; i < viol.size() && i < 10; ++i)
    out.set("violation_" + std::to_string(i),
            "tick " + std::to_string(viol[i].tick) + " " +
                twolal::violation_name(viol[i].kind) + " " +
                sim.rail_name(viol[i].rail));
  out.emit();
  return 0;
}

int run_energy(Output& out, const revkit::energy::TechnologyParams& params,
               std::optional<double> device_energy,
               std::optional<double> composite_rate,
               std::optional<double> ops_per_composite) {
  namespace energy = revkit::energy;
  double floor = energy::landauer_limit(params.temperature);
  out.set("temperature_K", params.temperature);
  out.set("landauer_floor_J", floor);
  out.set("signal_energy_J", energy::signal_energy(params));
  out.set("adiabatic_per_transition_J", energy::adiabatic_dissipation(params));
  out.set("adiabatic_to_signal_ratio",
          energy::adiabatic_dissipation(params) / energy::signal_energy(params));
  out.set("adiabatic_in_regime", energy::adiabatic_in_regime(params));
  if (device_energy) {
    out.set("device_energy_J", *device_energy);
    out.set("device_over_floor",
            energy::efficiency_vs_landauer(*device_energy, params.temperature));
    out.set("floor_over_device", floor / *device_energy);
    if (composite_rate) {
      out.set("composite_per_joule", *composite_rate);
      out.set("implied_ops_per_composite",
              energy::implied_ops_per_composite(*device_energy, *composite_rate));
    }
    if (ops_per_composite) {
      out.set("ops_per_composite", *ops_per_composite);
      out.set("composite_ops_per_watt",
              energy::ops_per_watt(*device_energy, *ops_per_composite));
    }
  }
  out.emit();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reversible computing toolkit"};
  app.require_subcommand(1);

  Output out;
  app.add_option("--format", out.format, "output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--seed", out.seed, "seed echoed in output headers")
      ->capture_default_str();
  app.add_option("--output", out.path, "write the report here instead of stdout");

  std::string op_path, dist_path, net_path, circuit_path, params_file;
  std::string schedule_out, trace_path;
  std::vector<std::string> sets;
  std::optional<double> temp, tau, device_energy, composite_rate, ops_per_comp;
  bool verify = false;
  int cycles = 16;

  CLI::App* classify = app.add_subcommand(
      "classify", "classify a transition table, optionally with a distribution");
  classify->fallthrough();
  classify->add_option("--op", op_path, "transition table file")->required();
  classify->add_option("--dist", dist_path, "distribution file");
  classify->add_option("--temp", temp, "temperature in K for the heat floor");

  CLI::App* compile = app.add_subcommand(
      "compile", "compile an AND/OR/NOT netlist to a reversible schedule");
  compile->fallthrough();
  compile->add_option("--net", net_path, "netlist file")->required();
  compile->add_flag("--verify", verify, "exhaustively check the schedule");
  compile->add_option("--schedule-out", schedule_out,
                      "write the schedule to this file");

  CLI::App* sim = app.add_subcommand(
      "sim", "simulate a dual-rail adiabatic circuit");
  sim->fallthrough();
  sim->add_option("--circuit", circuit_path, "circuit file")->required();
  sim->add_option("--cycles", cycles, "clock cycles to run")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim->add_option("--params", params_file, "technology parameter file");
  sim->add_option("--set", sets, "parameter overrides, key=value");
  sim->add_option("--tau", tau, "override the ramp time in seconds");
  sim->add_option("--trace", trace_path, "write the event trace CSV here");

  CLI::App* energy = app.add_subcommand(
      "energy", "energy figures of merit for a parameter set");
  energy->fallthrough();
  energy->add_option("--params", params_file, "technology parameter file");
  energy->add_option("--set", sets, "parameter overrides, key=value");
  energy->add_option("--temp", temp, "override the temperature in K");
  energy->add_option("--device-energy", device_energy,
                     "per-device-operation energy in J");
  energy->add_option("--composite-rate", composite_rate,
                     "composite operations per joule");
  energy->add_option("--ops-per-composite", ops_per_comp,
                     "device operations per composite operation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (classify->parsed()) {
      out.command = "classify";
      return run_classify(out, op_path, dist_path, temp);
    }
    if (compile->parsed()) {
      out.command = "compile";
      return run_compile(out, net_path, verify, schedule_out);
    }
    if (sim->parsed()) {
      out.command = "sim";
      return run_sim(out, circuit_path, cycles,
                     resolve_params(params_file, sets, tau, std::nullopt),
                     trace_path);
    }
    out.command = "energy";
    return run_energy(out, resolve_params(params_file, sets, std::nullopt, temp),
                      device_energy, composite_rate, ops_per_comp);
  } catch (const revkit::ConflictError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
