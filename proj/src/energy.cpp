#include "revkit/energy.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

#include "revkit/constants.hpp"
#include "revkit/errors.hpp"

namespace revkit::energy {

void TechnologyParams::validate() const {
  if (!(c_node > 0)) throw ValidationError("c must be > 0");
  if (!(r_on > 0)) throw ValidationError("r must be > 0");
  if (!(v_swing > 0)) throw ValidationError("v must be > 0");
  if (i_off < 0) throw ValidationError("i_off must be >= 0");
  if (!(temperature > 0)) throw ValidationError("temp must be > 0");
  if (!(tau > 0)) throw ValidationError("tau must be > 0");
  if (!(xi > 0)) throw ValidationError("xi must be > 0");
}

double landauer_limit(double temperature) {
  if (!(temperature > 0)) throw ValidationError("temperature must be > 0");
  return k_boltzmann * temperature * std::numbers::ln2;
}

double signal_energy(const TechnologyParams& p) {
  return p.c_node * p.v_swing * p.v_swing;
}

double adiabatic_dissipation(const TechnologyParams& p) {
  return p.xi * signal_energy(p) * (p.r_on * p.c_node / p.tau);
}

bool adiabatic_in_regime(const TechnologyParams& p) {
  return p.tau > p.r_on * p.c_node;
}

double rotary_drag_power(const MechanicalParams& m) {
  double omega = 2.0 * std::numbers::pi * m.frequency;
  return m.drag_coefficient * omega * omega;
}

double rotary_energy_per_op(const MechanicalParams& m) {
  if (!(m.frequency > 0)) throw ValidationError("frequency must be > 0");
  return rotary_drag_power(m) / m.frequency;
}

double efficiency_vs_landauer(double op_energy, double temperature) {
  if (!(op_energy > 0)) throw ValidationError("op energy must be > 0");
  return op_energy / landauer_limit(temperature);
}

double ops_per_watt(double op_energy, double ops_per_composite) {
  if (!(op_energy > 0)) throw ValidationError("op energy must be > 0");
  if (!(ops_per_composite > 0)) throw ValidationError("ops per composite must be > 0");
  return 1.0 / (op_energy * ops_per_composite);
}

double implied_ops_per_composite(double op_energy, double composite_per_joule) {
  if (!(op_energy > 0)) throw ValidationError("op energy must be > 0");
  if (!(composite_per_joule > 0)) throw ValidationError("composite rate must be > 0");
  return 1.0 / (op_energy * composite_per_joule);
}

void apply_param(TechnologyParams& base, const std::string& key, double value) {
  if (key == "c") base.c_node = value;
  else if (key == "r") base.r_on = value;
  else if (key == "v") base.v_swing = value;
  else if (key == "i_off") base.i_off = value;
  else if (key == "temp") base.temperature = value;
  else if (key == "tau") base.tau = value;
  else if (key == "xi") base.xi = value;
  else throw ValidationError("unknown parameter key: " + key);
}

TechnologyParams read_params(std::istream& in) {
  TechnologyParams p;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string trimmed;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
    if (trimmed.empty()) continue;
    auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw ParseError(lineno, 0, "expected key=value");
    std::string key = trimmed.substr(0, eq);
    std::string val = trimmed.substr(eq + 1);
    double v;
    try {
      size_t pos;
      v = std::stod(val, &pos);
      if (pos != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw ParseError(lineno, 0, "bad numeric value: " + val);
    }
    try {
      apply_param(p, key, v);
    } catch (const ValidationError& e) {
      throw ParseError(lineno, 0, e.what());
    }
  }
  p.validate();
  return p;
}

TechnologyParams read_params_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open params file: " + path);
  return read_params(f);
}

}  // namespace revkit::energy
