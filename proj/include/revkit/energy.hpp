#pragma once

#include <iosfwd>
#include <string>

namespace revkit::energy {

// Lumped per-node electrical model for adiabatic CMOS estimates.
// Defaults describe a generic mature process node driven gently.
struct TechnologyParams {
  double c_node = 1e-14;       // F, capacitance per circuit node
  double r_on = 1e4;           // ohm, on-resistance of a conducting path
  double v_swing = 1.8;        // V, full logic swing
  double i_off = 1e-12;        // A, off-state leakage per transistor
  double temperature = 300.0;  // K
  double tau = 1e-6;           // s, ramp time of one clock interval
  double xi = 1.0;             // shape factor of the ramp (1 = linear)

  void validate() const;  // throws ValidationError on non-physical values
};

// Rotating mechanical element treated as a frictional energy sink.
struct MechanicalParams {
  double drag_coefficient;  // J*s, torque per unit angular velocity
  double frequency;         // Hz, rotation rate
};

// kT ln2 at the given temperature: the least heat released when one bit of
// information is lost. Temperature must be positive.
double landauer_limit(double temperature);

// CV^2: energy of a conventionally switched full-swing node, twice the
// 1/2 CV^2 stored charge (charge up and dump down both dissipate).
double signal_energy(const TechnologyParams& p);

// xi * C V^2 * (RC/tau): dissipation of one full-swing ramped transition.
// Valid as an approximation only when tau >> RC; see adiabatic_in_regime.
double adiabatic_dissipation(const TechnologyParams& p);

// The gradual-transition formula is trustworthy only when the ramp is much
// slower than the circuit time constant.
bool adiabatic_in_regime(const TechnologyParams& p);

// P = k_d * omega^2 for a rotor with drag k_d spun at 2*pi*f rad/s.
double rotary_drag_power(const MechanicalParams& m);

// Energy charged to one operation when the rotor completes one turn per op.
double rotary_energy_per_op(const MechanicalParams& m);

// How many times the Landauer floor a device spends per operation.
double efficiency_vs_landauer(double op_energy, double temperature);

// Operations per watt for a device spending op_energy joules per operation,
// where each composite operation costs ops_per_composite device operations.
double ops_per_watt(double op_energy, double ops_per_composite);

// Device operations per composite operation implied by a quoted composite
// rate per watt (1/J) and a per-device-op energy.
double implied_ops_per_composite(double op_energy, double composite_per_joule);

// key=value parameter files; '#' starts a comment. Unknown keys are errors.
// Recognized keys: c, r, v, i_off, temp, tau, xi.
TechnologyParams read_params(std::istream& in);
TechnologyParams read_params_file(const std::string& path);

// Applies assignments like "tau=2e-6" on top of base. Used for CLI overrides.
void apply_param(TechnologyParams& base, const std::string& key, double value);

}  // namespace revkit::energy
