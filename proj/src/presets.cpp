#include "presets.hpp"

#include <cmath>

namespace hyko {

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog = {
      {ClassicalPreset::free_particle, "free_particle", "p^2/2",
       "free streaming; the flow shears q by p*t"},
      {ClassicalPreset::harmonic, "harmonic", "(q^2+p^2)/2",
       "harmonic oscillator; the flow rotates phase space with period 2*pi"},
      {ClassicalPreset::linear_field, "linear_field", "q",
       "constant force; the flow translates p by -t"},
  };
  return catalog;
}

std::optional<ClassicalPreset> preset_by_name(const std::string& name) {
  for (const auto& info : preset_catalog())
    if (info.name == name) return info.id;
  return std::nullopt;
}

double preset_energy(ClassicalPreset preset, double q, double p) {
  switch (preset) {
    case ClassicalPreset::free_particle: return 0.5 * p * p;
    case ClassicalPreset::harmonic: return 0.5 * (q * q + p * p);
    case ClassicalPreset::linear_field: return q;
  }
  throw UnsupportedError("unknown preset");
}

RVec preset_energy_on_grid(ClassicalPreset preset, const PhaseSpaceGrid& grid) {
  return grid.sample([&](double q, double p) { return preset_energy(preset, q, p); });
}

HamiltonianField preset_field(ClassicalPreset preset, const PhaseSpaceGrid& grid) {
  HamiltonianField f;
  f.energy = preset_energy_on_grid(preset, grid);
  switch (preset) {
    case ClassicalPreset::free_particle:
      f.alpha = grid.sample([](double, double p) { return p; });
      f.beta = RVec::Zero(grid.size());
      break;
    case ClassicalPreset::harmonic:
      f.alpha = grid.sample([](double, double p) { return p; });
      f.beta = grid.sample([](double q, double) { return -q; });
      break;
    case ClassicalPreset::linear_field:
      f.alpha = RVec::Zero(grid.size());
      f.beta = RVec::Constant(grid.size(), -1.0);
      break;
  }
  return f;
}

void preset_flow(ClassicalPreset preset, double t, double& q, double& p) {
  switch (preset) {
    case ClassicalPreset::free_particle:
      q += p * t;
      return;
    case ClassicalPreset::harmonic: {
      double c = std::cos(t), s = std::sin(t);
      double q0 = q, p0 = p;
      q = q0 * c + p0 * s;
      p = -q0 * s + p0 * c;
      return;
    }
    case ClassicalPreset::linear_field:
      p -= t;
      return;
  }
  throw UnsupportedError("unknown preset");
}

ClassicalDensity liouville_oracle(const ClassicalDensity& rho0, ClassicalPreset preset,
                                  double t, const PhaseSpaceGrid& grid) {
  if (rho0.values.size() != grid.size())
    throw ValidationError("liouville_oracle: size mismatch");
  RVec out(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    double q = grid.q_of(i), p = grid.p_of(i);
    preset_flow(preset, -t, q, p);  // transport along characteristics
    out(i) = std::max(0.0, grid.interpolate(rho0.values, q, p));
  }
  return ClassicalDensity::normalized(std::move(out), grid);
}

}  // namespace hyko
