#pragma once

#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "grid.hpp"

namespace hyko {

// Classical Hamiltonians with closed-form flow, used both as scenario
// building blocks and as the exact-characteristics transport oracle.
enum class ClassicalPreset { free_particle, harmonic, linear_field };

struct PresetInfo {
  ClassicalPreset id;
  std::string name;
  std::string expression;  // H(q,p) in the expression language
  std::string description;
};

const std::vector<PresetInfo>& preset_catalog();
std::optional<ClassicalPreset> preset_by_name(const std::string& name);

double preset_energy(ClassicalPreset preset, double q, double p);
RVec preset_energy_on_grid(ClassicalPreset preset, const PhaseSpaceGrid& grid);

// alpha = dH/dp and beta = -dH/dq evaluated analytically (no differencing),
// so periodic grids see no seam artifacts from non-periodic energies.
HamiltonianField preset_field(ClassicalPreset preset, const PhaseSpaceGrid& grid);

// Forward flow F_t(q,p) of the preset Hamiltonian.
void preset_flow(ClassicalPreset preset, double t, double& q, double& p);

// Exact-characteristics Liouville transport: samples rho0 at F_{-t}(grid
// points) by bilinear interpolation and renormalizes to unit mass.
ClassicalDensity liouville_oracle(const ClassicalDensity& rho0, ClassicalPreset preset,
                                  double t, const PhaseSpaceGrid& grid);

}  // namespace hyko
