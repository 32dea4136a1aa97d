#pragma once

#include <functional>
#include <string>
#include <vector>

#include "swme/config.hpp"
#include "swme/solver.hpp"

namespace swme {

enum class ScenarioName { RadialDamBreak, SmoothWave, LakeAtRest };
std::string scenario_name(ScenarioName s);
ScenarioName parse_scenario(const std::string& s);

// Mean and Legendre moments of a vertical velocity profile u(zeta) on [0,1]:
// u_m = int u, alpha_j = (2j+1) int u phi_j.
struct ProfileMoments {
  double mean = 0.0;
  std::vector<double> alpha;
};
ProfileMoments profile_moments(const std::function<double(double)>& u, int N);

struct Scenario {
  ScenarioName name = ScenarioName::RadialDamBreak;
  Grid2D grid;
  Boundary bc_x = Boundary::Outflow, bc_y = Boundary::Outflow;
  SourceParams source;
  double t_end = 0.1;
  std::vector<double> t_out;
  std::function<PrimitiveState(double x, double y, int N)> init;
};

// Defaults: dam break on [0,1]^2 with outflow to t = 0.1, smooth wave periodic
// to t = 1; both with nu = lambda = 0.1 and g = 1.
Scenario make_scenario(ScenarioName name, int resolution);
FieldState initial_field(const Scenario& sc, int N);

struct RunConfig {
  Scenario scenario;
  ModelVariant variant = Variant::HSWME;
  int N = 1;
  double cfl = 0.9;
  std::string out_dir = "out";
  unsigned seed = 1;
  bool write_snapshots = true;

  SolverConfig solver_config() const;
};

// Validates and fills a RunConfig; throws ConfigError.
RunConfig run_config_from(const Config& cfg);

}  // namespace swme
