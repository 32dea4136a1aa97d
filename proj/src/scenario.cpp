#include "swme/scenario.hpp"

#include <cmath>
#include <numbers>

#include "swme/legendre.hpp"

namespace swme {

std::string scenario_name(ScenarioName s) {
  switch (s) {
    case ScenarioName::RadialDamBreak: return "dam_break";
    case ScenarioName::SmoothWave: return "smooth_wave";
    case ScenarioName::LakeAtRest: return "lake_at_rest";
  }
  return "?";
}

ScenarioName parse_scenario(const std::string& s) {
  if (s == "dam_break") return ScenarioName::RadialDamBreak;
  if (s == "smooth_wave") return ScenarioName::SmoothWave;
  if (s == "lake_at_rest") return ScenarioName::LakeAtRest;
  throw ConfigError("unknown scenario '" + s + "'");
}

ProfileMoments profile_moments(const std::function<double(double)>& u, int N) {
  // enough points for polynomial profiles up to degree 2N+2
  Quadrature q = gauss_legendre_unit(N + 3);
  ProfileMoments pm;
  pm.alpha.assign(N, 0.0);
  double scale = 0.0;
  for (std::size_t s = 0; s < q.nodes.size(); ++s) {
    const double us = u(q.nodes[s]);
    pm.mean += q.weights[s] * us;
    scale = std::max(scale, std::abs(us));
    for (int j = 1; j <= N; ++j) pm.alpha[j - 1] += (2 * j + 1) * q.weights[s] * us * scaled_basis(j, q.nodes[s]);
  }
  // moments that vanish exactly come out as quadrature round-off
  for (double& a : pm.alpha)
    if (std::abs(a) < 64 * 2.2e-16 * scale) a = 0.0;
  return pm;
}

namespace {

PrimitiveState base_state(int N, double h, const ProfileMoments& pm) {
  PrimitiveState V = PrimitiveState::rest(N, h, 1.0);
  V.um = V.vm = pm.mean;
  for (int i = 0; i < N && i < static_cast<int>(pm.alpha.size()); ++i) V.alpha[i] = V.beta[i] = pm.alpha[i];
  return V;
}

}  // namespace

Scenario make_scenario(ScenarioName name, int resolution) {
  Scenario sc;
  sc.name = name;
  sc.grid = Grid2D::unit_square(resolution);
  sc.source.nu = 0.1;
  sc.source.lambda = 0.1;
  sc.source.g = 1.0;
  auto profile = [](double z) { return z / 4.0; };
  switch (name) {
    case ScenarioName::RadialDamBreak:
      sc.bc_x = sc.bc_y = Boundary::Outflow;
      sc.t_end = 0.1;
      sc.t_out = {0.1};
      sc.init = [profile](double x, double y, int N) {
        const double r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
        return base_state(N, r2 < 0.2 * 0.2 ? 1.5 : 1.0, profile_moments(profile, N));
      };
      break;
    case ScenarioName::SmoothWave:
      sc.bc_x = sc.bc_y = Boundary::Periodic;
      sc.t_end = 1.0;
      sc.t_out = {1.0};
      sc.init = [profile](double x, double y, int N) {
        const double h = 1.0 + std::exp(3.0 * std::cos(2.0 * std::numbers::pi * (x + y + 0.5)) - 4.0);
        return base_state(N, h, profile_moments(profile, N));
      };
      break;
    case ScenarioName::LakeAtRest:
      sc.bc_x = sc.bc_y = Boundary::Periodic;
      sc.t_end = 0.1;
      sc.t_out = {0.1};
      sc.init = [](double, double, int N) { return PrimitiveState::rest(N, 1.0, 1.0); };
      break;
  }
  return sc;
}

FieldState initial_field(const Scenario& sc, int N) {
  FieldState st(sc.grid, N);
  for (int j = 0; j < sc.grid.ny; ++j)
    for (int i = 0; i < sc.grid.nx; ++i) {
      PrimitiveState V = sc.init(sc.grid.xc(i), sc.grid.yc(j), N);
      V.g = sc.source.g;
      st.set(i, j, V);
    }
  return st;
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig c;
  c.cfl = cfl;
  c.t_end = scenario.t_end;
  c.t_out = scenario.t_out;
  c.bc_x = scenario.bc_x;
  c.bc_y = scenario.bc_y;
  c.variant = variant;
  c.source = scenario.source;
  return c;
}

RunConfig run_config_from(const Config& cfg) {
  RunConfig rc;
  try {
    const ScenarioName name = parse_scenario(cfg.get("scenario", "name", "dam_break"));
    const int res = cfg.get_int("scenario", "resolution", 256);
    if (res < 32) throw ConfigError("scenario.resolution must be at least 32");
    rc.scenario = make_scenario(name, res);
    Scenario& sc = rc.scenario;
    sc.t_end = cfg.get_double("scenario", "t_end", sc.t_end);
    sc.t_out = cfg.get_list("scenario", "t_out", sc.t_out);
    if (!(sc.t_end > 0.0)) throw ConfigError("scenario.t_end must be positive");
    for (double t : sc.t_out)
      if (t < 0.0 || t > sc.t_end) throw ConfigError("scenario.t_out outside [0, t_end]");
    if (cfg.has("solver", "bc_x")) sc.bc_x = parse_boundary(cfg.get("solver", "bc_x"));
    if (cfg.has("solver", "bc_y")) sc.bc_y = parse_boundary(cfg.get("solver", "bc_y"));
    sc.source.nu = cfg.get_double("model", "nu", sc.source.nu);
    sc.source.lambda = cfg.get_double("model", "lambda", sc.source.lambda);
    sc.source.g = cfg.get_double("model", "g", sc.source.g);
    if (!(sc.source.g > 0.0)) throw ConfigError("model.g must be positive");
    sc.source.validate();

    rc.variant = parse_variant(cfg.get("model", "variant", "HSWME"));
    rc.N = cfg.get_int("model", "order", 1);
    if (rc.N < 1) throw ConfigError("model.order must be >= 1");
    rc.cfl = cfg.get_double("solver", "cfl", 0.9);
    if (!(rc.cfl > 0.0 && rc.cfl <= 1.0)) throw ConfigError("solver.cfl must lie in (0, 1]");
    rc.out_dir = cfg.get("output", "dir", "out");
    rc.write_snapshots = cfg.get_bool("output", "snapshots", true);
    const int seed = cfg.get_int("run", "seed", 1);
    if (seed < 0) throw ConfigError("run.seed must be non-negative");
    rc.seed = static_cast<unsigned>(seed);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return rc;
}

}  // namespace swme
