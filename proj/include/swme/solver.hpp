#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "swme/model.hpp"

namespace swme {

struct Grid2D {
  int nx = 4, ny = 4;
  double dx = 0.25, dy = 0.25;
  double x0 = 0.0, y0 = 0.0;

  static Grid2D unit_square(int n);
  void validate() const;  // throws std::invalid_argument
  double xc(int i) const { return x0 + (i + 0.5) * dx; }
  double yc(int j) const { return y0 + (j + 0.5) * dy; }
  std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }
};

// Cell averages stored cell-major: U[(j * nx + i) * m + k], m = 2N+3,
// k following the interleaved U ordering.
struct FieldState {
  Grid2D grid;
  int N = 1;
  double time = 0.0;
  std::vector<double> U;

  FieldState() = default;
  FieldState(const Grid2D& g, int order);
  int m() const { return 2 * N + 3; }
  double* cell(int i, int j) { return U.data() + (static_cast<std::size_t>(j) * grid.nx + i) * m(); }
  const double* cell(int i, int j) const {
    return U.data() + (static_cast<std::size_t>(j) * grid.nx + i) * m();
  }
  double h(int i, int j) const { return cell(i, j)[0]; }
  void set(int i, int j, const PrimitiveState& V);
  double mass() const;  // sum h dx dy
};

enum class Boundary { Periodic, Outflow };
std::string boundary_name(Boundary b);
Boundary parse_boundary(const std::string& s);

struct SolverConfig {
  double cfl = 0.9;
  double t_end = 0.1;
  Boundary bc_x = Boundary::Periodic;
  Boundary bc_y = Boundary::Periodic;
  ModelVariant variant = Variant::HSWME;
  SourceParams source;
  bool apply_source = true;
  double h_dry = 1e-8;
  std::vector<double> t_out;  // observer output times, hit exactly

  void validate() const;
};

struct DryInterface : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DryCell : std::runtime_error {
  DryCell(int i, int j, double h);
  int i, j;
};
struct NonFinite : std::runtime_error {
  NonFinite(int i, int j, int component);
  int i, j, component;
};

struct Fluctuations {
  Eigen::VectorXd minus;
  Eigen::VectorXd plus;
  double speed = 0.0;
};

// Local Lax-Friedrichs splitting of M(U*) (UR - UL) with U* = (UL + UR) / 2.
Fluctuations interface_fluctuations(const ConservedState& UL, const ConservedState& UR,
                                    Direction axis, const Model& model, double g);

// Spectral radius of M from a dense eigen-solve, inflated by 5 %.
double numeric_speed(const Eigen::MatrixXd& M);

// Cell array with one ghost layer: (nx+2) x (ny+2) cells.
struct GhostField {
  int nx = 0, ny = 0, m = 0;
  std::vector<double> U;
  double* cell(int I, int J) { return U.data() + (static_cast<std::size_t>(J) * (nx + 2) + I) * m; }
  const double* cell(int I, int J) const {
    return U.data() + (static_cast<std::size_t>(J) * (nx + 2) + I) * m;
  }
};

GhostField apply_bc(const FieldState& s, const SolverConfig& cfg);
void apply_bc(const FieldState& s, const SolverConfig& cfg, GhostField& out);

struct StepStats {
  double dt = 0.0;
  double sx = 0.0, sy = 0.0;
  double stiffness = 0.0;  // dt (2N+1) nu/lambda (1 + lambda max C / h_min)
  int dry_clamped = 0;
};

class Observer {
 public:
  virtual ~Observer() = default;
  virtual void on_start(const FieldState&) {}
  virtual void on_step(const FieldState&, const StepStats&) {}
  virtual void on_output(const FieldState&) {}
  virtual void on_finish(const FieldState&) {}
};

class Solver {
 public:
  Solver(const SolverConfig& cfg, int N);

  const SolverConfig& config() const { return cfg_; }
  const Model& model() const { return model_; }

  // Largest stable dt for the current state.
  double stable_dt(const FieldState& s);
  // Advances by the CFL step, clipped to dt_max.
  StepStats step(FieldState& s, double dt_max = 1e300);

 private:
  void face_pass(const FieldState& s);
  SolverConfig cfg_;
  Model model_;
  GhostField ghost_;
  std::vector<double> dx_minus_, dx_plus_, dy_minus_, dy_plus_;
  double sx_ = 0.0, sy_ = 0.0;
};

// Single step with the CFL dt (the step(state) of the scheme description).
FieldState step(const FieldState& state, const SolverConfig& cfg);

struct RunResult {
  FieldState state;
  int steps = 0;
  double max_stiffness = 0.0;
  std::vector<std::string> warnings;
};

RunResult run(const FieldState& initial, const SolverConfig& cfg,
              const std::vector<Observer*>& observers = {});

}  // namespace swme
