#include "swme/solver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace swme {

Grid2D Grid2D::unit_square(int n) {
  Grid2D g;
  g.nx = g.ny = n;
  g.dx = g.dy = 1.0 / n;
  return g;
}

void Grid2D::validate() const {
  if (nx < 4 || ny < 4) throw std::invalid_argument("grid needs at least 4 cells per axis");
  if (!(dx > 0.0) || !(dy > 0.0)) throw std::invalid_argument("cell widths must be positive");
}

FieldState::FieldState(const Grid2D& g, int order) : grid(g), N(order) {
  g.validate();
  if (order < 1) throw UnsupportedOrder("moment order must be >= 1");
  U.assign(g.cells() * m(), 0.0);
}

void FieldState::set(int i, int j, const PrimitiveState& V) {
  if (V.order() != N) throw std::invalid_argument("state order does not match field");
  Eigen::VectorXd u = conserved_vector(V);
  std::copy(u.data(), u.data() + m(), cell(i, j));
}

double FieldState::mass() const {
  double s = 0.0;
  for (std::size_t c = 0; c < grid.cells(); ++c) s += U[c * m()];
  return s * grid.dx * grid.dy;
}

std::string boundary_name(Boundary b) { return b == Boundary::Periodic ? "periodic" : "outflow"; }

Boundary parse_boundary(const std::string& s) {
  if (s == "periodic") return Boundary::Periodic;
  if (s == "outflow") return Boundary::Outflow;
  throw std::invalid_argument("unknown boundary '" + s + "'");
}

void SolverConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  if (!(h_dry > 0.0)) throw std::invalid_argument("h_dry must be positive");
  source.validate();
}

namespace {

std::string cell_msg(const char* what, int i, int j) {
  std::ostringstream os;
  os << what << " at cell (" << i << ", " << j << ")";
  return os.str();
}

}  // namespace

DryCell::DryCell(int i_, int j_, double h)
    : std::runtime_error(cell_msg("dry cell", i_, j_) + " h=" + std::to_string(h)), i(i_), j(j_) {}

NonFinite::NonFinite(int i_, int j_, int c)
    : std::runtime_error(cell_msg("non-finite value", i_, j_) + " component " + std::to_string(c)),
      i(i_),
      j(j_),
      component(c) {}

double numeric_speed(const Eigen::MatrixXd& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue iteration failed");
  double r = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) r = std::max(r, std::abs(es.eigenvalues()(i)));
  return 1.05 * r;
}

namespace {

// Reusable buffers for the face kernel.
struct FaceWork {
  PrimitiveState V;
  Eigen::MatrixXd M;
  Eigen::VectorXd avg, dU, MdU;
  // Last evaluated average state; uniform regions repeat it face after face.
  Eigen::VectorXd last_avg;
  Direction last_axis = Direction::X;
  double last_speed = -1.0;
};

// Writes D- and D+ for the face between UL and UR; returns the speed.
double face_kernel(const double* UL, const double* UR, int m, int N, Direction axis,
                   const Model& model, double g, FaceWork& w, double* Dm, double* Dp) {
  w.avg.resize(m);
  w.dU.resize(m);
  for (int k = 0; k < m; ++k) {
    w.avg(k) = 0.5 * (UL[k] + UR[k]);
    w.dU(k) = UR[k] - UL[k];
  }
  if (!(w.avg(0) > 0.0)) throw DryInterface("interface average has non-positive depth");
  double s;
  if (w.last_speed >= 0.0 && w.last_axis == axis && w.last_avg.size() == m &&
      std::equal(w.avg.data(), w.avg.data() + m, w.last_avg.data())) {
    s = w.last_speed;
  } else {
    primitive_from(w.avg.data(), N, g, w.V);
    const bool analytic = model.has_analytic_speed() && model.effective_variant() != Variant::Custom;
    if (axis == Direction::X) {
      model.matrix_x(w.V, w.M);
      s = analytic ? model.wave_speed(w.V, 1.0, 0.0) : numeric_speed(w.M);
    } else {
      model.matrix_y(w.V, w.M);
      s = analytic ? model.wave_speed(w.V, 0.0, 1.0) : numeric_speed(w.M);
    }
    w.last_avg = w.avg;
    w.last_axis = axis;
    w.last_speed = s;
  }
  w.MdU.noalias() = w.M * w.dU;
  for (int k = 0; k < m; ++k) {
    Dm[k] = 0.5 * (w.MdU(k) - s * w.dU(k));
    Dp[k] = 0.5 * (w.MdU(k) + s * w.dU(k));
  }
  return s;
}

}  // namespace

Fluctuations interface_fluctuations(const ConservedState& UL, const ConservedState& UR,
                                    Direction axis, const Model& model, double g) {
  const int N = model.order();
  if (UL.order() != N || UR.order() != N) throw std::invalid_argument("state order mismatch");
  if (!(UL.h > 0.0) || !(UR.h > 0.0)) throw DryInterface("interface state is dry");
  const Eigen::VectorXd l = UL.to_vector(), r = UR.to_vector();
  const int m = 2 * N + 3;
  Fluctuations f;
  f.minus.resize(m);
  f.plus.resize(m);
  FaceWork w;
  f.speed = face_kernel(l.data(), r.data(), m, N, axis, model, g, w, f.minus.data(), f.plus.data());
  return f;
}

void apply_bc(const FieldState& s, const SolverConfig& cfg, GhostField& G) {
  const int nx = s.grid.nx, ny = s.grid.ny, m = s.m();
  G.nx = nx;
  G.ny = ny;
  G.m = m;
  G.U.resize(static_cast<std::size_t>(nx + 2) * (ny + 2) * m);
  auto src = [&](int I, int J) {
    // map ghost-extended indices to an interior cell
    int i = I - 1, j = J - 1;
    if (i < 0) i = cfg.bc_x == Boundary::Periodic ? nx - 1 : 0;
    if (i >= nx) i = cfg.bc_x == Boundary::Periodic ? 0 : nx - 1;
    if (j < 0) j = cfg.bc_y == Boundary::Periodic ? ny - 1 : 0;
    if (j >= ny) j = cfg.bc_y == Boundary::Periodic ? 0 : ny - 1;
    return s.cell(i, j);
  };
  for (int J = 0; J < ny + 2; ++J)
    for (int I = 0; I < nx + 2; ++I) {
      const double* c = src(I, J);
      std::copy(c, c + m, G.cell(I, J));
    }
}

GhostField apply_bc(const FieldState& s, const SolverConfig& cfg) {
  GhostField G;
  apply_bc(s, cfg, G);
  return G;
}

Solver::Solver(const SolverConfig& cfg, int N) : cfg_(cfg), model_(cfg.variant, N) {
  cfg_.validate();
}

void Solver::face_pass(const FieldState& s) {
  const int nx = s.grid.nx, ny = s.grid.ny, m = s.m(), N = s.N;
  const double g = cfg_.source.g;
  apply_bc(s, cfg_, ghost_);
  dx_minus_.resize(static_cast<std::size_t>(nx + 1) * ny * m);
  dx_plus_.resize(dx_minus_.size());
  dy_minus_.resize(static_cast<std::size_t>(ny + 1) * nx * m);
  dy_plus_.resize(dy_minus_.size());
  FaceWork w;
  sx_ = sy_ = 0.0;
  // x-faces: face f between ghost cells (f, j+1) and (f+1, j+1)
  for (int j = 0; j < ny; ++j)
    for (int f = 0; f <= nx; ++f) {
      const std::size_t o = (static_cast<std::size_t>(j) * (nx + 1) + f) * m;
      sx_ = std::max(sx_, face_kernel(ghost_.cell(f, j + 1), ghost_.cell(f + 1, j + 1), m, N,
                                      Direction::X, model_, g, w, &dx_minus_[o], &dx_plus_[o]));
    }
  // y-faces: face f between ghost cells (i+1, f) and (i+1, f+1)
  for (int i = 0; i < nx; ++i)
    for (int f = 0; f <= ny; ++f) {
      const std::size_t o = (static_cast<std::size_t>(i) * (ny + 1) + f) * m;
      sy_ = std::max(sy_, face_kernel(ghost_.cell(i + 1, f), ghost_.cell(i + 1, f + 1), m, N,
                                      Direction::Y, model_, g, w, &dy_minus_[o], &dy_plus_[o]));
    }
}

double Solver::stable_dt(const FieldState& s) {
  face_pass(s);
  const double rate = sx_ / s.grid.dx + sy_ / s.grid.dy;
  return rate > 0.0 ? cfg_.cfl / rate : 1e300;
}

StepStats Solver::step(FieldState& s, double dt_max) {
  face_pass(s);
  const int nx = s.grid.nx, ny = s.grid.ny, m = s.m(), N = s.N;
  StepStats st;
  st.sx = sx_;
  st.sy = sy_;
  const double rate = sx_ / s.grid.dx + sy_ / s.grid.dy;
  st.dt = std::min(rate > 0.0 ? cfg_.cfl / rate : 1e300, dt_max);
  if (!(st.dt > 0.0) || st.dt >= 1e299) st.dt = dt_max;
  const double lx = st.dt / s.grid.dx, ly = st.dt / s.grid.dy;
  const SourceParams& P = cfg_.source;
  const bool friction = cfg_.apply_source && P.nu > 0.0;
  const bool source_on =
      cfg_.apply_source &&
      (friction || P.e[0] != 0.0 || P.e[1] != 0.0 || P.dhb_dx != 0.0 || P.dhb_dy != 0.0);
  PrimitiveState V;
  double h_min = 1e300;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double* u = s.cell(i, j);
      const double* xl = &dx_plus_[(static_cast<std::size_t>(j) * (nx + 1) + i) * m];
      const double* xr = &dx_minus_[(static_cast<std::size_t>(j) * (nx + 1) + i + 1) * m];
      const double* yb = &dy_plus_[(static_cast<std::size_t>(i) * (ny + 1) + j) * m];
      const double* yt = &dy_minus_[(static_cast<std::size_t>(i) * (ny + 1) + j + 1) * m];
      Eigen::VectorXd S;
      if (source_on) {
        primitive_from(u, N, P.g, V);
        S = source_term(V, P, model_.constants());
      }
      for (int k = 0; k < m; ++k) {
        // x and y contributions are summed before touching U so that the
        // update is symmetric under swapping the axes
        double du = lx * (xl[k] + xr[k]) + ly * (yb[k] + yt[k]);
        u[k] -= du;
        if (source_on) u[k] += st.dt * S(k);
      }
      for (int k = 0; k < m; ++k)
        if (!std::isfinite(u[k])) throw NonFinite(i, j, k);
      if (u[0] < 0.0) throw DryCell(i, j, u[0]);
      if (u[0] <= cfg_.h_dry) {
        u[0] = cfg_.h_dry;
        std::fill(u + 1, u + m, 0.0);
        ++st.dry_clamped;
      }
      h_min = std::min(h_min, u[0]);
    }
  if (friction) {
    const double maxC = model_.constants().max_C();
    st.stiffness = st.dt * (2 * N + 1) * P.nu / P.lambda * (1.0 + P.lambda * maxC / h_min);
  }
  s.time += st.dt;
  return st;
}

FieldState step(const FieldState& state, const SolverConfig& cfg) {
  Solver solver(cfg, state.N);
  FieldState out = state;
  solver.step(out);
  return out;
}

RunResult run(const FieldState& initial, const SolverConfig& cfg,
              const std::vector<Observer*>& observers) {
  RunResult res;
  res.state = initial;
  FieldState& s = res.state;
  if (cfg.t_end < initial.time) throw std::invalid_argument("t_end lies before the initial time");
  Solver solver(cfg, initial.N);
  std::vector<double> outs;
  for (double t : cfg.t_out)
    if (t >= initial.time && t <= cfg.t_end) outs.push_back(t);
  std::sort(outs.begin(), outs.end());
  outs.erase(std::unique(outs.begin(), outs.end()), outs.end());
  std::size_t next_out = 0;
  for (auto* o : observers) o->on_start(s);
  auto emit_due = [&]() {
    while (next_out < outs.size() && outs[next_out] <= s.time) {
      for (auto* o : observers) o->on_output(s);
      ++next_out;
    }
  };
  emit_due();
  bool warned = false;
  while (s.time < cfg.t_end) {
    double target = cfg.t_end;
    if (next_out < outs.size()) target = std::min(target, outs[next_out]);
    StepStats st = solver.step(s, target - s.time);
    // land exactly on the requested time
    if (std::abs(s.time - target) <= 1e-14 * std::max(1.0, std::abs(target))) s.time = target;
    ++res.steps;
    res.max_stiffness = std::max(res.max_stiffness, st.stiffness);
    if (st.stiffness > 1.0 && !warned) {
      res.warnings.push_back("explicit friction step is stiff: dt (2N+1) nu/lambda (1 + lambda C/h) = " +
                             std::to_string(st.stiffness) + " at t=" + std::to_string(s.time));
      warned = true;
    }
    if (st.dry_clamped > 0)
      res.warnings.push_back(std::to_string(st.dry_clamped) + " cells clamped to h_dry at t=" +
                             std::to_string(s.time));
    for (auto* o : observers) o->on_step(s, st);
    emit_due();
  }
  for (auto* o : observers) o->on_finish(s);
  return res;
}

}  // namespace swme
