#include <Eigen/Eigenvalues>
#include <cmath>

#include "swme/model.hpp"

namespace swme {

namespace {

std::shared_ptr<const BlockClosure> closure_for(const ModelVariant& v, int N) {
  if (v.tag == Variant::Custom) {
    if (!v.custom) throw std::invalid_argument("Custom variant requires a closure payload");
    if (v.custom->N != N) throw UnsupportedOrder("custom closure order does not match state");
    return v.custom;
  }
  // the closures only differ from HSWME for N >= 2
  switch (N == 1 ? Variant::HSWME : v.tag) {
    case Variant::SWME: return nullptr;
    case Variant::HSWME: return std::make_shared<const BlockClosure>(hswme_closure(N));
    case Variant::BetaHSWME: return std::make_shared<const BlockClosure>(beta_hswme_closure(N));
    case Variant::GloballyHyperbolic:
      return std::make_shared<const BlockClosure>(globally_hyperbolic_closure(N));
    case Variant::GeneralClosureExample:
      return std::make_shared<const BlockClosure>(example_closure(N));
    default: break;
  }
  throw UnsupportedOrder("unsupported variant");
}

// Largest |eigenvalue| of the moment part per unit alpha_1: with g = 0 the
// gravity pair collapses to u +- alpha_1 and the spectrum scales with alpha_1.
double moment_node_radius(const BlockClosure& cl) {
  PrimitiveState V = PrimitiveState::rest(cl.N, 1.0, 0.0);
  V.alpha[0] = 1.0;
  Eigen::MatrixXd A;
  cl.assemble_x(V, A);
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  double r = 1.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) r = std::max(r, std::abs(es.eigenvalues()(i)));
  return r;
}

}  // namespace

Model::Model(const ModelVariant& variant, int N)
    : variant_(variant), N_(N), K_(compute_moment_constants({N})) {
  if (N < 1) throw UnsupportedOrder("moment order must be >= 1");
  closure_ = closure_for(variant, N);
  if (variant.tag == Variant::Custom)
    effective_ = Variant::Custom;
  else
    effective_ = (N == 1) ? Variant::HSWME : variant.tag;
  if (closure_) node_radius_ = moment_node_radius(*closure_);
}

void Model::matrix_x(const PrimitiveState& V, Eigen::MatrixXd& A) const {
  if (closure_) {
    closure_->assemble_x(V, A);
    return;
  }
  A = jacobian_flux_x(V, K_).entries + nonconservative_x(V, K_).entries;
}

void Model::matrix_y(const PrimitiveState& V, Eigen::MatrixXd& B) const {
  if (closure_) {
    closure_->assemble_y(V, B);
    return;
  }
  B = jacobian_flux_y(V, K_).entries + nonconservative_y(V, K_).entries;
}

void Model::matrices(const PrimitiveState& V, Eigen::MatrixXd& A, Eigen::MatrixXd& B) const {
  matrix_x(V, A);
  matrix_y(V, B);
}

double Model::wave_speed(const PrimitiveState& V, double nx, double ny) const {
  if (closure_ && variant_.tag != Variant::Custom) {
    const double un = nx * V.um + ny * V.vm;
    const double an = nx * V.alpha[0] + ny * V.beta[0];
    return std::abs(un) + std::max(std::sqrt(V.g * V.h + an * an), node_radius_ * std::abs(an));
  }
  Eigen::MatrixXd A, B;
  matrices(V, A, B);
  Eigen::MatrixXd M = nx * A + ny * B;
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue iteration failed");
  double r = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) r = std::max(r, std::abs(es.eigenvalues()(i)));
  return 1.05 * r;
}

MatrixPair assemble_matrices(const PrimitiveState& V, const ModelVariant& variant,
                             const MomentConstants& K) {
  const int N = V.order();
  if (N < 1) throw UnsupportedOrder("moment order must be >= 1");
  MatrixPair out;
  out.A.direction = Direction::X;
  out.B.direction = Direction::Y;
  auto cl = closure_for(variant, N);
  if (cl) {
    cl->assemble(V, out.A.entries, out.B.entries);
  } else {
    out.A.entries = jacobian_flux_x(V, K).entries + nonconservative_x(V, K).entries;
    out.B.entries = jacobian_flux_y(V, K).entries + nonconservative_y(V, K).entries;
  }
  return out;
}

MatrixPair hswme_from_swme(const PrimitiveState& V, const MomentConstants& K) {
  PrimitiveState W = V;
  for (int i = 1; i < W.order(); ++i) W.alpha[i] = W.beta[i] = 0.0;
  MatrixPair out;
  out.A = jacobian_flux_x(W, K);
  out.A.entries += nonconservative_x(W, K).entries;
  out.B = jacobian_flux_y(W, K);
  out.B.entries += nonconservative_y(W, K).entries;
  return out;
}

}  // namespace swme
