#include "swme/block_closure.hpp"

#include <stdexcept>

#include "swme/model.hpp"

namespace swme {

bool BlockForm::is_zero() const {
  for (double x : c)
    if (x != 0.0) return false;
  return true;
}

Eigen::Matrix2d BlockForm::eval(double p, double q) const {
  Eigen::Matrix2d m;
  m(0, 0) = (c[0] + c[2]) * p + (c[1] + c[3]) * q;
  m(0, 1) = c[4] * p + c[5] * q;
  m(1, 0) = c[0] * q - c[1] * p;
  m(1, 1) = (c[2] - c[5]) * p + (c[3] + c[4]) * q;
  return m;
}

Eigen::Matrix2d BlockForm::eval_partner(double p, double q) const {
  Eigen::Matrix2d a = eval(q, -p);
  Eigen::Matrix2d b;
  b(0, 0) = a(1, 1);
  b(0, 1) = -a(1, 0);
  b(1, 0) = -a(0, 1);
  b(1, 1) = a(0, 0);
  return b;
}

BlockClosure::BlockClosure(int order)
    : N(order),
      first_col(order + 1),
      coupling(static_cast<std::size_t>(order + 1) * (order + 1)) {
  if (order < 1) throw std::invalid_argument("BlockClosure: N must be >= 1");
}

namespace {

inline void first_column(const FirstColumn& k, double u, double v, double a, double b,
                         double gh, double& d0, double& d1) {
  d0 = -k.k_uu * u * u - k.k_aa * a * a - k.k_ua * 2.0 * a * u + k.k_g * gh;
  d1 = -k.k_uu * u * v - k.k_aa * a * b - k.k_ua * (a * v + u * b);
}

}  // namespace

void BlockClosure::assemble_x(const PrimitiveState& V, Eigen::MatrixXd& A) const {
  const int n = 2 * N + 3;
  if (V.order() != N) throw std::invalid_argument("BlockClosure: state order mismatch");
  const double u = V.um, v = V.vm, a = V.alpha[0], b = V.beta[0], gh = V.g * V.h;
  A.setZero(n, n);
  A(0, 1) = 1.0;
  A(1, 1) = 2.0 * u;
  A(2, 1) = v;
  A(2, 2) = u;
  for (int r = 2; r <= N + 1; ++r) {
    A(2 * r - 1, 2 * r - 1) = u;
    A(2 * r, 2 * r) = u;
  }
  for (int r = 1; r <= N + 1; ++r) {
    double d0, d1;
    first_column(first_col[r - 1], u, v, a, b, gh, d0, d1);
    A(2 * r - 1, 0) = d0;
    A(2 * r, 0) = d1;
    for (int c = 1; c <= N + 1; ++c) {
      const BlockForm& f = at(r, c);
      if (f.is_zero()) continue;
      A.block<2, 2>(2 * r - 1, 2 * c - 1) += f.eval(a, b);
    }
  }
}

void BlockClosure::assemble_y(const PrimitiveState& V, Eigen::MatrixXd& B) const {
  const int n = 2 * N + 3;
  if (V.order() != N) throw std::invalid_argument("BlockClosure: state order mismatch");
  const double u = V.um, v = V.vm, a = V.alpha[0], b = V.beta[0], gh = V.g * V.h;
  B.setZero(n, n);
  B(0, 2) = 1.0;
  B(1, 1) = v;
  B(1, 2) = u;
  B(2, 2) = 2.0 * v;
  for (int r = 2; r <= N + 1; ++r) {
    B(2 * r - 1, 2 * r - 1) = v;
    B(2 * r, 2 * r) = v;
  }
  for (int r = 1; r <= N + 1; ++r) {
    // y first column: the x formula with (u,v,alpha,beta) -> (v,u,beta,alpha), rows swapped
    double f0, f1;
    first_column(first_col[r - 1], v, u, b, a, gh, f1, f0);
    B(2 * r - 1, 0) = f0;
    B(2 * r, 0) = f1;
    for (int c = 1; c <= N + 1; ++c) {
      const BlockForm& f = at(r, c);
      if (f.is_zero()) continue;
      B.block<2, 2>(2 * r - 1, 2 * c - 1) += f.eval_partner(a, b);
    }
  }
}

void BlockClosure::assemble(const PrimitiveState& V, Eigen::MatrixXd& A,
                            Eigen::MatrixXd& B) const {
  assemble_x(V, A);
  assemble_y(V, B);
}

namespace {

void set_c1c3(BlockForm& f, double c1, double c3) {
  f.c = {c1, 0.0, c3, 0.0, 0.0, 0.0};
}

}  // namespace

BlockClosure hswme_closure(int N) {
  BlockClosure cl(N);
  cl.name = "HSWME";
  cl.first_col[0] = {1.0, 1.0 / 3.0, 0.0, 1.0};
  cl.first_col[1] = {0.0, 0.0, 1.0, 0.0};
  if (N >= 2) cl.first_col[2] = {0.0, 2.0 / 3.0, 0.0, 0.0};
  // velocity row -> alpha_1 and alpha_1 row -> velocity
  set_c1c3(cl.at(1, 2), 1.0 / 3.0, 1.0 / 3.0);
  set_c1c3(cl.at(2, 1), 1.0, 1.0);
  for (int i = 1; i <= N - 1; ++i)  // moment i -> moment i+1
    set_c1c3(cl.at(i + 1, i + 2), 1.0 / (2 * i + 3), (i + 1.0) / (2 * i + 3));
  for (int i = 2; i <= N; ++i)  // moment i -> moment i-1
    set_c1c3(cl.at(i + 1, i), -1.0 / (2 * i - 1), double(i) / (2 * i - 1));
  return cl;
}

BlockClosure beta_hswme_closure(int N) {
  BlockClosure cl = hswme_closure(N);
  cl.name = "BetaHSWME";
  if (N < 2) return cl;
  // last row of the alpha block: (N-1)(2N+1)/((N+1)(2N-1)) alpha_1 on the
  // subdiagonal, the beta block keeps N/(2N-1) alpha_1
  const double t = (N - 1.0) * (2 * N + 1.0) / ((N + 1.0) * (2 * N - 1.0));
  const double c3 = double(N) / (2 * N - 1);
  set_c1c3(cl.at(N + 1, N), t - c3, c3);
  // At N = 2 the subdiagonal alone cannot reach P_2 p_g; the alpha_1^2 entry
  // of the first column is re-matched as well (see closure_builder).
  if (N == 2) cl.first_col[2].k_aa = 10.0 / 9.0;
  return cl;
}

BlockClosure globally_hyperbolic_closure(int N) {
  if (N < 2) {
    BlockClosure cl = hswme_closure(N);
    cl.name = "GloballyHyperbolic";
    return cl;
  }
  BlockClosure cl(N);
  cl.name = "GloballyHyperbolic";
  cl.first_col = hswme_closure(N).first_col;
  set_c1c3(cl.at(1, 2), 0.0, 2.0 / 3.0);
  set_c1c3(cl.at(2, 1), 1.0, 1.0);
  for (int i = 1; i <= N - 1; ++i)
    set_c1c3(cl.at(i + 1, i + 2), 0.0, (i + 2.0) / (2 * i + 3));
  for (int i = 2; i <= N; ++i) set_c1c3(cl.at(i + 1, i), 0.0, (i - 1.0) / (2 * i - 1));
  return cl;
}

BlockClosure example_closure(int N) {
  BlockClosure cl = hswme_closure(N);
  cl.name = "GeneralClosureExample";
  if (N < 2) return cl;
  // new last row of the beta block, alpha block unchanged (c1 + c3 kept)
  for (int j = 1; j <= N; ++j) {
    double c3;
    if (j == N)
      c3 = (2 * N + 1.0) / ((2 * N - 1.0) * (2 * N + 3.0));
    else if ((N - j) % 2 == 0)
      c3 = -(N + 1.0) / (2 * N + 3.0);
    else
      c3 = 0.0;
    BlockForm& f = cl.at(N + 1, j);
    const double a11 = f.c[0] + f.c[2];
    set_c1c3(f, a11 - c3, c3);
  }
  return cl;
}

}  // namespace swme
