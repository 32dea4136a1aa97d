#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace swme {

struct PrimitiveState;

// A 2x2 block linear in V = (p, q):
//   c1 [[p,0],[q,0]] + c2 [[q,0],[-p,0]] + c3 [[p,0],[0,p]]
// + c4 [[q,0],[0,q]] + c5 [[0,p],[0,q]] + c6 [[0,q],[0,-p]]
struct BlockForm {
  std::array<double, 6> c{};

  bool is_zero() const;
  Eigen::Matrix2d eval(double p, double q) const;
  // y-direction partner of the block, b11(p,q) = a22(q,-p) etc.
  Eigen::Matrix2d eval_partner(double p, double q) const;
};

// First-column entries of one block row, for A:
//   d = -k_uu u (u,v) - k_aa alpha (alpha,beta) - k_ua [alpha (u,v) + u (alpha,beta)] + k_g gh (1,0)
// and the same with (u,alpha,e_x) -> (v,beta,e_y) for B.
struct FirstColumn {
  double k_uu = 0.0;
  double k_aa = 0.0;
  double k_ua = 0.0;
  double k_g = 0.0;
};

// Coefficient matrices written block-wise. Block 1 is (hu, hv), block k+1 is
// (h alpha_k, h beta_k). The transport parts (the velocity block and u_m I on
// moment diagonals) are implicit; `coupling` holds blocks linear in
// (alpha_1, beta_1).
struct BlockClosure {
  int N = 1;
  std::string name;
  std::vector<FirstColumn> first_col;  // block rows 1..N+1
  std::vector<BlockForm> coupling;     // (N+1) x (N+1), row-major

  explicit BlockClosure(int order = 1);
  BlockForm& at(int r, int c) { return coupling[(r - 1) * (N + 1) + (c - 1)]; }
  const BlockForm& at(int r, int c) const { return coupling[(r - 1) * (N + 1) + (c - 1)]; }

  // Fills A and B (resized to 2N+3) for the state V.
  void assemble(const PrimitiveState& V, Eigen::MatrixXd& A, Eigen::MatrixXd& B) const;
  void assemble_x(const PrimitiveState& V, Eigen::MatrixXd& A) const;
  void assemble_y(const PrimitiveState& V, Eigen::MatrixXd& B) const;
};

BlockClosure hswme_closure(int N);
BlockClosure beta_hswme_closure(int N);
BlockClosure globally_hyperbolic_closure(int N);
BlockClosure example_closure(int N);

}  // namespace swme
