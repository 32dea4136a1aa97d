#pragma once

#include <vector>

namespace swme {

// Legendre polynomials on [-1,1], standardized by P_n(1) = 1.
double legendre(int n, double x);
double legendre_deriv(int n, double x);
void legendre_pair(int n, double x, double& p, double& dp);

// Scaled basis on [0,1]: phi_j(zeta) = P_j(1 - 2 zeta), so phi_j(0) = 1.
double scaled_basis(int j, double zeta);
double scaled_basis_deriv(int j, double zeta);
// int_0^zeta phi_j, from the antiderivative identity of P_j.
double scaled_basis_antideriv(int j, double zeta);

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// @brief Gauss-Legendre rule on [-1,1] with n points (nodes ascending).
Quadrature gauss_legendre(int n);
/// Same rule mapped to [0,1].
Quadrature gauss_legendre_unit(int n);

std::vector<double> gauss_legendre_nodes(int n);
// Roots of P_n' (interior Gauss-Lobatto points). Throws for n < 2.
std::vector<double> gauss_lobatto_interior_nodes(int n);

struct PolyBasisSpec {
  int order_N = 1;
};

/// A_ijk, B_ijk, C_ij for 1 <= i,j,k <= N (stored 0-based, row-major).
class MomentConstants {
 public:
  explicit MomentConstants(int N = 1);

  int order() const { return N_; }
  double A(int i, int j, int k) const { return A_[idx3(i, j, k)]; }
  double B(int i, int j, int k) const { return B_[idx3(i, j, k)]; }
  double C(int i, int j) const { return C_[(i - 1) * N_ + (j - 1)]; }
  double max_C() const;

 private:
  friend MomentConstants compute_moment_constants(const PolyBasisSpec& spec);
  std::size_t idx3(int i, int j, int k) const {
    return (static_cast<std::size_t>(i - 1) * N_ + (j - 1)) * N_ + (k - 1);
  }
  int N_;
  std::vector<double> A_, B_, C_;
};

MomentConstants compute_moment_constants(const PolyBasisSpec& spec);

}  // namespace swme
