#include "swme/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace swme {

void legendre_pair(int n, double x, double& p, double& dp) {
  if (n < 0) throw std::invalid_argument("legendre: negative degree");
  double p0 = 1.0, p1 = x;
  double d0 = 0.0, d1 = 1.0;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 1; k < n; ++k) {
    double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
    // P'_{k+1} = P'_{k-1} + (2k+1) P_k, valid up to the endpoints
    double d2 = d0 + (2 * k + 1) * p1;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  p = p1;
  dp = d1;
}

double legendre(int n, double x) {
  double p, dp;
  legendre_pair(n, x, p, dp);
  return p;
}

double legendre_deriv(int n, double x) {
  double p, dp;
  legendre_pair(n, x, p, dp);
  return dp;
}

double scaled_basis(int j, double zeta) { return legendre(j, 1.0 - 2.0 * zeta); }

double scaled_basis_deriv(int j, double zeta) {
  return -2.0 * legendre_deriv(j, 1.0 - 2.0 * zeta);
}

double scaled_basis_antideriv(int j, double zeta) {
  // int P_j = (P_{j+1} - P_{j-1})/(2j+1); the bracket vanishes at x = 1.
  double x = 1.0 - 2.0 * zeta;
  if (j == 0) return zeta;
  return -0.5 * (legendre(j + 1, x) - legendre(j - 1, x)) / (2 * j + 1);
}

namespace {

// Safeguarded Newton on a bracket [a,b] with f(a) f(b) <= 0.
double bracketed_newton(const std::function<void(double, double&, double&)>& f,
                        double a, double b, double x0) {
  double fa, da, fb, db;
  f(a, fa, da);
  f(b, fb, db);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw std::runtime_error("root bracket has no sign change");
  double x = (x0 > a && x0 < b) ? x0 : 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    double fx, dx;
    f(x, fx, dx);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (fa < 0.0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
    }
    double xn = (dx != 0.0) ? x - fx / dx : 0.5 * (a + b);
    if (std::abs(xn - x) <= 2e-16 * std::max(1.0, std::abs(x))) return x;
    if (!(xn >= a && xn <= b)) xn = 0.5 * (a + b);
    x = xn;
    if (b - a <= 2e-16 * std::max(1.0, std::abs(x))) return x;
  }
  return x;
}

}  // namespace

std::vector<double> gauss_legendre_nodes(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_nodes: n must be >= 1");
  const double pi = std::numbers::pi;
  std::vector<double> roots(n);
  auto f = [n](double x, double& v, double& d) { legendre_pair(n, x, v, d); };
  for (int k = 1; k <= n; ++k) {
    // Bruns: the k-th largest root has angle in ((k-1/2)pi/(n+1/2), k pi/(n+1/2))
    double lo = std::cos(k * pi / (n + 0.5));
    double hi = std::cos((k - 0.5) * pi / (n + 0.5));
    double guess = std::cos(pi * (k - 0.25) / (n + 0.5));
    roots[n - k] = bracketed_newton(f, lo, hi, guess);
  }
  if (n % 2 == 1) roots[n / 2] = 0.0;
  for (int k = 0; k < n / 2; ++k) {  // enforce exact symmetry
    double r = 0.5 * (roots[n - 1 - k] - roots[k]);
    roots[k] = -r;
    roots[n - 1 - k] = r;
  }
  return roots;
}

std::vector<double> gauss_lobatto_interior_nodes(int n) {
  if (n < 2) throw std::invalid_argument("gauss_lobatto_interior_nodes: n must be >= 2");
  auto g = gauss_legendre_nodes(n);
  auto f = [n](double x, double& v, double& d) {
    double p, dp;
    legendre_pair(n, x, p, dp);
    v = dp;
    d = (2.0 * x * dp - n * (n + 1.0) * p) / (1.0 - x * x);
  };
  std::vector<double> roots(n - 1);
  for (int k = 0; k + 1 < n; ++k)
    roots[k] = bracketed_newton(f, g[k], g[k + 1], 0.5 * (g[k] + g[k + 1]));
  if ((n - 1) % 2 == 1) roots[(n - 1) / 2] = 0.0;
  for (int k = 0; k < (n - 1) / 2; ++k) {
    double r = 0.5 * (roots[n - 2 - k] - roots[k]);
    roots[k] = -r;
    roots[n - 2 - k] = r;
  }
  return roots;
}

Quadrature gauss_legendre(int n) {
  Quadrature q;
  q.nodes = gauss_legendre_nodes(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = q.nodes[i], p, dp;
    legendre_pair(n, x, p, dp);
    q.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

Quadrature gauss_legendre_unit(int n) {
  Quadrature q = gauss_legendre(n);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = 0.5 * (q.nodes[i] + 1.0);
    q.weights[i] *= 0.5;
  }
  return q;
}

MomentConstants::MomentConstants(int N) : N_(N) {
  if (N < 1) throw std::invalid_argument("moment order N must be >= 1");
  std::size_t n3 = static_cast<std::size_t>(N) * N * N;
  A_.assign(n3, 0.0);
  B_.assign(n3, 0.0);
  C_.assign(static_cast<std::size_t>(N) * N, 0.0);
}

double MomentConstants::max_C() const {
  return *std::max_element(C_.begin(), C_.end());
}

MomentConstants compute_moment_constants(const PolyBasisSpec& spec) {
  const int N = spec.order_N;
  MomentConstants K(N);
  const int m = (3 * N + 3) / 2;  // ceil((3N+2)/2)
  Quadrature q = gauss_legendre_unit(m);

  // tabulate phi, phi', int_0 phi at the nodes
  std::vector<std::vector<double>> phi(N + 1), dphi(N + 1), iphi(N + 1);
  for (int j = 1; j <= N; ++j) {
    for (double z : q.nodes) {
      phi[j].push_back(scaled_basis(j, z));
      dphi[j].push_back(scaled_basis_deriv(j, z));
      iphi[j].push_back(scaled_basis_antideriv(j, z));
    }
  }
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= N; ++j) {
      double c = 0.0;
      for (int s = 0; s < m; ++s) c += q.weights[s] * dphi[i][s] * dphi[j][s];
      K.C_[(i - 1) * N + (j - 1)] = c;
      for (int k = 1; k <= N; ++k) {
        double a = 0.0, b = 0.0;
        for (int s = 0; s < m; ++s) {
          a += q.weights[s] * phi[i][s] * phi[j][s] * phi[k][s];
          b += q.weights[s] * dphi[i][s] * iphi[j][s] * phi[k][s];
        }
        K.A_[K.idx3(i, j, k)] = (2 * i + 1) * a;
        K.B_[K.idx3(i, j, k)] = (2 * i + 1) * b;
      }
    }
  // exact symmetries of the integrands
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= N; ++j)
      for (int k = j + 1; k <= N; ++k) {
        double s = 0.5 * (K.A_[K.idx3(i, j, k)] + K.A_[K.idx3(i, k, j)]);
        K.A_[K.idx3(i, j, k)] = K.A_[K.idx3(i, k, j)] = s;
      }
  for (int i = 1; i <= N; ++i)
    for (int j = i + 1; j <= N; ++j) {
      double s = 0.5 * (K.C_[(i - 1) * N + (j - 1)] + K.C_[(j - 1) * N + (i - 1)]);
      K.C_[(i - 1) * N + (j - 1)] = K.C_[(j - 1) * N + (i - 1)] = s;
    }
  return K;
}

}  // namespace swme
