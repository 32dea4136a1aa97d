#include <cmath>

#include "swme/model.hpp"

namespace swme {

namespace {

void check(const PrimitiveState& V, const MomentConstants& K) {
  if (V.order() != K.order() || static_cast<int>(V.beta.size()) != K.order())
    throw std::invalid_argument("state order does not match moment constants");
  if (!(V.h > 0.0)) throw NonPositiveDepth("non-positive water height");
}

// sum_{j,k} A_ijk a_j b_k
double contract(const MomentConstants& K, int i, const std::vector<double>& a,
                const std::vector<double>& b) {
  const int N = K.order();
  double s = 0.0;
  for (int j = 1; j <= N; ++j)
    for (int k = 1; k <= N; ++k) s += K.A(i, j, k) * a[j - 1] * b[k - 1];
  return s;
}

// Momentum-like quadratic terms shared by both directions.
struct Quadratics {
  double uu, vv, uv;  // u^2 + sum a^2/(2j+1), etc.
};

Quadratics quadratics(const PrimitiveState& V) {
  Quadratics q{V.um * V.um, V.vm * V.vm, V.um * V.vm};
  for (int j = 1; j <= V.order(); ++j) {
    const double a = V.alpha[j - 1], b = V.beta[j - 1];
    q.uu += a * a / (2 * j + 1);
    q.vv += b * b / (2 * j + 1);
    q.uv += a * b / (2 * j + 1);
  }
  return q;
}

}  // namespace

Eigen::VectorXd flux_x(const PrimitiveState& V, const MomentConstants& K) {
  check(V, K);
  const int N = V.order();
  const double h = V.h, u = V.um, v = V.vm;
  const Quadratics q = quadratics(V);
  Eigen::VectorXd F(2 * N + 3);
  F(0) = h * u;
  F(1) = h * q.uu + 0.5 * V.g * h * h;
  F(2) = h * q.uv;
  for (int i = 1; i <= N; ++i) {
    const double a = V.alpha[i - 1], b = V.beta[i - 1];
    F(1 + 2 * i) = h * (2.0 * u * a + contract(K, i, V.alpha, V.alpha));
    F(2 + 2 * i) = h * (u * b + v * a + contract(K, i, V.alpha, V.beta));
  }
  return F;
}

Eigen::VectorXd flux_y(const PrimitiveState& V, const MomentConstants& K) {
  check(V, K);
  const int N = V.order();
  const double h = V.h, u = V.um, v = V.vm;
  const Quadratics q = quadratics(V);
  Eigen::VectorXd G(2 * N + 3);
  G(0) = h * v;
  G(1) = h * q.uv;
  G(2) = h * q.vv + 0.5 * V.g * h * h;
  for (int i = 1; i <= N; ++i) {
    const double a = V.alpha[i - 1], b = V.beta[i - 1];
    G(1 + 2 * i) = h * (u * b + v * a + contract(K, i, V.alpha, V.beta));
    G(2 + 2 * i) = h * (2.0 * v * b + contract(K, i, V.beta, V.beta));
  }
  return G;
}

// Every flux entry except the pressure is h q(w/h) with q quadratic in the
// velocities w, so d/dh = -q(w) and d/d(h w_k) = dq/dw_k, both at primitives.

DirectionalMatrix jacobian_flux_x(const PrimitiveState& V, const MomentConstants& K) {
  check(V, K);
  const int N = V.order();
  const double u = V.um, v = V.vm;
  const Quadratics q = quadratics(V);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * N + 3, 2 * N + 3);
  J(0, 1) = 1.0;
  J(1, 0) = -q.uu + V.g * V.h;
  J(1, 1) = 2.0 * u;
  J(2, 0) = -q.uv;
  J(2, 1) = v;
  J(2, 2) = u;
  for (int j = 1; j <= N; ++j) {
    const double a = V.alpha[j - 1], b = V.beta[j - 1];
    J(1, 1 + 2 * j) = 2.0 * a / (2 * j + 1);
    J(2, 1 + 2 * j) = b / (2 * j + 1);
    J(2, 2 + 2 * j) = a / (2 * j + 1);
  }
  for (int i = 1; i <= N; ++i) {
    const int ra = 1 + 2 * i, rb = 2 + 2 * i;
    const double a = V.alpha[i - 1], b = V.beta[i - 1];
    J(ra, 0) = -(2.0 * u * a + contract(K, i, V.alpha, V.alpha));
    J(ra, 1) = 2.0 * a;
    J(ra, ra) += 2.0 * u;
    J(rb, 0) = -(u * b + v * a + contract(K, i, V.alpha, V.beta));
    J(rb, 1) = b;
    J(rb, 2) = a;
    J(rb, rb) += u;
    J(rb, ra) += v;
    for (int l = 1; l <= N; ++l) {
      double sa = 0.0, sb = 0.0, ta = 0.0;
      for (int k = 1; k <= N; ++k) {
        sa += K.A(i, l, k) * V.alpha[k - 1];
        sb += K.A(i, l, k) * V.beta[k - 1];
        ta += K.A(i, k, l) * V.alpha[k - 1];
      }
      J(ra, 1 + 2 * l) += 2.0 * sa;
      J(rb, 1 + 2 * l) += sb;
      J(rb, 2 + 2 * l) += ta;
    }
  }
  return {J, Direction::X, Ordering::Interleaved};
}

DirectionalMatrix jacobian_flux_y(const PrimitiveState& V, const MomentConstants& K) {
  check(V, K);
  const int N = V.order();
  const double u = V.um, v = V.vm;
  const Quadratics q = quadratics(V);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * N + 3, 2 * N + 3);
  J(0, 2) = 1.0;
  J(1, 0) = -q.uv;
  J(1, 1) = v;
  J(1, 2) = u;
  J(2, 0) = -q.vv + V.g * V.h;
  J(2, 2) = 2.0 * v;
  for (int j = 1; j <= N; ++j) {
    const double a = V.alpha[j - 1], b = V.beta[j - 1];
    J(1, 1 + 2 * j) = b / (2 * j + 1);
    J(1, 2 + 2 * j) = a / (2 * j + 1);
    J(2, 2 + 2 * j) = 2.0 * b / (2 * j + 1);
  }
  for (int i = 1; i <= N; ++i) {
    const int ra = 1 + 2 * i, rb = 2 + 2 * i;
    const double a = V.alpha[i - 1], b = V.beta[i - 1];
    J(ra, 0) = -(u * b + v * a + contract(K, i, V.alpha, V.beta));
    J(ra, 1) = b;
    J(ra, 2) = a;
    J(ra, rb) += u;
    J(ra, ra) += v;
    J(rb, 0) = -(2.0 * v * b + contract(K, i, V.beta, V.beta));
    J(rb, 2) = 2.0 * b;
    J(rb, rb) += 2.0 * v;
    for (int l = 1; l <= N; ++l) {
      double sa = 0.0, sb = 0.0, ta = 0.0;
      for (int k = 1; k <= N; ++k) {
        sb += K.A(i, l, k) * V.beta[k - 1];
        sa += K.A(i, k, l) * V.alpha[k - 1];
        ta += K.A(i, l, k) * V.beta[k - 1];
      }
      J(ra, 1 + 2 * l) += sb;
      J(ra, 2 + 2 * l) += sa;
      J(rb, 2 + 2 * l) += 2.0 * ta;
    }
  }
  return {J, Direction::Y, Ordering::Interleaved};
}

DirectionalMatrix nonconservative_x(const PrimitiveState& V, const MomentConstants& K) {
  check(V, K);
  const int N = V.order();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(2 * N + 3, 2 * N + 3);
  for (int i = 1; i <= N; ++i) {
    const int ra = 1 + 2 * i, rb = 2 + 2 * i;
    P(ra, ra) -= V.um;
    P(rb, ra) -= V.vm;
    for (int j = 1; j <= N; ++j) {
      double ga = 0.0, gb = 0.0;
      for (int k = 1; k <= N; ++k) {
        ga += K.B(i, j, k) * V.alpha[k - 1];
        gb += K.B(i, j, k) * V.beta[k - 1];
      }
      P(ra, 1 + 2 * j) += ga;
      P(rb, 1 + 2 * j) += gb;
    }
  }
  return {P, Direction::X, Ordering::Interleaved};
}

DirectionalMatrix nonconservative_y(const PrimitiveState& V, const MomentConstants& K) {
  check(V, K);
  const int N = V.order();
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2 * N + 3, 2 * N + 3);
  for (int i = 1; i <= N; ++i) {
    const int ra = 1 + 2 * i, rb = 2 + 2 * i;
    Q(ra, rb) -= V.um;
    Q(rb, rb) -= V.vm;
    for (int j = 1; j <= N; ++j) {
      double ha = 0.0, hb = 0.0;
      for (int k = 1; k <= N; ++k) {
        ha += K.B(i, j, k) * V.alpha[k - 1];
        hb += K.B(i, j, k) * V.beta[k - 1];
      }
      Q(ra, 2 + 2 * j) += ha;
      Q(rb, 2 + 2 * j) += hb;
    }
  }
  return {Q, Direction::Y, Ordering::Interleaved};
}

Eigen::VectorXd source_term(const PrimitiveState& V, const SourceParams& P,
                            const MomentConstants& K) {
  check(V, K);
  const int N = V.order();
  const double kappa = P.nu > 0.0 ? P.nu / P.lambda : 0.0;
  Eigen::VectorXd S = Eigen::VectorXd::Zero(2 * N + 3);
  double sa = 0.0, sb = 0.0;
  for (int j = 0; j < N; ++j) {
    sa += V.alpha[j];
    sb += V.beta[j];
  }
  const double hg = V.h * P.g;
  S(1) = -kappa * (V.um + sa) + hg * (P.e[0] - P.e[2] * P.dhb_dx);
  S(2) = -kappa * (V.vm + sb) + hg * (P.e[1] - P.e[2] * P.dhb_dy);
  if (kappa == 0.0) return S;
  for (int i = 1; i <= N; ++i) {
    // kappa (lambda/h) C_ij = (nu/h) C_ij
    double ca = 0.0, cb = 0.0;
    for (int j = 1; j <= N; ++j) {
      ca += K.C(i, j) * V.alpha[j - 1];
      cb += K.C(i, j) * V.beta[j - 1];
    }
    S(1 + 2 * i) = -(2 * i + 1) * (kappa * (V.um + sa) + P.nu / V.h * ca);
    S(2 + 2 * i) = -(2 * i + 1) * (kappa * (V.vm + sb) + P.nu / V.h * cb);
  }
  return S;
}

}  // namespace swme
