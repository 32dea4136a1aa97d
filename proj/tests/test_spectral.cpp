#include <doctest.h>

#include <Eigen/LU>
#include <cmath>
#include <numbers>
#include <random>

#include "swme/commands.hpp"
#include "swme/legendre.hpp"
#include "swme/spectral.hpp"

using namespace swme;

namespace {

// Faddeev-LeVerrier: ascending monomial coefficients of det(xI - M).
Eigen::VectorXd faddeev_leverrier(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c(n) = 1.0;
  Eigen::MatrixXd Mk = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    Mk = A * Mk + c(n - k + 1) * Eigen::MatrixXd::Identity(n, n);
    c(n - k) = -(A * Mk).trace() / k;
  }
  return c;
}

Eigen::MatrixXd random_hessenberg(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ud(-1.0, 1.0), sd(0.5, 1.5);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= std::min(i + 1, n - 1); ++j) M(i, j) = j == i + 1 ? sd(rng) : ud(rng);
  return M;
}

Eigen::MatrixXd block(const Model& m, const PrimitiveState& V, bool first) {
  DirectionalMatrix A;
  m.matrix_x(V, A.entries);
  const int N = V.order();
  Eigen::MatrixXd W = reorder(A, Ordering::BlockReordered).entries;
  return first ? Eigen::MatrixXd(W.topLeftCorner(N + 2, N + 2)) : Eigen::MatrixXd(W.bottomRightCorner(N + 1, N + 1));
}

}  // namespace

TEST_CASE("associated polynomials of small matrices") {
  Eigen::MatrixXd one(1, 1);
  one << 0.3;
  const auto seq = associated_polynomials(HessenbergView::from(one));
  REQUIRE(seq.coeffs.size() == 2);
  CHECK(seq.coeffs[1](0) == doctest::Approx(-0.3));
  CHECK(seq.coeffs[1](1) == doctest::Approx(1.0));

  Eigen::MatrixXd comp(2, 2);
  comp << 0, 1, 1, 0;  // companion of x^2 - 1
  CharPoly cp = char_poly_hessenberg(HessenbergView::from(comp));
  CHECK(cp.monomial(0) == doctest::Approx(-1.0));
  CHECK(std::abs(cp.monomial(1)) <= 1e-15);
  CHECK(cp.monomial(2) == doctest::Approx(1.0));

  Eigen::MatrixXd reduced = Eigen::MatrixXd::Zero(3, 3);
  reduced(0, 1) = 1.0;  // a_23 = 0
  CHECK_THROWS_AS(associated_polynomials(HessenbergView::from(reduced)), NotUnreduced);
  Eigen::MatrixXd full = Eigen::MatrixXd::Ones(3, 3);
  CHECK_THROWS_AS(HessenbergView::from(full), std::invalid_argument);
}

TEST_CASE("associated sequence of the HSWME blocks") {
  const int N = 5;
  PrimitiveState V = PrimitiveState::rest(N, 1.4, 1.0);
  V.um = 0.3;
  V.alpha[0] = 0.8;
  Model m(Variant::HSWME, N);
  HessenbergView H22 = HessenbergView::from(block(m, V, false));
  HessenbergView H11 = HessenbergView::from(block(m, V, true));
  for (double x : {-0.7, 0.1, 0.9, 1.6}) {
    const double xi = (x - V.um) / V.alpha[0];
    // q_n = (2n+1) P_n(xi) up to the normalisation fixed by the superdiagonal
    const auto q = associated_values(H22, x);
    const double s = q[1] / (3 * legendre(1, xi));
    for (int n = 1; n <= N; ++n) CHECK(q[n] == doctest::Approx(s * (2 * n + 1) * legendre(n, xi)).epsilon(1e-12));
    const auto p = associated_values(H11, x);
    const double gh = V.g * V.h, a = V.alpha[0];
    CHECK(p[2] == doctest::Approx((3 * (x - V.um) * (x - V.um) - 3 * gh + a * a) / (2 * a)).epsilon(1e-12));
  }
}

TEST_CASE("recurrence characteristic polynomial equals the dense one") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    Eigen::MatrixXd M = random_hessenberg(6, rng);
    CharPoly cp = char_poly_hessenberg(HessenbergView::from(M));
    Eigen::VectorXd ref = faddeev_leverrier(M);
    for (int k = 0; k <= 6; ++k) CHECK(std::abs(cp.monomial(k) - ref(k)) <= 1e-9 * std::max(1.0, std::abs(ref(k))));
  }
  // beyond the monomial limit only the evaluator is available
  Eigen::MatrixXd big = random_hessenberg(40, rng) * 0.5;
  CharPoly cp = char_poly_hessenberg(HessenbergView::from(big));
  CHECK(cp.monomial.size() == 0);
  const double x = 0.37;
  const double det = (x * Eigen::MatrixXd::Identity(40, 40) - big).partialPivLu().determinant();
  CHECK(cp.eval(x) == doctest::Approx(det).epsilon(1e-8));
}

TEST_CASE("analytic eigenvalues") {
  PrimitiveState V = PrimitiveState::rest(1, 1.0, 1.0);
  V.alpha[0] = 1.0;
  auto ev = analytic_eigenvalues(Variant::HSWME, V);
  REQUIRE(ev);
  const std::vector<double> ref{-std::sqrt(2.0), -1 / std::sqrt(3.0), 0.0, 1 / std::sqrt(3.0), std::sqrt(2.0)};
  for (int k = 0; k < 5; ++k) CHECK(std::abs((*ev)[k] - ref[k]) <= 1e-12);
  Eigen::MatrixXd A;
  Model(Variant::HSWME, 1).matrix_x(V, A);
  NumericSpectrum ns = numeric_eigen(A);
  for (int k = 0; k < 5; ++k) CHECK(std::abs(ns.eigenvalues[k].real() - ref[k]) <= 1e-10);

  for (int N : {1, 3, 6}) {
    PrimitiveState W = PrimitiveState::rest(N, 1.0, 1.0);
    W.beta[0] = 0.4;
    auto e = analytic_eigenvalues(Variant::HSWME, W);
    REQUIRE(e);
    CHECK(e->front() == doctest::Approx(-1.0));
    CHECK(e->back() == doctest::Approx(1.0));
    for (int k = 1; k <= 2 * N + 1; ++k) CHECK((*e)[k] == 0.0);
  }

  // Galilean shift
  PrimitiveState S = PrimitiveState::rest(4, 1.2, 1.0);
  S.alpha[0] = -0.6;
  auto e0 = analytic_eigenvalues(Variant::BetaHSWME, S);
  S.um += 0.75;
  auto e1 = analytic_eigenvalues(Variant::BetaHSWME, S);
  for (std::size_t k = 0; k < e0->size(); ++k) CHECK((*e1)[k] == doctest::Approx((*e0)[k] + 0.75));

  CHECK_FALSE(analytic_eigenvalues(Variant::GloballyHyperbolic, S));
  CHECK_FALSE(analytic_eigenvalues(Variant::SWME, S));
}

TEST_CASE("beta variant at N = 2 has Legendre nodes in the alpha block") {
  PrimitiveState V = PrimitiveState::rest(2, 1.0, 1.0);
  V.alpha[0] = 0.5;
  Eigen::MatrixXd A;
  Model(Variant::BetaHSWME, 2).matrix_x(V, A);
  NumericSpectrum ns = numeric_eigen(A);
  std::vector<double> want{-std::sqrt(1.25), std::sqrt(1.25), -0.5 / std::sqrt(3.0), 0.5 / std::sqrt(3.0)};
  for (double r : gauss_legendre_nodes(3)) want.push_back(0.5 * r);
  std::sort(want.begin(), want.end());
  for (int k = 0; k < 7; ++k) CHECK(std::abs(ns.eigenvalues[k].real() - want[k]) <= 1e-10);
}

TEST_CASE("numeric eigen multiplicities") {
  Eigen::MatrixXd D = Eigen::Vector3d(1, 2, 3).asDiagonal();
  NumericSpectrum d = numeric_eigen(D);
  REQUIRE(d.clusters.size() == 3);
  for (const auto& c : d.clusters) CHECK((c.algebraic == 1 && c.geometric == 1));
  CHECK(classify(d) == Hyperbolicity::Hyperbolic);

  Eigen::MatrixXd J(2, 2);
  J << 0, 1, 0, 0;
  NumericSpectrum j = numeric_eigen(J);
  REQUIRE(j.clusters.size() == 1);
  CHECK(j.clusters[0].algebraic == 2);
  CHECK(j.clusters[0].geometric == 1);
  CHECK(classify(j) == Hyperbolicity::WeaklyHyperbolic);

  Eigen::MatrixXd R(2, 2);
  R << 0, -1, 1, 0;
  NumericSpectrum r = numeric_eigen(R);
  CHECK(r.complex_detected);
  CHECK(classify(r) == Hyperbolicity::NonHyperbolic);
}

TEST_CASE("weak corner eigenspace lives outside the first W block") {
  for (int N : {2, 3, 5}) {
    std::mt19937_64 rng(N);
    PrimitiveState V = random_state(N, rng);
    V.alpha[0] = 0.0;
    V.beta[0] = 0.5;
    DirectionalMatrix A;
    Model(Variant::HSWME, N).matrix_x(V, A.entries);
    Eigen::MatrixXd W = reorder(A, Ordering::BlockReordered).entries;
    const int n = 2 * N + 3;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(W - V.um * Eigen::MatrixXd::Identity(n, n));
    lu.setThreshold(1e-10);
    Eigen::MatrixXd K = lu.kernel();
    CHECK(K.cols() == N + 1);
    CHECK(K.topRows(N + 2).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("rotation matrix") {
  const int N = 2;
  CHECK(rotation_matrix(0.0, N).isApprox(Eigen::MatrixXd::Identity(7, 7)));
  Eigen::MatrixXd T = rotation_matrix(0.7, N);
  CHECK((T.transpose() * T).isApprox(Eigen::MatrixXd::Identity(7, 7), 1e-14));
  CHECK((rotation_matrix(0.3, N) * rotation_matrix(0.4, N)).isApprox(T, 1e-14));

  PrimitiveState V = PrimitiveState::rest(N, 1.0, 1.0);
  V.um = 0.2;
  V.vm = 0.5;
  V.alpha = {0.1, 0.3};
  V.beta = {-0.4, 0.6};
  Eigen::VectorXd U = conserved_vector(V);
  Eigen::VectorXd R = rotation_matrix(std::numbers::pi / 2, N) * U;
  CHECK(R(1) == doctest::Approx(U(2)));
  CHECK(R(2) == doctest::Approx(-U(1)));
  CHECK(R(5) == doctest::Approx(U(6)));
  CHECK(R(6) == doctest::Approx(-U(5)));
  PrimitiveState Vr = rotate_state(V, std::numbers::pi / 2);
  CHECK(Vr.um == doctest::Approx(0.5));
  CHECK(Vr.vm == doctest::Approx(-0.2));
}

TEST_CASE("invariance residual") {
  std::mt19937_64 rng(3);
  for (Variant v : builtin_variants()) {
    PrimitiveState V = random_state(3, rng);
    CHECK(invariance_residual(V, v, 0.0).max() == 0.0);
    InvarianceResidual r = invariance_residual(V, v, 1.1);
    CHECK(r.max() <= 1e-11 * r.scale);
  }
  Model m(Variant::HSWME, 2);
  MatrixAssembler corrupted = [&m](const PrimitiveState& W) {
    MatrixPair p;
    m.matrices(W, p.A.entries, p.B.entries);
    p.B.entries(3, 4) += 1.0;
    return p;
  };
  CHECK(invariance_residual(random_state(2, rng), corrupted, 0.9).max() >= 0.5);
}

TEST_CASE("directional certification") {
  std::mt19937_64 rng(8);
  PrimitiveState V = random_state(4, rng);
  for (const auto& r : certify_hyperbolicity(V, Variant::HSWME, 16)) {
    CHECK(r.classification == Hyperbolicity::Hyperbolic);
    CHECK(r.shortcut_deviation <= 1e-9);
  }
  const auto angles = certification_angles(8);
  CHECK(angles.size() == 8);  // 0, pi/4 and pi/2 already lie on the 8-point grid
  CHECK(certification_angles(6).size() == 8);  // pi/4 and pi/2 appended
  V.alpha[0] = 0.0;
  V.beta[0] = 0.5;
  auto weak = certify_hyperbolicity(V, Model(Variant::HSWME, 4), {0.0});
  CHECK(weak[0].classification == Hyperbolicity::WeaklyHyperbolic);
  auto fixed = certify_hyperbolicity(V, Model(Variant::GloballyHyperbolic, 4), {0.0, 1.0});
  for (const auto& r : fixed) CHECK(r.classification == Hyperbolicity::Hyperbolic);
  CHECK(serialize_reports(fixed).find("Hyperbolic") != std::string::npos);
}
