#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "swme/spectral.hpp"

namespace swme {

HessenbergView HessenbergView::from(const Eigen::MatrixXd& M, double rel_tol) {
  if (M.rows() != M.cols() || M.rows() == 0)
    throw std::invalid_argument("Hessenberg view needs a non-empty square matrix");
  const int n = static_cast<int>(M.rows());
  const double norm = M.cwiseAbs().rowwise().sum().maxCoeff();
  const double tol = rel_tol * std::max(norm, 1e-300);
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j)
      if (std::abs(M(i, j)) > tol) throw std::invalid_argument("matrix is not lower Hessenberg");
  HessenbergView H;
  H.entries = M;
  H.superdiag_nonzero.resize(std::max(n - 1, 0));
  H.unreduced = true;
  for (int i = 0; i + 1 < n; ++i) {
    H.superdiag_nonzero[i] = std::abs(M(i, i + 1)) > tol;
    H.unreduced = H.unreduced && H.superdiag_nonzero[i];
  }
  return H;
}

double HessenbergView::rho() const {
  double r = 1.0;
  for (int i = 0; i + 1 < size(); ++i) r *= entries(i, i + 1);
  return r;
}

PolySequence associated_polynomials(const HessenbergView& H) {
  if (!H.unreduced) throw NotUnreduced("Hessenberg matrix has a vanishing superdiagonal entry");
  const int n = H.size();
  const auto& a = H.entries;
  PolySequence seq;
  seq.coeffs.push_back(Eigen::VectorXd::Ones(1));
  for (int i = 1; i <= n; ++i) {
    // q_i = (x q_{i-1} - sum_{j<=i} a_ij q_{j-1}) / a_{i,i+1}, 1-based
    Eigen::VectorXd q = Eigen::VectorXd::Zero(i + 1);
    q.tail(i) = seq.coeffs[i - 1];
    for (int j = 1; j <= i; ++j) q.head(j) -= a(i - 1, j - 1) * seq.coeffs[j - 1];
    const double sup = (i < n) ? a(i - 1, i) : 1.0;
    seq.coeffs.push_back(q / sup);
  }
  return seq;
}

std::vector<double> associated_values(const HessenbergView& H, double x) {
  if (!H.unreduced) throw NotUnreduced("Hessenberg matrix has a vanishing superdiagonal entry");
  const int n = H.size();
  const auto& a = H.entries;
  std::vector<double> q(n + 1);
  q[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    double s = x * q[i - 1];
    for (int j = 1; j <= i; ++j) s -= a(i - 1, j - 1) * q[j - 1];
    q[i] = s / ((i < n) ? a(i - 1, i) : 1.0);
  }
  return q;
}

double poly_eval(const Eigen::VectorXd& c, double x) {
  double s = 0.0;
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) s = s * x + c(k);
  return s;
}

std::vector<std::complex<double>> polynomial_roots(const Eigen::VectorXd& c) {
  Eigen::Index deg = c.size() - 1;
  while (deg > 0 && c(deg) == 0.0) --deg;
  if (deg < 1) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (Eigen::Index i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < deg; ++i) comp(i, deg - 1) = -c(i) / c(deg);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("companion eigenvalues failed");
  std::vector<std::complex<double>> r(es.eigenvalues().data(),
                                      es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(r.begin(), r.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return r;
}

CharPoly char_poly_hessenberg(const HessenbergView& H) {
  if (!H.unreduced) throw NotUnreduced("Hessenberg matrix has a vanishing superdiagonal entry");
  CharPoly cp;
  cp.rho = H.rho();
  HessenbergView copy = H;
  const double rho = cp.rho;
  cp.eval = [copy, rho](double x) { return rho * associated_values(copy, x).back(); };
  if (H.size() <= kMonomialMaxDegree) {
    cp.monomial = rho * associated_polynomials(H).coeffs.back();
    auto roots = polynomial_roots(cp.monomial);
    double scale = 1.0;
    for (auto& z : roots) scale = std::max(scale, std::abs(z));
    for (std::size_t i = 0; i < roots.size(); ++i)
      for (std::size_t j = i + 1; j < roots.size(); ++j)
        if (std::abs(roots[i] - roots[j]) < 1e-10 * scale) cp.simple_roots = false;
  }
  return cp;
}

}  // namespace swme
