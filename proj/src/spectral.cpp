#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "swme/spectral.hpp"

namespace swme {

namespace {

double inf_norm(const Eigen::MatrixXd& M) {
  return M.size() == 0 ? 0.0 : M.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace

std::optional<std::vector<double>> analytic_eigenvalues(const ModelVariant& variant,
                                                        const PrimitiveState& V) {
  const int N = V.order();
  Variant tag = variant.tag;
  if (tag == Variant::Custom) return std::nullopt;
  if (N == 1) tag = Variant::HSWME;
  if (tag != Variant::HSWME && tag != Variant::BetaHSWME) return std::nullopt;
  const double u = V.um, a = V.alpha[0], gh = V.g * V.h;
  std::vector<double> ev;
  if (a == 0.0) {
    ev.push_back(u - std::sqrt(gh));
    ev.push_back(u + std::sqrt(gh));
    ev.insert(ev.end(), 2 * N + 1, u);
  } else {
    const double c = std::sqrt(gh + a * a);
    ev.push_back(u - c);
    ev.push_back(u + c);
    auto first = (tag == Variant::HSWME) ? gauss_lobatto_interior_nodes(N + 1)
                                         : gauss_legendre_nodes(N);
    for (double r : first) ev.push_back(u + r * a);
    for (double s : gauss_legendre_nodes(N + 1)) ev.push_back(u + s * a);
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

NumericSpectrum numeric_eigen(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("numeric_eigen: square matrix required");
  const int n = static_cast<int>(M.rows());
  NumericSpectrum out;
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("real Schur iteration did not converge");
  out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  const double norm = inf_norm(M);
  for (auto& z : out.eigenvalues) {
    out.max_imag = std::max(out.max_imag, std::abs(z.imag()));
    out.spectral_radius = std::max(out.spectral_radius, std::abs(z));
  }
  out.complex_detected = out.max_imag > 1e-9 * norm;
  if (out.complex_detected) return out;

  const double gap_tol = 1e-8 * (1.0 + out.spectral_radius);
  std::vector<std::pair<double, int>> groups;  // (sum, count)
  double prev = -std::numeric_limits<double>::infinity();
  for (auto& z : out.eigenvalues) {
    if (groups.empty() || z.real() - prev > gap_tol)
      groups.push_back({z.real(), 1});
    else {
      groups.back().first += z.real();
      groups.back().second += 1;
    }
    prev = z.real();
  }
  out.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    EigenCluster c;
    c.value = groups[g].first / groups[g].second;
    c.algebraic = groups[g].second;
    c.geometric = 1;
    if (c.algebraic > 1) {
      Eigen::MatrixXd S = M - c.value * Eigen::MatrixXd::Identity(n, n);
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(S);
      const auto diag = qr.matrixQR().diagonal();
      int rank = 0;
      for (int i = 0; i < n; ++i)
        if (std::abs(diag(i)) > 1e-9 * norm) ++rank;
      c.geometric = n - rank;
    }
    if (g > 0) out.min_gap = std::min(out.min_gap, c.value - out.clusters.back().value);
    out.clusters.push_back(c);
  }
  return out;
}

std::string hyperbolicity_name(Hyperbolicity h) {
  switch (h) {
    case Hyperbolicity::Hyperbolic: return "Hyperbolic";
    case Hyperbolicity::WeaklyHyperbolic: return "WeaklyHyperbolic";
    case Hyperbolicity::NonHyperbolic: return "NonHyperbolic";
  }
  return "?";
}

Hyperbolicity classify(const NumericSpectrum& s) {
  if (s.complex_detected) return Hyperbolicity::NonHyperbolic;
  for (auto& c : s.clusters)
    if (c.geometric < c.algebraic) return Hyperbolicity::WeaklyHyperbolic;
  return Hyperbolicity::Hyperbolic;
}

SpectralReport spectral_report(const Eigen::MatrixXd& M, double theta) {
  NumericSpectrum s = numeric_eigen(M);
  SpectralReport r;
  r.theta = theta;
  r.nx = std::cos(theta);
  r.ny = std::sin(theta);
  for (auto& z : s.eigenvalues) r.eigenvalues.push_back(z.real());
  r.complex_detected = s.complex_detected;
  r.max_imag = s.max_imag;
  r.clusters = s.clusters;
  r.classification = classify(s);
  r.min_gap = s.min_gap;
  r.spectral_radius = s.spectral_radius;
  return r;
}

std::vector<double> certification_angles(int n_directions) {
  std::vector<double> th;
  const double pi = std::numbers::pi;
  for (int k = 0; k < n_directions; ++k) th.push_back(2.0 * pi * k / n_directions);
  for (double t : {0.0, pi / 2, pi / 4})
    if (std::none_of(th.begin(), th.end(), [t](double s) { return std::abs(s - t) < 1e-15; }))
      th.push_back(t);
  return th;
}

std::vector<SpectralReport> certify_hyperbolicity(const PrimitiveState& V, const Model& model,
                                                  const std::vector<double>& angles) {
  Eigen::MatrixXd A, B, Ar;
  model.matrices(V, A, B);
  std::vector<SpectralReport> out;
  for (double th : angles) {
    const double c = std::cos(th), s = std::sin(th);
    SpectralReport r = spectral_report(c * A + s * B, th);
    // rotational shortcut: same spectrum as the x-matrix of T(theta) U
    model.matrix_x(rotate_state(V, th), Ar);
    NumericSpectrum sr = numeric_eigen(Ar);
    Eigen::EigenSolver<Eigen::MatrixXd> es(c * A + s * B, false);
    std::vector<std::complex<double>> ev(es.eigenvalues().data(),
                                         es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](auto a, auto b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    double dev = 0.0;
    for (std::size_t i = 0; i < ev.size(); ++i)
      dev = std::max(dev, std::abs(ev[i] - sr.eigenvalues[i]));
    r.shortcut_deviation = dev;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SpectralReport> certify_hyperbolicity(const PrimitiveState& V,
                                                  const ModelVariant& variant,
                                                  int n_directions) {
  Model model(variant, V.order());
  return certify_hyperbolicity(V, model, certification_angles(n_directions));
}

Eigen::MatrixXd rotation_matrix(double theta, int N) {
  const int n = 2 * N + 3;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  const double c = std::cos(theta), s = std::sin(theta);
  T(0, 0) = 1.0;
  for (int b = 0; b <= N; ++b) {
    const int r = 1 + 2 * b;
    T(r, r) = c;
    T(r, r + 1) = s;
    T(r + 1, r) = -s;
    T(r + 1, r + 1) = c;
  }
  return T;
}

PrimitiveState rotate_state(const PrimitiveState& V, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  PrimitiveState W = V;
  W.um = c * V.um + s * V.vm;
  W.vm = -s * V.um + c * V.vm;
  for (int i = 0; i < V.order(); ++i) {
    W.alpha[i] = c * V.alpha[i] + s * V.beta[i];
    W.beta[i] = -s * V.alpha[i] + c * V.beta[i];
  }
  return W;
}

InvarianceResidual invariance_residual(const PrimitiveState& V, const MatrixAssembler& asm_fn,
                                       double theta) {
  const int N = V.order();
  const Eigen::MatrixXd T = rotation_matrix(theta, N);
  const double c = std::cos(theta), s = std::sin(theta);
  MatrixPair P = asm_fn(V);
  MatrixPair R = asm_fn(rotate_state(V, theta));
  InvarianceResidual res;
  res.primary = inf_norm(c * P.A.entries + s * P.B.entries - T.transpose() * R.A.entries * T);
  res.companion = inf_norm(-s * P.A.entries + c * P.B.entries - T.transpose() * R.B.entries * T);
  res.scale = 1.0 + inf_norm(P.A.entries);
  return res;
}

InvarianceResidual invariance_residual(const PrimitiveState& V, const ModelVariant& variant,
                                       double theta) {
  Model model(variant, V.order());
  return invariance_residual(
      V,
      [&model](const PrimitiveState& W) {
        MatrixPair p;
        model.matrices(W, p.A.entries, p.B.entries);
        p.B.direction = Direction::Y;
        return p;
      },
      theta);
}

std::string serialize_reports(const std::vector<SpectralReport>& reports) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (const auto& r : reports) {
    os << "direction theta=" << r.theta << " n=(" << r.nx << "," << r.ny << ")"
       << " class=" << hyperbolicity_name(r.classification)
       << " complex=" << (r.complex_detected ? 1 : 0) << " max_imag=" << r.max_imag
       << " min_gap=" << r.min_gap << " radius=" << r.spectral_radius
       << " shortcut_dev=" << r.shortcut_deviation << "\n";
    os << "  eigenvalues";
    for (double e : r.eigenvalues) os << " " << e;
    os << "\n  clusters";
    for (auto& c : r.clusters) os << " " << c.value << ":" << c.algebraic << "/" << c.geometric;
    os << "\n";
  }
  return os.str();
}

}  // namespace swme
