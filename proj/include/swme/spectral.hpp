#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swme/model.hpp"

namespace swme {

struct NotUnreduced : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConvergenceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lower Hessenberg matrix: a_ij = 0 for j > i+1.
struct HessenbergView {
  Eigen::MatrixXd entries;
  std::vector<bool> superdiag_nonzero;
  bool unreduced = false;

  // Throws std::invalid_argument if M is not lower Hessenberg.
  static HessenbergView from(const Eigen::MatrixXd& M, double rel_tol = 1e-13);
  int size() const { return static_cast<int>(entries.rows()); }
  double rho() const;  // product of the superdiagonal
};

// Monomial coefficients (ascending powers) of q_0..q_n.
struct PolySequence {
  std::vector<Eigen::VectorXd> coeffs;
};

PolySequence associated_polynomials(const HessenbergView& H);
// q_0(x)..q_n(x) straight from the recurrence; usable for any n.
std::vector<double> associated_values(const HessenbergView& H, double x);

struct CharPoly {
  double rho = 1.0;
  Eigen::VectorXd monomial;  // rho q_n; empty beyond kMonomialMaxDegree
  bool simple_roots = true;
  std::function<double(double)> eval;  // rho q_n(x), always available
};
inline constexpr int kMonomialMaxDegree = 30;

CharPoly char_poly_hessenberg(const HessenbergView& H);
double poly_eval(const Eigen::VectorXd& coeffs, double x);
std::vector<std::complex<double>> polynomial_roots(const Eigen::VectorXd& coeffs);

// Theorem-table eigenvalues for HSWME and BetaHSWME; nullopt otherwise.
std::optional<std::vector<double>> analytic_eigenvalues(const ModelVariant& variant,
                                                        const PrimitiveState& V);

struct EigenCluster {
  double value = 0.0;
  int algebraic = 1;
  int geometric = 1;
};

struct NumericSpectrum {
  std::vector<std::complex<double>> eigenvalues;  // sorted by (real, imag)
  bool complex_detected = false;
  double max_imag = 0.0;
  double spectral_radius = 0.0;
  std::vector<EigenCluster> clusters;  // only when all eigenvalues are real
  double min_gap = 0.0;                // between distinct clusters
};

NumericSpectrum numeric_eigen(const Eigen::MatrixXd& M);

enum class Hyperbolicity { Hyperbolic, WeaklyHyperbolic, NonHyperbolic };
std::string hyperbolicity_name(Hyperbolicity h);

struct SpectralReport {
  double theta = 0.0;
  double nx = 1.0, ny = 0.0;
  std::vector<double> eigenvalues;  // real parts
  bool complex_detected = false;
  double max_imag = 0.0;
  std::vector<EigenCluster> clusters;
  Hyperbolicity classification = Hyperbolicity::NonHyperbolic;
  double min_gap = 0.0;
  double spectral_radius = 0.0;
  double shortcut_deviation = 0.0;  // vs x-spectrum of the rotated state
};

Hyperbolicity classify(const NumericSpectrum& s);
SpectralReport spectral_report(const Eigen::MatrixXd& M, double theta);

// Directions 2 pi k / n plus 0, pi/2, pi/4.
std::vector<double> certification_angles(int n_directions);
std::vector<SpectralReport> certify_hyperbolicity(const PrimitiveState& V,
                                                  const ModelVariant& variant,
                                                  int n_directions);
std::vector<SpectralReport> certify_hyperbolicity(const PrimitiveState& V, const Model& model,
                                                  const std::vector<double>& angles);

Eigen::MatrixXd rotation_matrix(double theta, int N);
PrimitiveState rotate_state(const PrimitiveState& V, double theta);

struct InvarianceResidual {
  double primary = 0.0;    // |cos A + sin B - T^-1 A(TU) T|
  double companion = 0.0;  // |-sin A + cos B - T^-1 B(TU) T|
  double scale = 1.0;      // 1 + |A|
  double max() const { return primary > companion ? primary : companion; }
};

using MatrixAssembler = std::function<MatrixPair(const PrimitiveState&)>;
InvarianceResidual invariance_residual(const PrimitiveState& V, const ModelVariant& variant,
                                       double theta);
InvarianceResidual invariance_residual(const PrimitiveState& V, const MatrixAssembler& asm_fn,
                                       double theta);

std::string serialize_reports(const std::vector<SpectralReport>& reports);

}  // namespace swme
