#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "swme/block_closure.hpp"
#include "swme/legendre.hpp"

namespace swme {

struct NonPositiveDepth : std::domain_error {
  using std::domain_error::domain_error;
};

// U = (h, hu_m, hv_m, h alpha_1, h beta_1, ..., h alpha_N, h beta_N)
struct ConservedState {
  double h = 1.0;
  double hum = 0.0;
  double hvm = 0.0;
  std::vector<double> halpha;
  std::vector<double> hbeta;

  int order() const { return static_cast<int>(halpha.size()); }
  Eigen::VectorXd to_vector() const;
  static ConservedState from_vector(const Eigen::VectorXd& U);
};

struct PrimitiveState {
  double h = 1.0;
  double um = 0.0;
  double vm = 0.0;
  std::vector<double> alpha;
  std::vector<double> beta;
  double g = 1.0;

  int order() const { return static_cast<int>(alpha.size()); }
  static PrimitiveState rest(int N, double h = 1.0, double g = 1.0);
};

PrimitiveState to_primitive(const ConservedState& U, double g);
ConservedState to_conserved(const PrimitiveState& V);
// Fills V (resizing only when the order changes) from an interleaved vector.
void primitive_from(const double* U, int N, double g, PrimitiveState& V);
Eigen::VectorXd conserved_vector(const PrimitiveState& V);

inline int system_size(int N) { return 2 * N + 3; }

enum class Direction { X, Y };
enum class Ordering { Interleaved, BlockReordered };

struct DirectionalMatrix {
  Eigen::MatrixXd entries;
  Direction direction = Direction::X;
  Ordering ordering = Ordering::Interleaved;
};

Eigen::VectorXd flux_x(const PrimitiveState& V, const MomentConstants& K);
Eigen::VectorXd flux_y(const PrimitiveState& V, const MomentConstants& K);
DirectionalMatrix jacobian_flux_x(const PrimitiveState& V, const MomentConstants& K);
DirectionalMatrix jacobian_flux_y(const PrimitiveState& V, const MomentConstants& K);
// P = P1 + P2 and Q = Q1 + Q2; P2/Q2 carry the "moment coupling block".
DirectionalMatrix nonconservative_x(const PrimitiveState& V, const MomentConstants& K);
DirectionalMatrix nonconservative_y(const PrimitiveState& V, const MomentConstants& K);

struct SourceParams {
  double nu = 0.0;
  double lambda = 1.0;
  double g = 1.0;
  std::array<double, 3> e{0.0, 0.0, 1.0};
  double dhb_dx = 0.0;
  double dhb_dy = 0.0;

  void validate() const;
};

Eigen::VectorXd source_term(const PrimitiveState& V, const SourceParams& P,
                            const MomentConstants& K);

// perm[w] = index in U of the w-th entry of W = (h, hu, ha_1..ha_N, hv, hb_1..hb_N)
std::vector<int> reorder_permutation(int N);
DirectionalMatrix reorder(const DirectionalMatrix& M, Ordering to);

enum class Variant { SWME, HSWME, BetaHSWME, GloballyHyperbolic, GeneralClosureExample, Custom };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& name);  // throws std::invalid_argument
const std::vector<Variant>& builtin_variants();

struct ModelVariant {
  Variant tag = Variant::HSWME;
  std::shared_ptr<const BlockClosure> custom;

  ModelVariant() = default;
  ModelVariant(Variant t) : tag(t) {}  // NOLINT(google-explicit-constructor)
  static ModelVariant make_custom(BlockClosure closure);
};

struct UnsupportedOrder : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct MatrixPair {
  DirectionalMatrix A;
  DirectionalMatrix B;
};

MatrixPair assemble_matrices(const PrimitiveState& V, const ModelVariant& variant,
                             const MomentConstants& K);

// SWME matrices at the state with alpha_i = beta_i = 0 for i >= 2.
MatrixPair hswme_from_swme(const PrimitiveState& V, const MomentConstants& K);

// Precomputed per-(variant, N) evaluator used in inner loops.
class Model {
 public:
  Model(const ModelVariant& variant, int N);

  int order() const { return N_; }
  int size() const { return 2 * N_ + 3; }
  const ModelVariant& variant() const { return variant_; }
  // Variant actually assembled; every closure reduces to HSWME at N = 1.
  Variant effective_variant() const { return effective_; }
  const MomentConstants& constants() const { return K_; }
  const BlockClosure* closure() const { return closure_.get(); }

  void matrix_x(const PrimitiveState& V, Eigen::MatrixXd& A) const;
  void matrix_y(const PrimitiveState& V, Eigen::MatrixXd& B) const;
  void matrices(const PrimitiveState& V, Eigen::MatrixXd& A, Eigen::MatrixXd& B) const;

  // Spectral radius of n_x A + n_y B (upper bound for the numeric path).
  double wave_speed(const PrimitiveState& V, double nx, double ny) const;
  bool has_analytic_speed() const { return closure_ != nullptr; }

 private:
  ModelVariant variant_;
  Variant effective_;
  int N_;
  MomentConstants K_;
  std::shared_ptr<const BlockClosure> closure_;
  double node_radius_ = 1.0;
};

}  // namespace swme
