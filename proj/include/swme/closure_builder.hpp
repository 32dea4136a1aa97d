#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swme/block_closure.hpp"
#include "swme/model.hpp"
#include "swme/rational_poly.hpp"
#include "swme/spectral.hpp"

namespace swme {

using BlockLinearForm = BlockForm;

// y-direction block paired with a under the 2x2 invariance rule.
// In coefficients: (c1..c6) -> (-c5, -c6, -c4, c3, c1, c2); applying it
// twice gives -a.
BlockLinearForm partner_block(const BlockLinearForm& a);

// Max over random (theta, V) of |T2^-1 a(T2 V) T2 - cos a(V) - sin b(V)|
// together with the oddness defect |a(-V) + a(V)|.
double validate_block_invariance(const BlockLinearForm& a, const BlockLinearForm& b,
                                 int samples, unsigned seed = 7);

struct SingularMatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegreeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

using RationalMatrix = std::vector<std::vector<Rational>>;

struct ExactFirstColumn {
  Rational k_uu, k_aa, k_ua, k_g;
};

struct ExactBlock {
  std::array<Rational, 6> c;
  bool is_zero() const;
};

// Exact counterpart of BlockClosure; the matching works on this.
struct ExactClosure {
  int N = 1;
  std::string name;
  std::vector<ExactFirstColumn> first_col;
  std::vector<ExactBlock> coupling;

  explicit ExactClosure(int order = 1);
  ExactBlock& at(int r, int c) { return coupling[(r - 1) * (N + 1) + (c - 1)]; }
  const ExactBlock& at(int r, int c) const { return coupling[(r - 1) * (N + 1) + (c - 1)]; }

  BlockClosure to_block_closure() const;
  // alpha_1 coefficients of the reordered beta block; u_m I is implicit.
  RationalMatrix a22_hat() const;
};

ExactClosure exact_hswme(int N);
ExactClosure exact_globally_hyperbolic(int N);
ExactClosure exact_beta_hswme(int N);
ExactClosure exact_example(int N);
// Every variant collapses to HSWME at N = 1. SWME has no block form.
ExactClosure exact_closure(Variant v, int N);

struct LastRowMatch {
  std::vector<Rational> entries;  // alpha_1 multiples per column (diagonal excludes u_m)
  Rational kappa;                 // A11 only: first-column entry is -kappa alpha_1^2
  Rational scale;                 // q_final = scale * target
};

// q_0..q_{n-1} of a normalized lower Hessenberg matrix in the Legendre basis of xi.
std::vector<LegendreSeries> associated_series(const RationalMatrix& H);
// Characteristic polynomial in xi with the current last row (monic up to rho).
LegendreSeries final_series(const RationalMatrix& H);

// Solves for the free last row of H so that its final associated polynomial
// is proportional to target (degree n).
LastRowMatch match_last_row(const RationalMatrix& H, const LegendreSeries& target);
// Same for the alpha block: the final polynomial becomes proportional to
// factor(xi) ((x - u_m)^2 - gh - alpha_1^2). Needs N >= 2.
LastRowMatch match_last_row_a11(const ExactClosure& base, const LegendreSeries& factor);
// Q_2..Q_{N+1} of the alpha block (index k holds Q_k; 0 and 1 unused).
std::vector<GravitySeries> gravity_series(const ExactClosure& base);

ExactClosure with_a22_last_row(const ExactClosure& base, const LastRowMatch& m);
ExactClosure with_a11_last_row(const ExactClosure& base, const LastRowMatch& m);

// Entry of a reordered block as a polynomial in (u_m, alpha_1, gh).
struct EntryForm {
  Rational u, alpha, u_sq, alpha_sq, u_alpha, gh;
  std::string str() const;
  bool operator==(const EntryForm&) const = default;
};

struct CornerCertification {
  double beta1 = 0.0;
  Hyperbolicity classification = Hyperbolicity::NonHyperbolic;
  int eigen_defect = 0;  // sum of algebraic - geometric
  double min_gap = 0.0;
};

struct ClosureTarget {
  enum class Block { A11, A22 } block = Block::A22;
  LegendreSeries poly;
  std::string label;
};

// "lobatto" | "default" | "legendre" | "shift:<c>" | "a22:<c0,c1,..>" | "a11:<c0,..>"
ClosureTarget parse_closure_target(const std::string& s, int N);

struct ClosureSpec {
  int N = 1;
  std::string name;
  std::vector<EntryForm> last_row_A11;
  std::vector<EntryForm> last_row_A22;
  std::optional<LegendreSeries> target_A22;
  std::optional<LegendreSeries> target_A11_factor;
  std::vector<CornerCertification> certification;

  std::string serialize() const;
};

ClosureSpec describe_closure(const ExactClosure& cl);

struct BuiltClosure {
  ClosureSpec spec;
  ExactClosure exact;
  BlockClosure closure;
};

BuiltClosure build_closure(int N, const std::vector<ClosureTarget>& targets,
                           const std::string& name = "Custom");
// Last row of the beta block matched to P'_{N+2}; HSWME itself at N = 1.
BuiltClosure build_general_closure(int N);

}  // namespace swme
