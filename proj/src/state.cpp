#include <algorithm>
#include <cctype>
#include <cmath>

#include "swme/model.hpp"

namespace swme {

Eigen::VectorXd ConservedState::to_vector() const {
  const int N = order();
  Eigen::VectorXd U(2 * N + 3);
  U(0) = h;
  U(1) = hum;
  U(2) = hvm;
  for (int i = 0; i < N; ++i) {
    U(3 + 2 * i) = halpha[i];
    U(4 + 2 * i) = hbeta[i];
  }
  return U;
}

ConservedState ConservedState::from_vector(const Eigen::VectorXd& U) {
  if (U.size() < 5 || U.size() % 2 == 0)
    throw std::invalid_argument("conserved vector must have length 2N+3 with N >= 1");
  const int N = static_cast<int>((U.size() - 3) / 2);
  ConservedState s;
  s.h = U(0);
  s.hum = U(1);
  s.hvm = U(2);
  s.halpha.resize(N);
  s.hbeta.resize(N);
  for (int i = 0; i < N; ++i) {
    s.halpha[i] = U(3 + 2 * i);
    s.hbeta[i] = U(4 + 2 * i);
  }
  return s;
}

PrimitiveState PrimitiveState::rest(int N, double h, double g) {
  PrimitiveState V;
  V.h = h;
  V.g = g;
  V.alpha.assign(N, 0.0);
  V.beta.assign(N, 0.0);
  return V;
}

PrimitiveState to_primitive(const ConservedState& U, double g) {
  if (!(U.h > 0.0)) throw NonPositiveDepth("non-positive water height");
  PrimitiveState V;
  V.h = U.h;
  V.g = g;
  V.um = U.hum / U.h;
  V.vm = U.hvm / U.h;
  V.alpha.resize(U.halpha.size());
  V.beta.resize(U.hbeta.size());
  for (std::size_t i = 0; i < U.halpha.size(); ++i) {
    V.alpha[i] = U.halpha[i] / U.h;
    V.beta[i] = U.hbeta[i] / U.h;
  }
  return V;
}

ConservedState to_conserved(const PrimitiveState& V) {
  ConservedState U;
  U.h = V.h;
  U.hum = V.h * V.um;
  U.hvm = V.h * V.vm;
  U.halpha.resize(V.alpha.size());
  U.hbeta.resize(V.beta.size());
  for (std::size_t i = 0; i < V.alpha.size(); ++i) {
    U.halpha[i] = V.h * V.alpha[i];
    U.hbeta[i] = V.h * V.beta[i];
  }
  return U;
}

void primitive_from(const double* U, int N, double g, PrimitiveState& V) {
  const double h = U[0];
  if (!(h > 0.0)) throw NonPositiveDepth("non-positive water height");
  if (V.order() != N) {
    V.alpha.resize(N);
    V.beta.resize(N);
  }
  V.h = h;
  V.g = g;
  V.um = U[1] / h;
  V.vm = U[2] / h;
  for (int i = 0; i < N; ++i) {
    V.alpha[i] = U[3 + 2 * i] / h;
    V.beta[i] = U[4 + 2 * i] / h;
  }
}

Eigen::VectorXd conserved_vector(const PrimitiveState& V) {
  return to_conserved(V).to_vector();
}

void SourceParams::validate() const {
  double en = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
  if (std::abs(en - 1.0) > 1e-12) throw std::invalid_argument("gravity direction must be a unit vector");
  if (nu < 0.0) throw std::invalid_argument("viscosity must be non-negative");
  if (nu > 0.0 && !(lambda > 0.0)) throw std::invalid_argument("slip length must be positive");
  if (!(g > 0.0)) throw std::invalid_argument("gravity must be positive");
}

std::vector<int> reorder_permutation(int N) {
  std::vector<int> perm;
  perm.reserve(2 * N + 3);
  perm.push_back(0);
  perm.push_back(1);
  for (int i = 0; i < N; ++i) perm.push_back(3 + 2 * i);
  perm.push_back(2);
  for (int i = 0; i < N; ++i) perm.push_back(4 + 2 * i);
  return perm;
}

DirectionalMatrix reorder(const DirectionalMatrix& M, Ordering to) {
  if (M.ordering == to) return M;
  const int n = static_cast<int>(M.entries.rows());
  const int N = (n - 3) / 2;
  auto perm = reorder_permutation(N);
  DirectionalMatrix out;
  out.direction = M.direction;
  out.ordering = to;
  out.entries.resize(n, n);
  if (to == Ordering::BlockReordered) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.entries(i, j) = M.entries(perm[i], perm[j]);
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.entries(perm[i], perm[j]) = M.entries(i, j);
  }
  return out;
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::SWME: return "SWME";
    case Variant::HSWME: return "HSWME";
    case Variant::BetaHSWME: return "BetaHSWME";
    case Variant::GloballyHyperbolic: return "GloballyHyperbolic";
    case Variant::GeneralClosureExample: return "GeneralClosureExample";
    case Variant::Custom: return "Custom";
  }
  return "?";
}

Variant parse_variant(const std::string& name) {
  std::string s;
  for (char c : name)
    if (c != '-' && c != '_') s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "swme") return Variant::SWME;
  if (s == "hswme") return Variant::HSWME;
  if (s == "betahswme" || s == "beta") return Variant::BetaHSWME;
  if (s == "globallyhyperbolic" || s == "global") return Variant::GloballyHyperbolic;
  if (s == "generalclosureexample" || s == "example") return Variant::GeneralClosureExample;
  if (s == "custom") return Variant::Custom;
  throw std::invalid_argument("unknown model variant: " + name);
}

const std::vector<Variant>& builtin_variants() {
  static const std::vector<Variant> v = {Variant::SWME, Variant::HSWME, Variant::BetaHSWME,
                                         Variant::GloballyHyperbolic,
                                         Variant::GeneralClosureExample};
  return v;
}

ModelVariant ModelVariant::make_custom(BlockClosure closure) {
  ModelVariant m(Variant::Custom);
  m.custom = std::make_shared<const BlockClosure>(std::move(closure));
  return m;
}

}  // namespace swme
