#include "swme/closure_builder.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace swme {

BlockLinearForm partner_block(const BlockLinearForm& a) {
  const auto& c = a.c;
  BlockLinearForm b;
  b.c = {-c[4], -c[5], -c[3], c[2], c[0], c[1]};
  return b;
}

double validate_block_invariance(const BlockLinearForm& a, const BlockLinearForm& b, int samples,
                                 unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double p = unit(rng), q = unit(rng), th = angle(rng);
    const double c = std::cos(th), sn = std::sin(th);
    Eigen::Matrix2d T;
    T << c, sn, -sn, c;
    const Eigen::Vector2d V = T * Eigen::Vector2d(p, q);
    const Eigen::Matrix2d lhs = T.transpose() * a.eval(V(0), V(1)) * T;
    const Eigen::Matrix2d rhs = c * a.eval(p, q) + sn * b.eval(p, q);
    worst = std::max(worst, (lhs - rhs).cwiseAbs().rowwise().sum().maxCoeff());
    const Eigen::Matrix2d odd = a.eval(-p, -q) + a.eval(p, q);
    worst = std::max(worst, odd.cwiseAbs().rowwise().sum().maxCoeff());
  }
  return worst;
}

bool ExactBlock::is_zero() const {
  for (const auto& x : c)
    if (x != 0) return false;
  return true;
}

ExactClosure::ExactClosure(int order)
    : N(order), first_col(order + 1), coupling(static_cast<std::size_t>(order + 1) * (order + 1)) {
  if (order < 1) throw std::invalid_argument("closure order must be >= 1");
}

BlockClosure ExactClosure::to_block_closure() const {
  BlockClosure out(N);
  out.name = name;
  for (int r = 0; r <= N; ++r) {
    const auto& f = first_col[r];
    out.first_col[r] = {static_cast<double>(f.k_uu), static_cast<double>(f.k_aa),
                        static_cast<double>(f.k_ua), static_cast<double>(f.k_g)};
  }
  for (std::size_t i = 0; i < coupling.size(); ++i)
    for (int k = 0; k < 6; ++k) out.coupling[i].c[k] = static_cast<double>(coupling[i].c[k]);
  return out;
}

RationalMatrix ExactClosure::a22_hat() const {
  RationalMatrix H(N + 1, std::vector<Rational>(N + 1));
  for (int r = 1; r <= N + 1; ++r)
    for (int c = 1; c <= N + 1; ++c) H[r - 1][c - 1] = at(r, c).c[2] - at(r, c).c[5];
  return H;
}

namespace {

void set_c1c3(ExactBlock& b, const Rational& c1, const Rational& c3) {
  b.c = {c1, 0, c3, 0, 0, 0};
}

Rational a11_coeff(const ExactBlock& b) { return b.c[0] + b.c[2]; }

// Gauss-Jordan over the rationals. Unknowns that end up without a pivot keep
// their default; an inconsistent row raises SingularMatch.
std::vector<Rational> solve_exact(RationalMatrix M, std::vector<Rational> rhs,
                                  const std::vector<Rational>& defaults) {
  const std::size_t rows = M.size(), cols = defaults.size();
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && M[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(M[p], M[r]);
    std::swap(rhs[p], rhs[r]);
    const Rational inv = 1 / M[r][c];
    for (auto& x : M[r]) x *= inv;
    rhs[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || M[i][c] == 0) continue;
      const Rational f = M[i][c];
      for (std::size_t k = 0; k < cols; ++k) M[i][k] -= f * M[r][k];
      rhs[i] -= f * rhs[r];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (rhs[i] != 0) throw SingularMatch("target polynomial is not reachable by the free last row");
  std::vector<Rational> x = defaults;
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  for (std::size_t i = 0; i < r; ++i) {
    Rational v = rhs[i];
    for (std::size_t k = 0; k < cols; ++k)
      if (!is_pivot[k]) v -= M[i][k] * defaults[k];
    x[pivot_col[i]] = v;
  }
  return x;
}

GravitySeries gs_times_xi(const GravitySeries& g) { return {g.a.times_xi(), g.b.times_xi()}; }
GravitySeries gs_scaled(const Rational& s, const GravitySeries& g) { return {s * g.a, s * g.b}; }
GravitySeries& gs_sub(GravitySeries& x, const GravitySeries& y) {
  x.a -= y.a;
  x.b -= y.b;
  return x;
}

}  // namespace

ExactClosure exact_hswme(int N) {
  ExactClosure cl(N);
  cl.name = "HSWME";
  cl.first_col[0] = {1, Rational(1, 3), 0, 1};
  cl.first_col[1] = {0, 0, 1, 0};
  if (N >= 2) cl.first_col[2] = {0, Rational(2, 3), 0, 0};
  set_c1c3(cl.at(1, 2), Rational(1, 3), Rational(1, 3));
  set_c1c3(cl.at(2, 1), 1, 1);
  for (int i = 1; i <= N - 1; ++i)
    set_c1c3(cl.at(i + 1, i + 2), Rational(1, 2 * i + 3), Rational(i + 1, 2 * i + 3));
  for (int i = 2; i <= N; ++i)
    set_c1c3(cl.at(i + 1, i), Rational(-1, 2 * i - 1), Rational(i, 2 * i - 1));
  return cl;
}

ExactClosure exact_globally_hyperbolic(int N) {
  ExactClosure cl = exact_hswme(N);
  cl.name = "GloballyHyperbolic";
  if (N < 2) return cl;
  set_c1c3(cl.at(1, 2), 0, Rational(2, 3));
  for (int i = 1; i <= N - 1; ++i) set_c1c3(cl.at(i + 1, i + 2), 0, Rational(i + 2, 2 * i + 3));
  for (int i = 2; i <= N; ++i) set_c1c3(cl.at(i + 1, i), 0, Rational(i - 1, 2 * i - 1));
  return cl;
}

ExactClosure exact_beta_hswme(int N) {
  if (N < 2) {
    ExactClosure cl = exact_hswme(N);
    cl.name = "BetaHSWME";
    return cl;
  }
  ExactClosure base = exact_hswme(N);
  ExactClosure cl = with_a11_last_row(base, match_last_row_a11(base, LegendreSeries::basis(N)));
  cl.name = "BetaHSWME";
  return cl;
}

ExactClosure exact_example(int N) {
  ExactClosure base = exact_hswme(N);
  if (N < 2) {
    base.name = "GeneralClosureExample";
    return base;
  }
  ExactClosure cl =
      with_a22_last_row(base, match_last_row(base.a22_hat(), LegendreSeries::derivative_of_basis(N + 2)));
  cl.name = "GeneralClosureExample";
  return cl;
}

ExactClosure exact_closure(Variant v, int N) {
  if (N == 1 && v != Variant::SWME && v != Variant::Custom) {
    ExactClosure cl = exact_hswme(1);
    cl.name = variant_name(v);
    return cl;
  }
  switch (v) {
    case Variant::HSWME: return exact_hswme(N);
    case Variant::BetaHSWME: return exact_beta_hswme(N);
    case Variant::GloballyHyperbolic: return exact_globally_hyperbolic(N);
    case Variant::GeneralClosureExample: return exact_example(N);
    default: break;
  }
  throw std::invalid_argument("variant " + variant_name(v) + " has no block closure");
}

std::vector<LegendreSeries> associated_series(const RationalMatrix& H) {
  const int n = static_cast<int>(H.size());
  std::vector<LegendreSeries> q{LegendreSeries::basis(0)};
  for (int i = 1; i < n; ++i) {
    const Rational& sup = H[i - 1][i];
    if (sup == 0) throw SingularMatch("Hessenberg block is reduced; superdiagonal entry vanishes");
    LegendreSeries next = q[i - 1].times_xi();
    for (int j = 1; j <= i; ++j) next -= H[i - 1][j - 1] * q[j - 1];
    q.push_back((1 / sup) * next);
  }
  return q;
}

LegendreSeries final_series(const RationalMatrix& H) {
  const int n = static_cast<int>(H.size());
  auto q = associated_series(H);
  LegendreSeries out = q[n - 1].times_xi();
  for (int j = 1; j <= n; ++j) out -= H[n - 1][j - 1] * q[j - 1];
  return out;
}

LastRowMatch match_last_row(const RationalMatrix& H, const LegendreSeries& target) {
  const int n = static_cast<int>(H.size());
  if (target.degree() != n)
    throw DegreeMismatch("target degree " + std::to_string(target.degree()) +
                         " does not match block size " + std::to_string(n));
  auto q = associated_series(H);
  const LegendreSeries rhs_poly = q[n - 1].times_xi();
  // sum_j r_j q_{j-1} + lambda target = xi q_{n-1}, coefficientwise
  RationalMatrix M(n + 1, std::vector<Rational>(n + 1));
  std::vector<Rational> rhs(n + 1), defaults(n + 1);
  for (int k = 0; k <= n; ++k) {
    for (int j = 1; j <= n; ++j) M[k][j - 1] = q[j - 1].coeff(k);
    M[k][n] = target.coeff(k);
    rhs[k] = rhs_poly.coeff(k);
  }
  for (int j = 1; j <= n; ++j) defaults[j - 1] = H[n - 1][j - 1];
  defaults[n] = 1;
  auto x = solve_exact(std::move(M), std::move(rhs), defaults);
  LastRowMatch m;
  m.entries.assign(x.begin(), x.begin() + n);
  m.scale = x[n];
  if (m.scale == 0) throw SingularMatch("matched polynomial vanishes");
  return m;
}

std::vector<GravitySeries> gravity_series(const ExactClosure& cl) {
  const int N = cl.N;
  if (N < 2) throw DegreeMismatch("alpha-block matching needs N >= 2");
  const auto& f0 = cl.first_col[0];
  const auto& f1 = cl.first_col[1];
  const Rational w = a11_coeff(cl.at(2, 1));
  if (f0.k_uu != 1 || f0.k_g != 1 || f0.k_ua != 0 || f1.k_uu != 0 || f1.k_g != 0 ||
      2 * f1.k_ua != w)
    throw SingularMatch("leading rows of the alpha block are not in normal form");
  std::vector<GravitySeries> Q(N + 2);
  const Rational s2 = a11_coeff(cl.at(1, 2));
  Q[2] = {LegendreSeries::basis(0), LegendreSeries({1 + f0.k_aa})};
  Q[2] = gs_scaled(1 / s2, Q[2]);
  for (int k = 3; k <= N + 1; ++k) {
    const int b = k - 1;  // block row
    GravitySeries next = gs_times_xi(Q[k - 1]);
    if (k == 3) {
      // (a_31 + a_32 x) / alpha_1^2 = w xi - k_aa
      next.b -= LegendreSeries({-f1.k_aa, w});
    } else {
      const auto& f = cl.first_col[b - 1];
      if (f.k_uu != 0 || f.k_ua != 0 || f.k_g != 0 || a11_coeff(cl.at(b, 1)) != 0)
        throw SingularMatch("moment row couples to the velocity beyond alpha_1^2");
      next.b += LegendreSeries({f.k_aa});
    }
    for (int j = 3; j <= k; ++j) gs_sub(next, gs_scaled(a11_coeff(cl.at(b, j - 1)), Q[j - 1]));
    const Rational sup = a11_coeff(cl.at(b, b + 1));
    if (sup == 0) throw SingularMatch("alpha block is reduced");
    Q[k] = gs_scaled(1 / sup, next);
  }
  return Q;
}

LastRowMatch match_last_row_a11(const ExactClosure& cl, const LegendreSeries& factor) {
  const int N = cl.N;
  if (factor.degree() != N)
    throw DegreeMismatch("alpha-block factor must have degree N = " + std::to_string(N));
  auto Q = gravity_series(cl);
  const GravitySeries lhs = gs_times_xi(Q[N + 1]);
  // unknowns: kappa, r_3..r_{N+2}, lambda
  //   xi Q_{N+1} + kappa - sum r_j Q_{j-1} = lambda P factor
  const int nu = N + 2;
  const int D = N + 2;  // coefficient slots per component
  RationalMatrix M(2 * D, std::vector<Rational>(nu));
  std::vector<Rational> rhs(2 * D), defaults(nu);
  for (int k = 0; k < D; ++k) {
    M[D + k][0] = (k == 0) ? -1 : 0;
    for (int j = 3; j <= N + 2; ++j) {
      M[k][j - 2] = Q[j - 1].a.coeff(k);
      M[D + k][j - 2] = Q[j - 1].b.coeff(k);
    }
    M[k][nu - 1] = factor.coeff(k);
    rhs[k] = lhs.a.coeff(k);
    rhs[D + k] = lhs.b.coeff(k);
  }
  defaults[0] = cl.first_col[N].k_aa;
  for (int j = 3; j <= N + 2; ++j) defaults[j - 2] = a11_coeff(cl.at(N + 1, j - 1));
  defaults[nu - 1] = 1;
  auto x = solve_exact(std::move(M), std::move(rhs), defaults);
  LastRowMatch m;
  m.kappa = x[0];
  m.entries.assign(N + 2, Rational(0));
  m.entries[1] = a11_coeff(cl.at(N + 1, 1));
  for (int j = 3; j <= N + 2; ++j) m.entries[j - 1] = x[j - 2];
  m.scale = x[nu - 1];
  if (m.scale == 0) throw SingularMatch("matched polynomial vanishes");
  return m;
}

ExactClosure with_a22_last_row(const ExactClosure& base, const LastRowMatch& m) {
  ExactClosure cl = base;
  const int N = cl.N;
  if (static_cast<int>(m.entries.size()) != N + 1) throw DegreeMismatch("beta-block row size");
  for (int j = 1; j <= N + 1; ++j) {
    ExactBlock& b = cl.at(N + 1, j);
    if (b.c[1] != 0 || b.c[3] != 0 || b.c[4] != 0 || b.c[5] != 0)
      throw SingularMatch("last-row block is outside the (c1, c3) family");
    const Rational keep = a11_coeff(b);
    set_c1c3(b, keep - m.entries[j - 1], m.entries[j - 1]);
  }
  return cl;
}

ExactClosure with_a11_last_row(const ExactClosure& base, const LastRowMatch& m) {
  ExactClosure cl = base;
  const int N = cl.N;
  if (static_cast<int>(m.entries.size()) != N + 2) throw DegreeMismatch("alpha-block row size");
  cl.first_col[N].k_aa = m.kappa;
  for (int j = 3; j <= N + 2; ++j) {
    ExactBlock& b = cl.at(N + 1, j - 1);
    if (b.c[1] != 0 || b.c[3] != 0 || b.c[4] != 0 || b.c[5] != 0)
      throw SingularMatch("last-row block is outside the (c1, c3) family");
    const Rational keep = b.c[2];
    set_c1c3(b, m.entries[j - 1] - keep, keep);
  }
  return cl;
}

std::string EntryForm::str() const {
  std::ostringstream os;
  bool first = true;
  auto term = [&](const Rational& c, const char* sym) {
    if (c == 0) return;
    Rational mag = c < 0 ? Rational(-c) : c;
    os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
    if (*sym == 0)
      os << format_rational(mag);
    else if (mag == 1)
      os << sym;
    else
      os << format_rational(mag) << "*" << sym;
    first = false;
  };
  term(u, "u_m");
  term(alpha, "alpha_1");
  term(u_sq, "u_m^2");
  term(alpha_sq, "alpha_1^2");
  term(u_alpha, "u_m*alpha_1");
  term(gh, "gh");
  if (first) os << "0";
  return os.str();
}

namespace {

std::vector<CornerCertification> certify_corner(const BlockClosure& closure) {
  Model model(ModelVariant::make_custom(closure), closure.N);
  std::vector<CornerCertification> out;
  for (double b1 : {0.0, 0.5}) {
    PrimitiveState V = PrimitiveState::rest(closure.N);
    V.beta[0] = b1;
    Eigen::MatrixXd A;
    model.matrix_x(V, A);
    SpectralReport r = spectral_report(A, 0.0);
    CornerCertification c;
    c.beta1 = b1;
    c.classification = r.classification;
    c.min_gap = r.min_gap;
    for (auto& cl : r.clusters) c.eigen_defect += cl.algebraic - cl.geometric;
    out.push_back(c);
  }
  return out;
}

}  // namespace

ClosureSpec describe_closure(const ExactClosure& cl) {
  const int N = cl.N;
  ClosureSpec s;
  s.N = N;
  s.name = cl.name;
  const auto& f = cl.first_col[N];
  EntryForm c1;
  c1.u_sq = -f.k_uu;
  c1.alpha_sq = -f.k_aa;
  c1.u_alpha = -2 * f.k_ua;
  c1.gh = f.k_g;
  s.last_row_A11.push_back(c1);
  for (int j = 1; j <= N + 1; ++j) {
    EntryForm e;
    e.alpha = a11_coeff(cl.at(N + 1, j));
    if (j == N + 1) e.u = 1;
    s.last_row_A11.push_back(e);
  }
  for (int j = 1; j <= N + 1; ++j) {
    EntryForm e;
    e.alpha = cl.at(N + 1, j).c[2] - cl.at(N + 1, j).c[5];
    if (j == N + 1) e.u = 1;
    s.last_row_A22.push_back(e);
  }
  return s;
}

ClosureTarget parse_closure_target(const std::string& s, int N) {
  ClosureTarget t;
  t.label = s;
  auto coeff_list = [](const std::string& body) {
    std::vector<Rational> c;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) c.push_back(parse_rational(item));
    return LegendreSeries(std::move(c));
  };
  if (s == "lobatto") {
    t.poly = LegendreSeries::derivative_of_basis(N + 2);
  } else if (s == "default") {
    t.poly = final_series(exact_hswme(N).a22_hat());
  } else if (s == "legendre") {
    t.block = ClosureTarget::Block::A11;
    t.poly = LegendreSeries::basis(N);
  } else if (s.rfind("shift:", 0) == 0) {
    t.poly = LegendreSeries::basis(N).times_linear(parse_rational(s.substr(6)));
  } else if (s.rfind("a22:", 0) == 0) {
    t.poly = coeff_list(s.substr(4));
  } else if (s.rfind("a11:", 0) == 0) {
    t.block = ClosureTarget::Block::A11;
    t.poly = coeff_list(s.substr(4));
  } else {
    throw std::invalid_argument("unknown closure target '" + s + "'");
  }
  return t;
}

BuiltClosure build_closure(int N, const std::vector<ClosureTarget>& targets,
                           const std::string& name) {
  ExactClosure cl = exact_hswme(N);
  std::optional<LegendreSeries> t22, t11;
  for (const auto& t : targets) {
    if (t.block == ClosureTarget::Block::A22) {
      cl = with_a22_last_row(cl, match_last_row(cl.a22_hat(), t.poly));
      t22 = t.poly;
    } else {
      cl = with_a11_last_row(cl, match_last_row_a11(cl, t.poly));
      t11 = t.poly;
    }
  }
  cl.name = name;
  BuiltClosure out{describe_closure(cl), cl, cl.to_block_closure()};
  out.spec.target_A22 = t22;
  out.spec.target_A11_factor = t11;
  out.spec.certification = certify_corner(out.closure);
  return out;
}

BuiltClosure build_general_closure(int N) {
  if (N == 1) return build_closure(1, {}, "GeneralClosureExample");
  return build_closure(N, {parse_closure_target("lobatto", N)}, "GeneralClosureExample");
}

std::string ClosureSpec::serialize() const {
  std::ostringstream os;
  os << "closure " << name << " N=" << N << "\n";
  if (target_A22) os << "target_A22 " << target_A22->str() << "\n";
  if (target_A11_factor) os << "target_A11_factor " << target_A11_factor->str() << "\n";
  os << "last_row_A11";
  for (const auto& e : last_row_A11) os << " | " << e.str();
  os << "\nlast_row_A22";
  for (const auto& e : last_row_A22) os << " | " << e.str();
  os << "\n";
  for (const auto& c : certification)
    os << "corner alpha_1=0 beta_1=" << c.beta1 << " class=" << hyperbolicity_name(c.classification)
       << " defect=" << c.eigen_defect << "\n";
  return os.str();
}

}  // namespace swme
