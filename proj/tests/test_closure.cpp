#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "swme/closure_builder.hpp"
#include "swme/commands.hpp"
#include "swme/legendre.hpp"

using namespace swme;

namespace {

Rational R(const char* s) { return parse_rational(s); }

std::vector<Rational> alpha_coeffs(const std::vector<EntryForm>& row, std::size_t from) {
  std::vector<Rational> out;
  for (std::size_t j = from; j < row.size(); ++j) out.push_back(row[j].alpha);
  return out;
}

}  // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-4/6") == Rational(-2, 3));
  CHECK(format_rational(Rational(10, 9)) == "10/9");
  CHECK(format_rational(Rational(-7)) == "-7");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("Legendre series arithmetic") {
  // xi P_n = ((n+1) P_{n+1} + n P_{n-1}) / (2n+1)
  LegendreSeries p3 = LegendreSeries::basis(3).times_xi();
  CHECK(p3.coeff(4) == Rational(4, 7));
  CHECK(p3.coeff(2) == Rational(3, 7));
  CHECK(p3.degree() == 4);
  // P'_4 = 7 P_3 + 3 P_1
  LegendreSeries d4 = LegendreSeries::derivative_of_basis(4);
  CHECK(d4 == LegendreSeries({0, 3, 0, 7}));
  for (double xi : {-0.8, 0.25, 0.6}) {
    CHECK(d4.eval(xi) == doctest::Approx(legendre_deriv(4, xi)).epsilon(1e-13));
    CHECK(LegendreSeries::basis(2).times_linear(Rational(1, 2)).eval(xi) ==
          doctest::Approx((xi - 0.5) * legendre(2, xi)).epsilon(1e-13));
  }
  LegendreSeries z = d4 - d4;
  CHECK(z.is_zero());
  CHECK(z.degree() == -1);
  CHECK((Rational(2) * d4).leading() == 14);
}

// Last rows frozen from tests/oracles/oracle_values.txt (sympy char-poly match).
TEST_CASE("beta closure last row of the alpha block") {
  struct Row {
    int N;
    const char* kappa;
    std::vector<const char*> r;
  };
  const std::vector<Row> rows{{2, "10/9", {"5/9", "0"}},
                              {3, "0", {"0", "7/10", "0"}},
                              {4, "0", {"0", "0", "27/35", "0"}},
                              {5, "0", {"0", "0", "0", "22/27", "0"}}};
  for (const auto& row : rows) {
    CAPTURE(row.N);
    ClosureSpec s = describe_closure(exact_beta_hswme(row.N));
    REQUIRE(s.last_row_A11.size() == static_cast<std::size_t>(row.N + 2));
    CHECK(s.last_row_A11[0].alpha_sq == -R(row.kappa));
    CHECK(s.last_row_A11[1].alpha == 0);
    for (int j = 1; j <= row.N; ++j) CHECK(s.last_row_A11[j + 1].alpha == R(row.r[j - 1]));
    CHECK(s.last_row_A11.back().u == 1);
    // the beta block stays as in HSWME
    CHECK(s.last_row_A22 == describe_closure(exact_hswme(row.N)).last_row_A22);
  }
  // closed form for N >= 3
  for (int N = 3; N <= 12; ++N) {
    ClosureSpec s = describe_closure(exact_beta_hswme(N));
    CHECK(s.last_row_A11[0].alpha_sq == 0);
    CHECK(s.last_row_A11[N].alpha == Rational((N - 1) * (2 * N + 1), (N + 1) * (2 * N - 1)));
  }
}

TEST_CASE("example closure last row of the beta block") {
  const std::vector<std::vector<const char*>> rows{{"3/5", "0"},
                                                   {"0", "5/21", "0"},
                                                   {"-4/9", "0", "7/45", "0"},
                                                   {"0", "-5/11", "0", "9/77", "0"},
                                                   {"-6/13", "0", "-6/13", "0", "11/117", "0"}};
  for (int N = 2; N <= 5; ++N) {
    CAPTURE(N);
    ClosureSpec s = describe_closure(exact_example(N));
    const auto got = alpha_coeffs(s.last_row_A22, 0);
    REQUIRE(got.size() == rows[N - 1].size());
    for (std::size_t j = 0; j < got.size(); ++j) CHECK(got[j] == R(rows[N - 1][j]));
    CHECK(s.last_row_A22.back().u == 1);
  }
  // at N = 1 the matched row exists but the variant itself stays HSWME
  BuiltClosure one = build_closure(1, {parse_closure_target("lobatto", 1)});
  const auto got1 = alpha_coeffs(one.spec.last_row_A22, 0);
  CHECK(got1[0] == Rational(3, 5));
  CHECK(got1[1] == 0);
  CHECK(describe_closure(exact_example(1)).last_row_A22 == describe_closure(exact_hswme(1)).last_row_A22);
}

TEST_CASE("matched rows reproduce the target polynomial") {
  for (int N = 1; N <= 10; ++N) {
    const LegendreSeries target = LegendreSeries::derivative_of_basis(N + 2);
    LastRowMatch m = match_last_row(exact_hswme(N).a22_hat(), target);
    ExactClosure cl = with_a22_last_row(exact_hswme(N), m);
    LegendreSeries fin = final_series(cl.a22_hat());
    CHECK(fin == m.scale * target);
    CHECK(m.scale != 0);
  }
}

TEST_CASE("shift family gives an extra eigenvalue at u + c alpha") {
  const int N = 3;
  BuiltClosure b = build_closure(N, {parse_closure_target("shift:1/2", N)});
  PrimitiveState V = PrimitiveState::rest(N, 1.0, 1.0);
  V.um = 0.2;
  V.alpha[0] = 0.6;
  Eigen::MatrixXd A;
  Model(ModelVariant::make_custom(b.closure), N).matrix_x(V, A);
  NumericSpectrum ns = numeric_eigen(A);
  bool found = false;
  for (const auto& e : ns.eigenvalues) found |= std::abs(e.real() - (0.2 + 0.5 * 0.6)) < 1e-9;
  CHECK(found);
  for (double r : gauss_legendre_nodes(N)) {
    bool hit = false;
    for (const auto& e : ns.eigenvalues) hit |= std::abs(e.real() - (0.2 + 0.6 * r)) < 1e-9;
    CHECK(hit);
  }
}

TEST_CASE("target parsing and error paths") {
  CHECK(parse_closure_target("legendre", 4).block == ClosureTarget::Block::A11);
  CHECK(parse_closure_target("a22:0,1", 1).poly == LegendreSeries({0, 1}));
  CHECK(parse_closure_target("default", 3).poly.degree() == 4);
  CHECK_THROWS_AS(parse_closure_target("nonsense", 3), std::invalid_argument);
  CHECK_THROWS_AS(parse_closure_target("a22:1,x", 3), std::invalid_argument);
  // degree must be N + 1 for the beta block
  CHECK_THROWS_AS(build_closure(3, {parse_closure_target("a22:0,1", 3)}), DegreeMismatch);
  CHECK_THROWS_AS(build_closure(1, {parse_closure_target("legendre", 1)}), DegreeMismatch);
  CHECK_THROWS_AS(build_closure(3, {parse_closure_target("a11:1,0", 3)}), DegreeMismatch);
}

TEST_CASE("general closure at N = 1 is HSWME") {
  BuiltClosure g = build_general_closure(1);
  CHECK(g.spec.last_row_A22 == describe_closure(exact_hswme(1)).last_row_A22);
  CHECK(g.spec.last_row_A11 == describe_closure(exact_hswme(1)).last_row_A11);
  BuiltClosure g4 = build_general_closure(4);
  CHECK(g4.spec.last_row_A22 == describe_closure(exact_example(4)).last_row_A22);
  // only the globally hyperbolic closure repairs the beta_1 corner
  for (const auto& c : g4.spec.certification)
    CHECK(c.classification == (c.beta1 == 0.0 ? Hyperbolicity::Hyperbolic : Hyperbolicity::WeaklyHyperbolic));
  const std::string txt = g4.spec.serialize();
  CHECK(txt.find("closure GeneralClosureExample N=4") != std::string::npos);
}

TEST_CASE("partner blocks and invariance") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    BlockLinearForm a;
    for (double& c : a.c) c = ud(rng);
    BlockLinearForm b = partner_block(a);
    BlockLinearForm bb = partner_block(b);
    for (int k = 0; k < 6; ++k) CHECK(bb.c[k] == doctest::Approx(-a.c[k]));
    CHECK(validate_block_invariance(a, b, 64) <= 1e-12);
    BlockLinearForm wrong = b;
    wrong.c[0] += 0.3;
    CHECK(validate_block_invariance(a, wrong, 64) >= 1e-3);
  }
  // partner evaluation agrees with the explicit y-block formula
  BlockLinearForm a;
  a.c = {0.1, -0.4, 0.7, 0.2, -0.3, 0.5};
  for (double p : {-0.5, 0.9})
    for (double q : {0.3, -1.2}) CHECK(partner_block(a).eval(p, q).isApprox(a.eval_partner(p, q), 1e-14));
}

TEST_CASE("assembled block closures match the built-in models") {
  std::mt19937_64 rng(21);
  for (Variant v : {Variant::HSWME, Variant::BetaHSWME, Variant::GloballyHyperbolic, Variant::GeneralClosureExample})
    for (int N : {2, 4}) {
      PrimitiveState V = random_state(N, rng);
      Eigen::MatrixXd A, B, A2, B2;
      Model(v, N).matrices(V, A, B);
      exact_closure(v, N).to_block_closure().assemble(V, A2, B2);
      CHECK((A - A2).cwiseAbs().maxCoeff() <= 1e-13);
      CHECK((B - B2).cwiseAbs().maxCoeff() <= 1e-13);
    }
}
