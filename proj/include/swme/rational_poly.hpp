#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

namespace swme {

using Rational = boost::multiprecision::cpp_rational;

std::string format_rational(const Rational& r);
// Accepts "p", "p/q" and "-p/q"; throws std::invalid_argument.
Rational parse_rational(const std::string& s);

// sum_k c_k P_k(xi) with exact coefficients.
class LegendreSeries {
 public:
  LegendreSeries() = default;
  explicit LegendreSeries(std::vector<Rational> c);

  static LegendreSeries basis(int n);               // P_n
  static LegendreSeries derivative_of_basis(int m);  // P'_m

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  Rational coeff(int k) const;
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  LegendreSeries times_xi() const;
  LegendreSeries times_linear(const Rational& c) const;  // (xi - c) * this
  double eval(double xi) const;
  std::string str() const;

  LegendreSeries& operator+=(const LegendreSeries& o);
  LegendreSeries& operator-=(const LegendreSeries& o);
  LegendreSeries& operator*=(const Rational& s);
  friend LegendreSeries operator+(LegendreSeries a, const LegendreSeries& b) { return a += b; }
  friend LegendreSeries operator-(LegendreSeries a, const LegendreSeries& b) { return a -= b; }
  friend LegendreSeries operator*(const Rational& s, LegendreSeries a) { return a *= s; }
  friend bool operator==(const LegendreSeries& a, const LegendreSeries& b) { return a.c_ == b.c_; }

 private:
  void trim();
  std::vector<Rational> c_;
};

// P(xi) a(xi) + b(xi) with the normalized gravity factor
// P = ((x - u_m)^2 - gh - alpha_1^2) / alpha_1^2 treated as an independent symbol.
struct GravitySeries {
  LegendreSeries a;
  LegendreSeries b;
};

}  // namespace swme
