#include "swme/rational_poly.hpp"

#include <sstream>
#include <stdexcept>

#include "swme/legendre.hpp"

namespace swme {

std::string format_rational(const Rational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

Rational parse_rational(const std::string& s) {
  using boost::multiprecision::cpp_int;
  auto slash = s.find('/');
  try {
    if (s.empty()) throw std::invalid_argument("empty");
    if (slash == std::string::npos) return Rational(cpp_int(s));
    cpp_int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(cpp_int(s.substr(0, slash)), den);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational number: '" + s + "'");
  }
}

LegendreSeries::LegendreSeries(std::vector<Rational> c) : c_(std::move(c)) { trim(); }

void LegendreSeries::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

LegendreSeries LegendreSeries::basis(int n) {
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  return LegendreSeries(std::move(c));
}

LegendreSeries LegendreSeries::derivative_of_basis(int m) {
  // P'_m = sum (2k+1) P_k over k = m-1, m-3, ...
  std::vector<Rational> c(std::max(m, 0));
  for (int k = m - 1; k >= 0; k -= 2) c[k] = 2 * k + 1;
  return LegendreSeries(std::move(c));
}

Rational LegendreSeries::coeff(int k) const {
  return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : Rational(0);
}

LegendreSeries LegendreSeries::times_xi() const {
  // xi P_n = ((n+1) P_{n+1} + n P_{n-1}) / (2n+1)
  std::vector<Rational> out(c_.size() + 1);
  for (std::size_t n = 0; n < c_.size(); ++n) {
    if (c_[n] == 0) continue;
    const Rational w = c_[n] / Rational(2 * n + 1);
    out[n + 1] += w * Rational(n + 1);
    if (n > 0) out[n - 1] += w * Rational(n);
  }
  return LegendreSeries(std::move(out));
}

LegendreSeries LegendreSeries::times_linear(const Rational& c) const {
  return times_xi() - c * (*this);
}

double LegendreSeries::eval(double xi) const {
  double s = 0.0;
  for (std::size_t k = 0; k < c_.size(); ++k)
    if (c_[k] != 0) s += static_cast<double>(c_[k]) * legendre(static_cast<int>(k), xi);
  return s;
}

std::string LegendreSeries::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    if (!first) os << " + ";
    os << format_rational(c_[k]) << "*P" << k;
    first = false;
  }
  return os.str();
}

LegendreSeries& LegendreSeries::operator+=(const LegendreSeries& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

LegendreSeries& LegendreSeries::operator-=(const LegendreSeries& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

LegendreSeries& LegendreSeries::operator*=(const Rational& s) {
  for (auto& x : c_) x *= s;
  trim();
  return *this;
}

}  // namespace swme
