#include "fplab/exponents.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace fplab {

namespace {

using Wide = __int128;

Rational make_reduced(Wide num, Wide den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide a = num < 0 ? -num : num;
  Wide b = den;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  constexpr Wide kMax = std::numeric_limits<std::int64_t>::max();
  if (num > kMax || -num > kMax || den > kMax) throw std::overflow_error("Rational: overflow");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

Rational operator+(Rational a, Rational b) {
  return make_reduced(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}
Rational operator-(Rational a, Rational b) { return a + (-b); }
Rational operator*(Rational a, Rational b) {
  return make_reduced(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}
Rational operator/(Rational a, Rational b) {
  if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
  return make_reduced(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const Wide lhs = Wide(a.num_) * b.den_;
  const Wide rhs = Wide(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Exponent::Exponent(Rational value) : value_(value) {
  if (value < Rational(1)) throw InadmissibleExponent("exponent must be >= 1, got " + value.str());
}

Exponent Exponent::infinity() {
  Exponent e;
  e.infinite_ = true;
  return e;
}

Exponent Exponent::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text == "inf" || text == "Inf" || text == "infinity" || text == "∞") return infinity();
  const auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) {
      std::size_t used = 0;
      const std::string s(text);
      const long long v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return Exponent(Rational(v));
    }
    const std::string a(text.substr(0, slash));
    const std::string b(text.substr(slash + 1));
    std::size_t ua = 0;
    std::size_t ub = 0;
    const long long num = std::stoll(a, &ua);
    const long long den = std::stoll(b, &ub);
    if (ua != a.size() || ub != b.size()) throw std::invalid_argument(std::string(text));
    return Exponent(Rational(num, den));
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const InadmissibleExponent*>(&e) != nullptr) throw;
    throw std::invalid_argument("cannot parse exponent '" + std::string(text) + "'");
  }
}

Rational Exponent::value() const {
  if (infinite_) throw std::domain_error("Exponent::value on +inf");
  return value_;
}

Rational Exponent::reciprocal() const { return infinite_ ? Rational(0) : Rational(1) / value_; }

Exponent Exponent::conjugate() const {
  if (infinite_) return Exponent(1);
  if (value_ == Rational(1)) return infinity();
  return Exponent(value_ / (value_ - Rational(1)));
}

double Exponent::to_double() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_.to_double();
}

std::string Exponent::str() const { return infinite_ ? "inf" : value_.str(); }

bool operator==(const Exponent& a, const Exponent& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::partial_ordering operator<=>(const Exponent& a, const Exponent& b) {
  if (a.infinite_ && b.infinite_) return std::partial_ordering::equivalent;
  if (a.infinite_) return std::partial_ordering::greater;
  if (b.infinite_) return std::partial_ordering::less;
  return a.value_ <=> b.value_;
}

std::ostream& operator<<(std::ostream& os, const Exponent& e) { return os << e.str(); }

Rational ExponentPair::criticality() const {
  return Rational(n) * q.reciprocal() / Rational(2) + r.reciprocal();
}

Admissibility check_divb_admissible(const ExponentPair& ep) {
  if (ep.n < 1) return {false, "n must be >= 1"};
  const Rational crit = ep.criticality();
  if (crit > Rational(1)) return {false, "n/(2q) + 1/r = " + crit.str() + " exceeds 1"};
  if (ep.n >= 2) {
    if (ep.r.is_infinite()) return {false, "r must be finite for n >= 2"};
    // q in (n/2, inf]
    if (!ep.q.is_infinite() && ep.q.value() <= Rational(ep.n, 2)) {
      return {false, "q = " + ep.q.str() + " must exceed n/2 = " + Rational(ep.n, 2).str()};
    }
  } else {
    if (ep.r > Exponent(2)) return {false, "r = " + ep.r.str() + " outside [1,2] for n = 1"};
  }
  return {true, {}};
}

GNExponents gn_from_q(int n, const Exponent& q) {
  if (n < 1) throw InadmissibleExponent("n must be >= 1");
  const Exponent q_conj = q.conjugate();
  // 1/(2q') = 1/2 - theta/n  =>  theta = n (1/2 - 1/(2q')) = n/(2q)
  const Rational theta = Rational(n) * (Rational(1, 2) - q_conj.reciprocal() / Rational(2));
  if (theta <= Rational(0) || theta >= Rational(1)) {
    throw InadmissibleExponent("theta = " + theta.str() + " outside (0,1) for n = " + std::to_string(n) +
                               ", q = " + q.str());
  }
  const Exponent r = Exponent(Rational(1) / (Rational(1) - theta));
  return {theta, q_conj, r};
}

bool check_aronson_serrin_range(int n, const Exponent& Q, const Exponent& R) {
  if (n < 1) return false;
  if (R < Exponent(2)) return false;
  if (!(Q > Exponent(n))) return false;
  return Rational(n) * Q.reciprocal() / Rational(2) + R.reciprocal() <= Rational(1, 2);
}

double scaling_weight(double lambda, const ExponentPair& ep) {
  if (!(lambda > 0.0)) throw std::domain_error("scaling_weight: lambda must be positive");
  // 2 - n/q - 2/r = 2 (1 - (n/(2q) + 1/r))
  const Rational power = Rational(2) * (Rational(1) - ep.criticality());
  if (power.is_zero()) return 1.0;
  return std::pow(lambda, power.to_double());
}

}  // namespace fplab
