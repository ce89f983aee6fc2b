#pragma once

// Exact exponent algebra for the mixed-Lebesgue admissibility conditions
// and the Gagliardo-Nirenberg bookkeeping.

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fplab {

class InadmissibleExponent : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exact rational number with a positive, reduced denominator.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  [[nodiscard]] std::int64_t num() const { return num_; }
  [[nodiscard]] std::int64_t den() const { return den_; }
  [[nodiscard]] double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  [[nodiscard]] bool is_zero() const { return num_ == 0; }

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator-(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend Rational operator/(Rational a, Rational b);
  friend Rational operator-(Rational a) { return Rational(-a.num_, a.den_); }
  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  [[nodiscard]] std::string str() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// A Lebesgue exponent: a rational >= 1 or the symbol +inf.
class Exponent {
 public:
  Exponent(Rational value);  // NOLINT(google-explicit-constructor)
  Exponent(std::int64_t value) : Exponent(Rational(value)) {}  // NOLINT
  static Exponent infinity();
  /// Accepts "inf", "∞", integers and "a/b".
  static Exponent parse(std::string_view text);

  [[nodiscard]] bool is_infinite() const { return infinite_; }
  /// Finite value; throws for +inf.
  [[nodiscard]] Rational value() const;
  /// 1/p with 1/inf = 0.
  [[nodiscard]] Rational reciprocal() const;
  /// Hoelder conjugate p' with 1/p + 1/p' = 1 (1' = inf, inf' = 1).
  [[nodiscard]] Exponent conjugate() const;
  [[nodiscard]] double to_double() const;
  [[nodiscard]] std::string str() const;

  friend bool operator==(const Exponent& a, const Exponent& b);
  friend std::partial_ordering operator<=>(const Exponent& a, const Exponent& b);

 private:
  Exponent() = default;
  bool infinite_ = false;
  Rational value_{1};
};

std::ostream& operator<<(std::ostream& os, const Exponent& e);

struct ExponentPair {
  int n = 1;
  Exponent q = Exponent(1);
  Exponent r = Exponent(1);

  /// n/(2q) + 1/r, exactly.
  [[nodiscard]] Rational criticality() const;
};

struct Admissibility {
  bool admissible = false;
  std::string diagnostic;  // empty when admissible
};

struct GNExponents {
  Rational theta;
  Exponent q_conj = Exponent(1);
  Exponent r_derived = Exponent(1);
};

/// Integrability condition on div(b) in L^r_t L^q_x.
Admissibility check_divb_admissible(const ExponentPair& ep);

/// Solves 1/(2q') = 1/2 - theta/n and sets r = 1/(1-theta).
/// Throws InadmissibleExponent unless theta lies in (0,1).
GNExponents gn_from_q(int n, const Exponent& q);

/// n/(2Q) + 1/R <= 1/2 with R >= 2 and Q > n.
bool check_aronson_serrin_range(int n, const Exponent& Q, const Exponent& R);

/// Factor lambda^{2 - n/q - 2/r} picked up by ||div b||_{L^r_t L^q_x} under
/// b -> lambda b(lambda x, lambda^2 t). Exactly 1 on the critical line.
double scaling_weight(double lambda, const ExponentPair& ep);

}  // namespace fplab
