#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>

namespace vcsp {

using Rational = mpq_class;

// Accepts "5", "-3", "p/q"; the result is canonical (gcd 1, positive denominator).
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& q);

// Ceiling of a rational as an integer rational.
Rational rational_ceil(const Rational& q);

// Q extended with +infinity (the value codomain of weighted relations).
// +inf absorbs addition and compares above every finite value. Multiplying
// +inf by zero or by a negative rational is an error; there is no -inf.
class ExtRational {
 public:
  ExtRational() : fin_(0) {}
  ExtRational(long v) : fin_(v) {}
  ExtRational(Rational v);  // canonicalises; zero denominator is an error

  static ExtRational infinity() {
    ExtRational r;
    r.inf_ = true;
    return r;
  }

  bool is_infinite() const { return inf_; }
  bool is_finite() const { return !inf_; }

  // Throws StructuralError when infinite.
  const Rational& finite() const;

  ExtRational& operator+=(const ExtRational& o);
  friend ExtRational operator+(ExtRational a, const ExtRational& b) {
    a += b;
    return a;
  }

  // Scaling by a positive rational; k <= 0 on an infinite value is an error.
  friend ExtRational operator*(const Rational& k, const ExtRational& v);

  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.fin_ == b.fin_;
  }
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b);

  // "inf" or the canonical rational rendering.
  std::string str() const;

 private:
  bool inf_ = false;
  Rational fin_;
};

std::ostream& operator<<(std::ostream& os, const ExtRational& v);

}  // namespace vcsp
