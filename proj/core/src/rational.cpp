#include "vcsp/rational.hpp"

#include <cctype>
#include <ostream>

#include "vcsp/errors.hpp"

namespace vcsp {

Rational parse_rational(const std::string& text) {
  // Strict grammar: '-'? digits ('/' digits)?
  auto bad = [&]() -> Rational {
    throw StructuralError("malformed rational '" + text + "'");
  };
  if (text.empty()) return bad();
  std::size_t i = 0;
  if (text[i] == '-') ++i;
  std::size_t digits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    ++i;
    ++digits;
  }
  if (digits == 0) return bad();
  if (i < text.size()) {
    if (text[i] != '/') return bad();
    ++i;
    std::size_t den_digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      ++i;
      ++den_digits;
    }
    if (den_digits == 0 || i != text.size()) return bad();
  }
  Rational q;
  if (q.set_str(text, 10) != 0) return bad();
  if (q.get_den() == 0) throw StructuralError("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

Rational rational_ceil(const Rational& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return Rational(r);
}

ExtRational::ExtRational(Rational v) : fin_(std::move(v)) {
  if (fin_.get_den() == 0) throw StructuralError("zero denominator");
  fin_.canonicalize();
}

const Rational& ExtRational::finite() const {
  if (inf_) throw StructuralError("expected a finite value, got +inf");
  return fin_;
}

ExtRational& ExtRational::operator+=(const ExtRational& o) {
  if (o.inf_) {
    inf_ = true;
    fin_ = 0;
  } else if (!inf_) {
    fin_ += o.fin_;
  }
  return *this;
}

ExtRational operator*(const Rational& k, const ExtRational& v) {
  if (v.inf_) {
    if (k <= 0) throw StructuralError("cannot scale +inf by a non-positive rational");
    return ExtRational::infinity();
  }
  return ExtRational(Rational(k * v.fin_));
}

std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
  if (a.inf_ && b.inf_) return std::strong_ordering::equal;
  if (a.inf_) return std::strong_ordering::greater;
  if (b.inf_) return std::strong_ordering::less;
  int c = cmp(a.fin_, b.fin_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string ExtRational::str() const { return inf_ ? "inf" : rational_to_string(fin_); }

std::ostream& operator<<(std::ostream& os, const ExtRational& v) { return os << v.str(); }

}  // namespace vcsp
