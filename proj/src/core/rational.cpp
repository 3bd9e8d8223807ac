#include "knaster/rational.hpp"

#include <cctype>
#include <ostream>

#include "knaster/error.hpp"

namespace knaster {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::NotHomeomorphism: return "not-homeomorphism";
    case ErrorCode::NotOpen: return "not-open";
    case ErrorCode::DegreeMismatch: return "degree-mismatch";
    case ErrorCode::SignatureMismatch: return "signature-mismatch";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::NoWitness: return "no-witness";
    case ErrorCode::IterationCap: return "iteration-cap";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::VerificationFailed: return "verification-failed";
  }
  return "unknown";
}

Rational::Rational(long num, long den) {
  if (den == 0) throw Error(ErrorCode::Domain, "rational with zero denominator");
  q_ = mpq_class(num, 1) / mpq_class(den, 1);
}

Rational::Rational(const Integer& num, const Integer& den) {
  if (den == 0) throw Error(ErrorCode::Domain, "rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

namespace {

bool valid_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  if (!valid_integer_text(s)) {
    throw Error(ErrorCode::Parse, "not an integer: '" + std::string(s) + "'");
  }
  if (s[0] == '+') s.remove_prefix(1);
  return Integer(std::string(s), 10);
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  const Integer num = parse_integer(text.substr(0, slash));
  const Integer den = parse_integer(text.substr(slash + 1));
  if (den == 0) throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

std::string Rational::str() const {
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Integer Rational::floor() const {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return out;
}

Rational Rational::abs() const {
  Rational out;
  out.q_ = ::abs(q_);
  return out;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error(ErrorCode::Domain, "division by zero");
  q_ /= o.q_;
  return *this;
}

Rational Rational::operator-() const {
  Rational out;
  out.q_ = -q_;
  return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace knaster
