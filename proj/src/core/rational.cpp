#include "core/rational.hpp"

#include "core/error.hpp"

#include <cctype>

namespace koman {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::Validation: return "ValidationError";
    case ErrorCode::SizeLimitExceeded: return "SizeLimitExceeded";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::UnknownWinner: return "UnknownWinner";
    case ErrorCode::IncompleteRound: return "IncompleteRound";
    case ErrorCode::DoubleThrow: return "DoubleThrow";
    case ErrorCode::LevelMismatch: return "LevelMismatch";
    case ErrorCode::MissingRoleAnnotations: return "MissingRoleAnnotations";
    case ErrorCode::Io: return "IoError";
  }
  return "Error";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  // no redundant leading zeros
  return s.size() == 1 || s[0] != '0';
}

Rational parse_fraction(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
  if (!all_digits(num) || (slash != std::string_view::npos && !all_digits(den)))
    throw Error(ErrorCode::Syntax, "malformed rational '" + std::string(text) + "'");
  if (slash == std::string_view::npos) return Rational(mpz_class(std::string(num)));
  mpz_class p{std::string(num)}, q{std::string(den)};
  if (q == 0) throw Error(ErrorCode::Syntax, "zero denominator in '" + std::string(text) + "'");
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
  if (g != 1) throw Error(ErrorCode::Syntax, "rational '" + std::string(text) + "' is not in lowest terms");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

}  // namespace

Rational parse_probability(std::string_view text) {
  Rational r = parse_fraction(text);
  if (!is_probability(r)) throw Error(ErrorCode::Syntax, "probability '" + std::string(text) + "' outside [0,1]");
  return r;
}

Rational parse_nonnegative_rational(std::string_view text) { return parse_fraction(text); }

std::string to_string(const Rational& value) { return value.get_str(); }

}  // namespace koman
