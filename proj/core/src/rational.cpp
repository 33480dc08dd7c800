#include "l2approx/rational.hpp"

#include <cctype>

#include "l2approx/errors.hpp"

namespace l2approx {

namespace {

bool is_digit_run(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!is_digit_run(num) || !is_digit_run(den)) {
    throw ValidationError("not a decimal-free rational: \"" + std::string(text) + "\"");
  }
  Integer n(std::string(num), 10);
  Integer d(std::string(den), 10);
  if (d == 0) throw ValidationError("zero denominator in \"" + std::string(text) + "\"");
  if (negative) n = -n;
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

bool is_integer(const Rational& value) { return value.get_den() == 1; }

std::optional<Rational> exact_sqrt(const Rational& value) {
  if (sgn(value) < 0) return std::nullopt;
  if (!mpz_perfect_square_p(value.get_num_mpz_t()) ||
      !mpz_perfect_square_p(value.get_den_mpz_t())) {
    return std::nullopt;
  }
  Rational r(sqrt(value.get_num()), sqrt(value.get_den()));
  r.canonicalize();
  return r;
}

Integer ceil_sqrt(const Rational& value) {
  if (sgn(value) <= 0) return 0;
  // floor(p/q) then step up until n^2 >= value.
  Integer floor_value = value.get_num() / value.get_den();
  Integer n = sqrt(floor_value);
  while (Rational(n * n) < value) ++n;
  return n;
}

long double to_long_double(const Rational& value) {
  // mpq_get_d truncates; good to ~1e-16 relative, which is all display needs.
  return static_cast<long double>(value.get_d());
}

}  // namespace l2approx
