#include "ordmatch/numbers.hpp"

#include <sstream>
#include <stdexcept>

namespace ordmatch {

BigInt binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (long long i = 1; i <= k; ++i) {
    result *= (n - k + i);
    result /= i;  // exact: product of i consecutive integers is divisible by i!
  }
  return result;
}

BigInt bigint_pow(const BigInt& base, unsigned exp) {
  BigInt result = 1;
  BigInt b = base;
  while (exp > 0) {
    if (exp & 1u) result *= b;
    b *= b;
    exp >>= 1u;
  }
  return result;
}

Rational rational_pow(const Rational& base, unsigned exp) {
  return Rational(bigint_pow(numerator(base), exp), bigint_pow(denominator(base), exp));
}

std::string to_fraction(const Rational& r) {
  std::ostringstream out;
  out << numerator(r) << "/" << denominator(r);
  return out.str();
}

Rational parse_fraction(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      if (text.empty()) throw std::invalid_argument("empty");
      return Rational(BigInt(text));
    }
    const std::string num_text = text.substr(0, slash);
    const std::string den_text = text.substr(slash + 1);
    if (num_text.empty() || den_text.empty()) throw std::invalid_argument("empty part");
    BigInt num(num_text);
    BigInt den(den_text);
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a valid rational: '" + text + "'");
  }
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

}  // namespace ordmatch
