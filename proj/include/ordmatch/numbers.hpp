#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace ordmatch {

// Exact arithmetic everywhere: counts as arbitrary-precision integers,
// thresholds and densities as normalized rationals. No floating point is
// used in any reported quantity.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt binomial(long long n, long long k);
BigInt bigint_pow(const BigInt& base, unsigned exp);
Rational rational_pow(const Rational& base, unsigned exp);

// Canonical rendering "p/q" with q always present, e.g. "3/4", "16/1".
std::string to_fraction(const Rational& r);

// Parses "p/q" or a bare integer "p"; throws std::invalid_argument on junk.
Rational parse_fraction(const std::string& text);

// FNV-1a, used for stable input digests in reports.
std::uint64_t fnv1a(const std::string& data);
std::string hex64(std::uint64_t value);

}  // namespace ordmatch
