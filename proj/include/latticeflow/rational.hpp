#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace latticeflow
{
/// Exact rational scalar used for every length, energy and breakpoint.
using Rational = mpq_class;

/// p/q in canonical form.  Prefer this to Rational(p, q), which does not
/// reduce and breaks comparisons when p and q share a factor.
inline Rational ratio(std::int64_t p, std::int64_t q)
{
    Rational r(static_cast<long>(p), static_cast<long>(q));
    r.canonicalize();
    return r;
}

/// Parses "p/q", an integer, or a finite decimal ("0.25", "-1.5e-3") exactly.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Comma-separated list of rationals ("0.2,0.4" or "1/5, 2/5").
std::vector<Rational> parse_rational_list(std::string_view text);

/// Canonical "p/q" form ("5/8"); integers render without a denominator.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// floor and ceil as 64-bit integers; throws std::overflow_error when out of range.
std::int64_t floor_to_int(const Rational& value);
std::int64_t ceil_to_int(const Rational& value);

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// Positive modulus of an integer (result in [0, m)).
inline std::int64_t mod_floor(std::int64_t a, std::int64_t m)
{
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}
} // namespace latticeflow
