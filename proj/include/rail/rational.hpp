#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace rail {

// Exact rational arithmetic everywhere; no binary floating point in the
// pipeline. GMP's mpq_class keeps values canonical as long as they are
// built through the helpers below (the two-argument constructor does not
// canonicalize on its own).
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline bool rational_is_integer(const Rational& r) { return r.get_den() == 1; }

// Renders "3", "-3" or "1/2"; the exact inverse of parse_rational for
// canonical values.
std::string rational_to_string(const Rational& r);

// Accepts integers ("42"), fractions ("1/2") and decimals ("0.5"); decimals
// parse to the exact rational they denote.
std::optional<Rational> parse_rational(const std::string& text);

}  // namespace rail
