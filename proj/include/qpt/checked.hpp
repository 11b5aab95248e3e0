#pragma once

#include <cstdint>
#include <string>

#include "qpt/errors.hpp"

namespace qpt {

// Signed 128-bit integer used for every bound computation.
using Int = __int128;

namespace checked {

inline Int add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("128-bit overflow in addition");
    return r;
}

inline Int sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("128-bit overflow in subtraction");
    return r;
}

inline Int mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("128-bit overflow in multiplication");
    return r;
}

template <typename... Rest>
Int mul(Int a, Int b, Rest... rest) {
    return mul(mul(a, b), rest...);
}

// Division that must be exact; a remainder means the formula or its inputs are broken.
inline Int div_exact(Int a, Int b) {
    if (b == 0) throw InternalError("exact division by zero");
    if (a % b != 0) throw InternalError("exact division left a nonzero remainder");
    return a / b;
}

// C(n, k) with C(n, k) = 0 for k < 0 or n < k.
Int binomial(Int n, Int k);

}  // namespace checked

std::string to_string(Int v);

// Parses a decimal integer into Int; throws UsageError on junk.
Int parse_int(const std::string& text);

}  // namespace qpt
