#include "qpt/checked.hpp"

#include <algorithm>

namespace qpt {

namespace checked {

Int binomial(Int n, Int k) {
    if (k < 0 || n < k) return 0;
    k = std::min(k, n - k);
    Int r = 1;
    for (Int i = 1; i <= k; ++i) {
        // r * (n - k + i) is divisible by i at every step.
        r = div_exact(mul(r, n - k + i), i);
    }
    return r;
}

}  // namespace checked

std::string to_string(Int v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    std::string out;
    // Work with negative remainders so INT128_MIN is safe.
    while (v != 0) {
        int digit = static_cast<int>(v % 10);
        out.push_back(static_cast<char>('0' + (neg ? -digit : digit)));
        v /= 10;
    }
    if (neg) out.push_back('-');
    std::reverse(out.begin(), out.end());
    return out;
}

Int parse_int(const std::string& text) {
    std::size_t i = 0;
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        neg = text[i] == '-';
        ++i;
    }
    std::size_t end = text.size();
    while (end > i && (text[end - 1] == ' ' || text[end - 1] == '\t')) --end;
    if (i == end) throw UsageError("expected an integer, got '" + text + "'");
    Int v = 0;
    for (; i < end; ++i) {
        char c = text[i];
        if (c < '0' || c > '9') throw UsageError("expected an integer, got '" + text + "'");
        v = checked::add(checked::mul(v, 10), neg ? -(c - '0') : (c - '0'));
    }
    return v;
}

}  // namespace qpt
