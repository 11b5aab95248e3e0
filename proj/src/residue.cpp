#include "qpt/residue.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "qpt/errors.hpp"

namespace qpt {

namespace {

using u128 = unsigned __int128;

constexpr std::uint64_t kMaxTableModulus = std::uint64_t{1} << 24;

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

Modulus::Modulus(std::uint64_t p, unsigned k) : p_(p), k_(k), m_(1) {
    if (p > kMaxPrime) throw UsageError("prime " + std::to_string(p) + " exceeds the supported bound 10^6");
    if (!is_prime(p)) throw UsageError(std::to_string(p) + " is not prime");
    if (k < 1) throw UsageError("modulus exponent must be at least 1");
    for (unsigned i = 0; i < k; ++i) {
        if (m_ > (std::numeric_limits<std::uint64_t>::max() >> 1) / p) {
            throw UsageError("p^k does not fit in 63 bits");
        }
        m_ *= p;
    }
}

std::uint64_t Modulus::reduce(std::int64_t x) const {
    auto r = x % static_cast<std::int64_t>(m_);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m_) : r);
}

std::uint64_t Modulus::add(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>((u128{a} + b) % m_);
}

std::uint64_t Modulus::sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? (a - b) % m_ : static_cast<std::uint64_t>((u128{a} + m_ - b % m_) % m_);
}

std::uint64_t Modulus::mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>((u128{a} * b) % m_);
}

std::uint64_t Modulus::pow(std::uint64_t base, std::uint64_t e) const {
    std::uint64_t result = 1 % m_;
    base %= m_;
    while (e > 0) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

std::uint64_t inverse_mod(std::uint64_t x, std::uint64_t m) {
    // Extended Euclid on signed 128-bit to avoid overflow for m < 2^63.
    __int128 r0 = m, r1 = x % m, s0 = 0, s1 = 1;
    while (r1 != 0) {
        __int128 q = r0 / r1;
        __int128 t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1) throw DomainError(std::to_string(x) + " is not invertible modulo " + std::to_string(m));
    __int128 inv = s0 % static_cast<__int128>(m);
    if (inv < 0) inv += m;
    return static_cast<std::uint64_t>(inv);
}

Residue Residue::inverse() const { return Residue(inverse_mod(value_, modulus_.m()), modulus_); }

Residue Residue::operator+(const Residue& o) const {
    if (!(modulus_ == o.modulus_)) throw UsageError("residues with different moduli");
    return Residue(modulus_.add(value_, o.value_), modulus_);
}

Residue Residue::operator-(const Residue& o) const {
    if (!(modulus_ == o.modulus_)) throw UsageError("residues with different moduli");
    return Residue(modulus_.sub(value_, o.value_), modulus_);
}

Residue Residue::operator*(const Residue& o) const {
    if (!(modulus_ == o.modulus_)) throw UsageError("residues with different moduli");
    return Residue(modulus_.mul(value_, o.value_), modulus_);
}

Valuation valuation(std::int64_t n, std::uint64_t p) { return valuation(static_cast<__int128>(n), p); }

Valuation valuation(__int128 n, std::uint64_t p) {
    if (p < 2) throw UsageError("valuation base must be at least 2");
    if (n == 0) return {};
    unsigned v = 0;
    while (n % static_cast<__int128>(p) == 0) {
        n /= static_cast<__int128>(p);
        ++v;
    }
    return {v};
}

std::vector<std::uint64_t> power_classes(const Modulus& modulus, unsigned e) {
    const auto m = modulus.m();
    if (m > kMaxTableModulus) throw UsageError("modulus too large for power-class enumeration");
    std::set<std::uint64_t> powers;
    for (std::uint64_t x = 1; x < m; ++x) {
        if (modulus.is_unit(x)) powers.insert(modulus.pow(x, e));
    }
    std::vector<char> covered(m, 0);
    std::vector<std::uint64_t> reps;
    for (std::uint64_t x = 1; x < m; ++x) {
        if (!modulus.is_unit(x) || covered[x]) continue;
        reps.push_back(x);
        for (auto h : powers) covered[modulus.mul(x, h)] = 1;
    }
    return reps;
}

std::vector<std::uint64_t> fifth_power_classes(std::uint64_t p) { return power_classes(Modulus(p, 1), 5); }

PowerTable::PowerTable(unsigned exponent, const Modulus& modulus) : exponent_(exponent) {
    if (modulus.m() > kMaxTableModulus) throw UsageError("modulus too large for a power table");
    table_.resize(modulus.m());
    for (std::uint64_t x = 0; x < modulus.m(); ++x) table_[x] = modulus.pow(x, exponent);
}

std::vector<PowerTable> make_power_tables(unsigned max_exponent, const Modulus& modulus) {
    std::vector<PowerTable> tables;
    tables.reserve(max_exponent + 1);
    for (unsigned e = 0; e <= max_exponent; ++e) tables.emplace_back(e, modulus);
    return tables;
}

}  // namespace qpt
