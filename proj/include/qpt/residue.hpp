#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace qpt {

// Deterministic trial division. Values above kMaxPrime are rejected by Modulus.
bool is_prime(std::uint64_t n);

inline constexpr std::uint64_t kMaxPrime = 1'000'000;

// The ring Z/p^k.
class Modulus {
public:
    Modulus(std::uint64_t p, unsigned k = 1);

    std::uint64_t p() const { return p_; }
    unsigned k() const { return k_; }
    std::uint64_t m() const { return m_; }

    std::uint64_t reduce(std::int64_t x) const;
    std::uint64_t reduce_u(std::uint64_t x) const { return x % m_; }
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t pow(std::uint64_t base, std::uint64_t e) const;

    bool is_unit(std::uint64_t x) const { return x % p_ != 0; }

    friend bool operator==(const Modulus&, const Modulus&) = default;

private:
    std::uint64_t p_;
    unsigned k_;
    std::uint64_t m_;
};

class Residue {
public:
    Residue(std::uint64_t value, const Modulus& modulus)
        : value_(modulus.reduce_u(value)), modulus_(modulus) {}

    std::uint64_t value() const { return value_; }
    const Modulus& modulus() const { return modulus_; }

    bool is_unit() const { return modulus_.is_unit(value_); }
    // Throws DomainError when the residue is not a unit.
    Residue inverse() const;

    Residue operator+(const Residue& o) const;
    Residue operator-(const Residue& o) const;
    Residue operator*(const Residue& o) const;

    friend bool operator==(const Residue&, const Residue&) = default;

private:
    std::uint64_t value_;
    Modulus modulus_;
};

// Inverse of x modulo m; throws DomainError when gcd(x, m) != 1.
std::uint64_t inverse_mod(std::uint64_t x, std::uint64_t m);

// v_p(n), with a distinguished infinite value for n = 0.
struct Valuation {
    static constexpr unsigned kInfinite = std::numeric_limits<unsigned>::max();
    unsigned value = kInfinite;

    bool is_infinite() const { return value == kInfinite; }
    friend auto operator<=>(const Valuation&, const Valuation&) = default;
};

Valuation valuation(std::int64_t n, std::uint64_t p);
Valuation valuation(__int128 n, std::uint64_t p);

// Minimal representatives of the cosets of the e-th powers in (Z/m)^*, ascending.
std::vector<std::uint64_t> power_classes(const Modulus& modulus, unsigned e);

// Cosets of (F_p^*)^5 in F_p^*; there are gcd(5, p-1) of them.
std::vector<std::uint64_t> fifth_power_classes(std::uint64_t p);

// table[x] = x^e mod m for every x in [0, m).
class PowerTable {
public:
    PowerTable(unsigned exponent, const Modulus& modulus);

    unsigned exponent() const { return exponent_; }
    std::uint64_t operator[](std::uint64_t x) const { return table_[x]; }
    std::span<const std::uint64_t> values() const { return table_; }

private:
    unsigned exponent_;
    std::vector<std::uint64_t> table_;
};

// Power tables for every exponent 0..max_exponent.
std::vector<PowerTable> make_power_tables(unsigned max_exponent, const Modulus& modulus);

}  // namespace qpt
