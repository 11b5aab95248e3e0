#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qpt/errors.hpp"
#include "qpt/form.hpp"
#include "qpt/search.hpp"

namespace qpt {

// Integer polynomial read in Z_p; coefficients[j] multiplies x^j.
class UnivariatePoly {
public:
    static constexpr std::size_t kMaxDegree = 32;

    UnivariatePoly(std::uint64_t p, std::vector<std::int64_t> coefficients);

    std::uint64_t p() const { return p_; }
    std::span<const std::int64_t> coefficients() const { return coeffs_; }
    std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

    // Value mod m of the r-th Hasse derivative at x (r = 0 gives F itself).
    std::uint64_t hasse_eval(unsigned r, std::uint64_t x, std::uint64_t m) const;
    std::uint64_t eval(std::uint64_t x, std::uint64_t m) const { return hasse_eval(0, x, m); }

private:
    std::uint64_t p_;
    std::vector<std::int64_t> coeffs_;
};

// A p-adic integer known modulo p^k.
struct PadicApprox {
    std::uint64_t p;
    unsigned precision;
    std::uint64_t value;

    friend bool operator==(const PadicApprox&, const PadicApprox&) = default;
};

struct LiftStep {
    unsigned r;                // iteration number
    std::uint64_t alpha;       // alpha_r
    unsigned residue_valuation;  // v_p(F(alpha_r)), capped at the working precision
    unsigned derivative_valuation;
};

struct LiftReport {
    unsigned iterations = 0;
    std::uint64_t residue = 0;      // F(alpha) mod p^k; 0 on success
    std::uint64_t class_mod_p = 0;  // alpha mod p, equal to a mod p
    std::vector<LiftStep> steps;
};

struct LiftResult {
    PadicApprox root;
    LiftReport report;
};

class HenselError : public DomainError {
public:
    enum class Hypothesis {
        root_mod_p,          // F(a) = 0 mod p
        unit_derivative,     // F'(a) != 0 mod p
        root_mod_p2,         // p^2 | F(a)
        derivative_exactly_p,  // p || F'(a)
        second_derivative,   // p | F''(a)
        odd_prime,
        precision,
        singular_point,
        witness,
    };

    HenselError(Hypothesis which, const std::string& message) : DomainError(message), which_(which) {}
    Hypothesis which() const { return which_; }

private:
    Hypothesis which_;
};

// Standard Hensel: F(a) = 0 mod p, F'(a) a unit. Returns the root mod p^k with alpha = a mod p.
LiftResult hensel_lift_simple(const UnivariatePoly& f, std::int64_t a, unsigned k);

// Lifting from p^2 | F(a), p || F'(a), p | F''(a) for odd p. The returned value is
// the truncation mod p^k of the p-adic root congruent to a mod p.
LiftResult hensel_lift_a3(const UnivariatePoly& f, std::int64_t a, unsigned k);

// Coefficients (mod modulus) of s -> f(t with coordinate i replaced by s).
UnivariatePoly restrict_to_coordinate(const Form& f, std::span<const std::uint64_t> t, unsigned i,
                                      std::uint64_t modulus);

struct PointLift {
    std::vector<PadicApprox> point;
    unsigned coordinate;  // the coordinate that was lifted
    LiftReport report;
};

// f over F_p (coefficients as integer representatives), t a nonsingular zero mod p.
PointLift lift_nonsingular_point(const Form& f, std::span<const std::uint64_t> t, unsigned k);

// f over Z/p^2 (odd p) with a valid result-3 witness (t, i).
PointLift lift_result3(const Form& f, const Result3Witness& witness, unsigned k);

// Values of a lifted point mod p^k, as plain integers.
Point values(const std::vector<PadicApprox>& point);

}  // namespace qpt
