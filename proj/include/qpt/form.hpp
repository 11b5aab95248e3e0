#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qpt/residue.hpp"

namespace qpt {

using Exponents = std::vector<unsigned>;
using Point = std::vector<std::uint64_t>;

struct Term {
    Exponents exps;
    std::uint64_t coeff = 0;

    friend bool operator==(const Term&, const Term&) = default;
};

// Sparse homogeneous polynomial over Z/p^k.
//
// Terms are kept sorted lexicographically by exponent vector, with duplicates
// merged and zero coefficients dropped, so two equal forms compare equal.
class Form {
public:
    Form(Modulus modulus, unsigned n, unsigned d, std::vector<Term> terms = {});

    const Modulus& modulus() const { return modulus_; }
    unsigned num_vars() const { return n_; }
    unsigned degree() const { return d_; }
    std::span<const Term> terms() const { return terms_; }

    // Coefficient of the monomial with the given exponents (0 when absent).
    std::uint64_t coefficient(const Exponents& exps) const;

    friend bool operator==(const Form&, const Form&) = default;

private:
    Modulus modulus_;
    unsigned n_;
    unsigned d_;
    std::vector<Term> terms_;
};

std::uint64_t evaluate(const Form& f, std::span<const std::uint64_t> t);
// Same value through precomputed tables; tables[e] must hold x^e for e = 0..deg.
std::uint64_t evaluate(const Form& f, std::span<const std::uint64_t> t, std::span<const PowerTable> tables);

// Hasse derivative of order r in variable i: e -> e - r*u_i with coefficient C(e_i, r).
// r! times this is the classical r-th partial.
Form hasse_derivative(const Form& f, unsigned i, unsigned r);

std::vector<std::uint64_t> gradient(const Form& f, std::span<const std::uint64_t> t);

// Same form read over Z/p^k' (coefficients taken as integer representatives).
Form change_precision(const Form& f, unsigned k);

// Number of nonzero coefficients of a quadratic form.
struct QuadraticLength {
    std::size_t count = 0;
    friend bool operator==(const QuadraticLength&, const QuadraticLength&) = default;
};

QuadraticLength quadratic_length(const Form& q);

}  // namespace qpt
