#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qpt/form.hpp"
#include "qpt/shape.hpp"

namespace qpt {

// Flattened form with power tables, for the hot loops of the search engine.
// Coefficients can be swapped in place when the form comes from a template.
class CompiledForm {
public:
    explicit CompiledForm(const Form& f);
    CompiledForm(const ShapeTemplate& tmpl, const Modulus& modulus);

    // Values in the template's slot order; already reduced.
    void set_coefficients(std::span<const std::uint64_t> values);

    const Modulus& modulus() const { return modulus_; }
    unsigned num_vars() const { return n_; }

    std::uint64_t value(std::span<const std::uint64_t> t) const;
    // Classical partial derivative d f / d t_i.
    std::uint64_t partial(std::span<const std::uint64_t> t, unsigned i) const;
    // Classical second partial d^2 f / d t_i d t_j.
    std::uint64_t second_partial(std::span<const std::uint64_t> t, unsigned i, unsigned j) const;

private:
    struct Factor {
        std::uint8_t var;
        std::uint8_t exp;
    };

    void add_monomial(const Exponents& exps);
    std::uint64_t pw(unsigned e, std::uint64_t x) const { return pow_[e * m_ + x]; }

    Modulus modulus_;
    std::uint64_t m_;
    unsigned n_;
    unsigned d_;
    std::vector<std::uint64_t> coeffs_;
    std::vector<std::uint32_t> offsets_;  // factors_[offsets_[k] .. offsets_[k+1]) belong to term k
    std::vector<Factor> factors_;
    std::vector<std::uint64_t> pow_;
};

struct NonsingularZero {
    Point point;
    unsigned index;  // smallest i with d f / d t_i != 0 at point

    friend bool operator==(const NonsingularZero&, const NonsingularZero&) = default;
};

// First nonzero point in lexicographic order (last coordinate fastest) with
// f(t) = 0 and a nonvanishing partial. Requires a form over F_p.
std::optional<NonsingularZero> find_nonsingular_zero(const Form& f);
std::optional<NonsingularZero> find_nonsingular_zero(const CompiledForm& f);

struct Result3Witness {
    Point point;     // coordinates mod p^2
    unsigned index;  // the distinguished coordinate

    friend bool operator==(const Result3Witness&, const Result3Witness&) = default;
};

// For a form over Z/p^2: f(t) = 0 mod p^2, d_i f(t) = 0 mod p but != 0 mod p^2,
// and d_i^2 f(t) = 0 mod p. Uses only the naive evaluator.
bool check_result3_witness(const Form& f, std::span<const std::uint64_t> t, unsigned i);

// Two-stage search: points mod p in lexicographic order with candidate indices
// ascending, then the p^n lifts t + p*s in lexicographic order of s.
std::optional<Result3Witness> find_result3_witness(const Form& f);
std::optional<Result3Witness> find_result3_witness(const CompiledForm& f);

}  // namespace qpt
