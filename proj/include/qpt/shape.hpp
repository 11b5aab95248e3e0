#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpt/form.hpp"

namespace qpt {

// The fixed coefficient patterns whose solubility is machine-checked.
enum class Shape {
    r1,        // 3 vars: a_i t_i^5 + b_ij t_i t_j^4
    r1star,    // r1 plus c_123 t1 t2 t3^3
    r2,        // 4 vars: r1-type terms plus c_ij t_i t_j t4^3
    r3,        // 6 vars over Z/25 with c_ij5 and c_ij6 terms
    cubic_ad,  // a x^3 + b x y^2 + c y^3 + (d x + e y) z^2 + f z^3
};

std::string_view to_string(Shape shape);
// Accepts both the enum spelling ("r1star", "cubic_ad") and CLI spelling ("cubic-ad").
Shape parse_shape(std::string_view name);

struct Slot {
    std::string name;
    Exponents exps;
    bool unit = false;  // must be a unit of the ring (nonzero mod p)
};

struct ShapeTemplate {
    Shape shape;
    unsigned num_vars;
    unsigned degree;
    std::vector<Slot> slots;

    std::size_t unit_slot_count() const;
    std::size_t free_slot_count() const;
    std::optional<std::size_t> slot_index(std::string_view name) const;
};

const ShapeTemplate& shape_template(Shape shape);

using SlotValues = std::map<std::string, std::uint64_t>;

// Builds the form with exactly the template's monomials. Throws UsageError on a
// missing/unknown slot, a non-unit in a unit slot, or a wrong modulus for r3.
Form instantiate_shape(const ShapeTemplate& tmpl, const SlotValues& values, const Modulus& modulus);
// Values in slot order.
Form instantiate_shape(const ShapeTemplate& tmpl, std::span<const std::uint64_t> values, const Modulus& modulus);

}  // namespace qpt
