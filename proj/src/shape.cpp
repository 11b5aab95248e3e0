#include "qpt/shape.hpp"

#include <string>

#include "qpt/errors.hpp"

namespace qpt {

namespace {

Exponents mono(unsigned n, std::initializer_list<std::pair<unsigned, unsigned>> powers) {
    Exponents e(n, 0);
    for (auto [var, pw] : powers) e[var] += pw;
    return e;
}

std::string idx(unsigned i) { return std::to_string(i + 1); }

// a_i t_i^5 followed by b_ij t_i t_j^4 (i < j).
void add_quintic_core(std::vector<Slot>& slots, unsigned n) {
    for (unsigned i = 0; i < n; ++i) slots.push_back({"a" + idx(i), mono(n, {{i, 5}}), true});
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = i + 1; j < n; ++j) slots.push_back({"b" + idx(i) + idx(j), mono(n, {{i, 1}, {j, 4}}), false});
    }
}

void add_c(std::vector<Slot>& slots, unsigned n, unsigned i, unsigned j, unsigned k) {
    slots.push_back({"c" + idx(i) + idx(j) + idx(k), mono(n, {{i, 1}, {j, 1}, {k, 3}}), false});
}

ShapeTemplate make_r1() {
    ShapeTemplate t{Shape::r1, 3, 5, {}};
    add_quintic_core(t.slots, 3);
    return t;
}

ShapeTemplate make_r1star() {
    ShapeTemplate t{Shape::r1star, 3, 5, {}};
    add_quintic_core(t.slots, 3);
    add_c(t.slots, 3, 0, 1, 2);
    return t;
}

ShapeTemplate make_r2() {
    ShapeTemplate t{Shape::r2, 4, 5, {}};
    add_quintic_core(t.slots, 4);
    add_c(t.slots, 4, 0, 1, 3);
    add_c(t.slots, 4, 0, 2, 3);
    add_c(t.slots, 4, 1, 2, 3);
    return t;
}

ShapeTemplate make_r3() {
    ShapeTemplate t{Shape::r3, 6, 5, {}};
    add_quintic_core(t.slots, 6);
    add_c(t.slots, 6, 0, 1, 4);
    add_c(t.slots, 6, 0, 2, 4);
    add_c(t.slots, 6, 0, 3, 4);
    add_c(t.slots, 6, 1, 2, 4);
    for (unsigned i = 0; i < 5; ++i) {
        for (unsigned j = i + 1; j < 5; ++j) add_c(t.slots, 6, i, j, 5);
    }
    return t;
}

ShapeTemplate make_cubic_ad() {
    constexpr unsigned x = 0, y = 1, z = 2;
    return {Shape::cubic_ad, 3, 3,
            {
                {"a", mono(3, {{x, 3}}), true},
                {"b", mono(3, {{x, 1}, {y, 2}}), false},
                {"c", mono(3, {{y, 3}}), true},
                {"d", mono(3, {{x, 1}, {z, 2}}), false},
                {"e", mono(3, {{y, 1}, {z, 2}}), false},
                {"f", mono(3, {{z, 3}}), true},
            }};
}

}  // namespace

std::string_view to_string(Shape shape) {
    switch (shape) {
        case Shape::r1: return "r1";
        case Shape::r1star: return "r1star";
        case Shape::r2: return "r2";
        case Shape::r3: return "r3";
        case Shape::cubic_ad: return "cubic_ad";
    }
    return "?";
}

Shape parse_shape(std::string_view name) {
    if (name == "r1" || name == "R1") return Shape::r1;
    if (name == "r1star" || name == "R1STAR" || name == "r1*") return Shape::r1star;
    if (name == "r2" || name == "R2") return Shape::r2;
    if (name == "r3" || name == "R3") return Shape::r3;
    if (name == "cubic_ad" || name == "cubic-ad" || name == "CUBIC_AD") return Shape::cubic_ad;
    throw UsageError("unknown shape '" + std::string(name) + "'");
}

std::size_t ShapeTemplate::unit_slot_count() const {
    std::size_t c = 0;
    for (const auto& s : slots) c += s.unit ? 1 : 0;
    return c;
}

std::size_t ShapeTemplate::free_slot_count() const { return slots.size() - unit_slot_count(); }

std::optional<std::size_t> ShapeTemplate::slot_index(std::string_view name) const {
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].name == name) return i;
    }
    return std::nullopt;
}

const ShapeTemplate& shape_template(Shape shape) {
    static const ShapeTemplate r1 = make_r1();
    static const ShapeTemplate r1star = make_r1star();
    static const ShapeTemplate r2 = make_r2();
    static const ShapeTemplate r3 = make_r3();
    static const ShapeTemplate cubic = make_cubic_ad();
    switch (shape) {
        case Shape::r1: return r1;
        case Shape::r1star: return r1star;
        case Shape::r2: return r2;
        case Shape::r3: return r3;
        case Shape::cubic_ad: return cubic;
    }
    throw UsageError("unknown shape");
}

Form instantiate_shape(const ShapeTemplate& tmpl, std::span<const std::uint64_t> values, const Modulus& modulus) {
    if (values.size() != tmpl.slots.size()) {
        throw UsageError("expected " + std::to_string(tmpl.slots.size()) + " slot values for " +
                         std::string(to_string(tmpl.shape)) + ", got " + std::to_string(values.size()));
    }
    if (tmpl.shape == Shape::r3 && !(modulus.p() == 5 && modulus.k() == 2)) {
        throw UsageError("r3 forms live over Z/25");
    }
    std::vector<Term> terms;
    terms.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& slot = tmpl.slots[i];
        if (values[i] >= modulus.m()) {
            throw UsageError("slot " + slot.name + " value is not reduced modulo " + std::to_string(modulus.m()));
        }
        if (slot.unit && !modulus.is_unit(values[i])) {
            throw UsageError("slot " + slot.name + " must hold a unit");
        }
        terms.push_back({slot.exps, values[i]});
    }
    return Form(modulus, tmpl.num_vars, tmpl.degree, std::move(terms));
}

Form instantiate_shape(const ShapeTemplate& tmpl, const SlotValues& values, const Modulus& modulus) {
    std::vector<std::uint64_t> ordered;
    ordered.reserve(tmpl.slots.size());
    for (const auto& slot : tmpl.slots) {
        auto it = values.find(slot.name);
        if (it == values.end()) throw UsageError("missing slot " + slot.name);
        ordered.push_back(it->second);
    }
    for (const auto& [name, value] : values) {
        if (!tmpl.slot_index(name)) throw UsageError("unknown slot " + name);
    }
    return instantiate_shape(tmpl, ordered, modulus);
}

}  // namespace qpt
