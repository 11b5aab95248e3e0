#include "qpt/search.hpp"

#include <string>

#include "qpt/errors.hpp"

namespace qpt {

namespace {

constexpr std::uint64_t kMaxCompiledModulus = 1u << 16;

// Advances t through [0, base)^n, last coordinate fastest. False after the last point.
bool next_point(std::span<std::uint64_t> t, std::uint64_t base) {
    for (std::size_t k = t.size(); k-- > 0;) {
        if (++t[k] < base) return true;
        t[k] = 0;
    }
    return false;
}

}  // namespace

CompiledForm::CompiledForm(const ShapeTemplate& tmpl, const Modulus& modulus)
    : modulus_(modulus), m_(modulus.m()), n_(tmpl.num_vars), d_(tmpl.degree) {
    if (m_ > kMaxCompiledModulus) throw UsageError("modulus too large for the compiled evaluator");
    offsets_.push_back(0);
    for (const auto& slot : tmpl.slots) add_monomial(slot.exps);
    coeffs_.assign(tmpl.slots.size(), 0);
    pow_.resize((d_ + 1) * m_);
    for (unsigned e = 0; e <= d_; ++e) {
        for (std::uint64_t x = 0; x < m_; ++x) pow_[e * m_ + x] = modulus.pow(x, e);
    }
}

CompiledForm::CompiledForm(const Form& f)
    : modulus_(f.modulus()), m_(f.modulus().m()), n_(f.num_vars()), d_(f.degree()) {
    if (m_ > kMaxCompiledModulus) throw UsageError("modulus too large for the compiled evaluator");
    offsets_.push_back(0);
    for (const auto& term : f.terms()) {
        add_monomial(term.exps);
        coeffs_.push_back(term.coeff);
    }
    pow_.resize((d_ + 1) * m_);
    for (unsigned e = 0; e <= d_; ++e) {
        for (std::uint64_t x = 0; x < m_; ++x) pow_[e * m_ + x] = modulus_.pow(x, e);
    }
}

void CompiledForm::add_monomial(const Exponents& exps) {
    for (unsigned v = 0; v < exps.size(); ++v) {
        if (exps[v] != 0) factors_.push_back({static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(exps[v])});
    }
    offsets_.push_back(static_cast<std::uint32_t>(factors_.size()));
}

void CompiledForm::set_coefficients(std::span<const std::uint64_t> values) {
    if (values.size() != coeffs_.size()) throw UsageError("coefficient count mismatch");
    for (std::size_t k = 0; k < values.size(); ++k) coeffs_[k] = values[k] % m_;
}

std::uint64_t CompiledForm::value(std::span<const std::uint64_t> t) const {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        std::uint64_t v = coeffs_[k];
        if (v == 0) continue;
        for (auto f = offsets_[k]; f < offsets_[k + 1]; ++f) v = v * pw(factors_[f].exp, t[factors_[f].var]) % m_;
        acc += v;
    }
    return acc % m_;
}

std::uint64_t CompiledForm::partial(std::span<const std::uint64_t> t, unsigned i) const {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k] == 0) continue;
        std::uint64_t v = coeffs_[k];
        bool has_i = false;
        for (auto f = offsets_[k]; f < offsets_[k + 1]; ++f) {
            const auto [var, e] = factors_[f];
            if (var == i) {
                has_i = true;
                v = v * (e % m_) % m_ * pw(e - 1, t[var]) % m_;
            } else {
                v = v * pw(e, t[var]) % m_;
            }
        }
        if (has_i) acc += v;
    }
    return acc % m_;
}

std::uint64_t CompiledForm::second_partial(std::span<const std::uint64_t> t, unsigned i, unsigned j) const {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k] == 0) continue;
        std::uint64_t v = coeffs_[k];
        unsigned hits = 0;
        for (auto f = offsets_[k]; f < offsets_[k + 1]; ++f) {
            const auto [var, e] = factors_[f];
            unsigned drop = (var == i ? 1u : 0u) + (var == j ? 1u : 0u);
            if (drop > e) {
                v = 0;
                break;
            }
            // falling factorial e (e-1) ... over the dropped orders
            std::uint64_t scale = 1;
            for (unsigned q = 0; q < drop; ++q) scale *= (e - q);
            hits += drop;
            v = v * (scale % m_) % m_ * pw(e - drop, t[var]) % m_;
        }
        if (hits == 2) acc += v;
    }
    return acc % m_;
}

std::optional<NonsingularZero> find_nonsingular_zero(const CompiledForm& f) {
    if (f.modulus().k() != 1) throw UsageError("nonsingular zero search needs a form over F_p");
    const auto p = f.modulus().p();
    Point t(f.num_vars(), 0);
    while (next_point(t, p)) {
        if (f.value(t) != 0) continue;
        for (unsigned i = 0; i < f.num_vars(); ++i) {
            if (f.partial(t, i) != 0) return NonsingularZero{t, i};
        }
    }
    return std::nullopt;
}

std::optional<NonsingularZero> find_nonsingular_zero(const Form& f) { return find_nonsingular_zero(CompiledForm(f)); }

bool check_result3_witness(const Form& f, std::span<const std::uint64_t> t, unsigned i) {
    if (f.modulus().k() != 2) throw UsageError("result-3 witnesses live over Z/p^2");
    if (i >= f.num_vars()) throw UsageError("witness index out of range");
    const auto p = f.modulus().p();
    Point tr(t.begin(), t.end());
    for (auto& x : tr) x %= f.modulus().m();
    if (evaluate(f, tr) != 0) return false;
    const auto d1 = evaluate(hasse_derivative(f, i, 1), tr);
    if (d1 % p != 0 || d1 == 0) return false;
    // classical second partial = 2 * Hasse second derivative
    const auto d2 = f.modulus().mul(2, evaluate(hasse_derivative(f, i, 2), tr));
    return d2 % p == 0;
}

namespace {

// Is there s in F_p^n with c0 + g.s = 0 and e0 + h.s != 0 (mod p)?
bool lift_solvable(std::uint64_t c0, std::uint64_t e0, std::span<const std::uint64_t> g,
                   std::span<const std::uint64_t> h, std::uint64_t p) {
    std::size_t pivot = g.size();
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (g[j] != 0) {
            pivot = j;
            break;
        }
    }
    if (pivot == g.size()) {
        if (c0 != 0) return false;
        // every s solves the first congruence
        for (auto x : h) {
            if (x != 0) return true;
        }
        return e0 != 0;
    }
    // h = lambda * g makes e0 + h.s constant on the solution hyperplane.
    const auto lambda = h[pivot] * inverse_mod(g[pivot], p) % p;
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (h[j] != lambda * g[j] % p) return true;
    }
    // On the hyperplane g.s = -c0, so e0 + h.s = e0 - lambda*c0.
    return (e0 + p * p - lambda * c0 % p) % p != 0;
}

}  // namespace

std::optional<Result3Witness> find_result3_witness(const CompiledForm& f) {
    const auto& mod = f.modulus();
    if (mod.k() != 2) throw UsageError("result-3 witnesses live over Z/p^2");
    const auto p = mod.p();
    const auto m = mod.m();
    const unsigned n = f.num_vars();

    Point t(n, 0);
    std::vector<std::uint64_t> grad(n), g(n), h(n);
    Point s(n), lifted(n);
    while (next_point(t, p)) {
        const auto v = f.value(t);
        if (v % p != 0) continue;
        for (unsigned j = 0; j < n; ++j) grad[j] = f.partial(t, j);
        for (unsigned i = 0; i < n; ++i) {
            if (grad[i] % p != 0 || f.second_partial(t, i, i) % p != 0) continue;
            // f(t + p s) = f(t) + p grad f(t).s        (mod p^2)
            // d_i f(t + p s) = d_i f(t) + p H_i(t).s   (mod p^2)
            const auto c0 = v / p;
            const auto e0 = grad[i] / p;
            for (unsigned j = 0; j < n; ++j) {
                g[j] = grad[j] % p;
                h[j] = f.second_partial(t, i, j) % p;
            }
            if (!lift_solvable(c0, e0, g, h, p)) continue;
            std::fill(s.begin(), s.end(), 0);
            do {
                std::uint64_t a = c0, b = e0;
                for (unsigned j = 0; j < n; ++j) {
                    a += g[j] * s[j];
                    b += h[j] * s[j];
                }
                if (a % p == 0 && b % p != 0) {
                    for (unsigned j = 0; j < n; ++j) lifted[j] = (t[j] + p * s[j]) % m;
                    return Result3Witness{lifted, i};
                }
            } while (next_point(s, p));
            throw InternalError("lift pre-check accepted a candidate with no lift");
        }
    }
    return std::nullopt;
}

std::optional<Result3Witness> find_result3_witness(const Form& f) { return find_result3_witness(CompiledForm(f)); }

}  // namespace qpt
