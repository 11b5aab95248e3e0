#include "qpt/form.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "qpt/errors.hpp"

namespace qpt {

namespace {

std::uint64_t binomial_mod(unsigned n, unsigned r, const Modulus& mod) {
    if (r > n) return 0;
    // Pascal row; n is a small exponent.
    std::vector<std::uint64_t> row(r + 1, 0);
    row[0] = 1 % mod.m();
    for (unsigned i = 1; i <= n; ++i) {
        for (unsigned j = std::min(i, r); j > 0; --j) row[j] = mod.add(row[j], row[j - 1]);
    }
    return row[r];
}

void check_point(const Form& f, std::span<const std::uint64_t> t) {
    if (t.size() != f.num_vars()) {
        throw UsageError("point has " + std::to_string(t.size()) + " coordinates, form has " +
                         std::to_string(f.num_vars()) + " variables");
    }
}

}  // namespace

Form::Form(Modulus modulus, unsigned n, unsigned d, std::vector<Term> terms)
    : modulus_(modulus), n_(n), d_(d) {
    if (n == 0) throw UsageError("a form needs at least one variable");
    for (auto& term : terms) {
        if (term.exps.size() != n) throw UsageError("exponent vector length differs from variable count");
        if (std::accumulate(term.exps.begin(), term.exps.end(), 0u) != d) {
            throw UsageError("exponent vector does not sum to the degree");
        }
        term.coeff = modulus_.reduce_u(term.coeff);
    }
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.exps < b.exps; });
    for (auto& term : terms) {
        if (!terms_.empty() && terms_.back().exps == term.exps) {
            terms_.back().coeff = modulus_.add(terms_.back().coeff, term.coeff);
        } else {
            terms_.push_back(std::move(term));
        }
    }
    std::erase_if(terms_, [](const Term& t) { return t.coeff == 0; });
}

std::uint64_t Form::coefficient(const Exponents& exps) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), exps,
                               [](const Term& t, const Exponents& e) { return t.exps < e; });
    return it != terms_.end() && it->exps == exps ? it->coeff : 0;
}

std::uint64_t evaluate(const Form& f, std::span<const std::uint64_t> t) {
    check_point(f, t);
    const auto& mod = f.modulus();
    std::uint64_t acc = 0;
    for (const auto& term : f.terms()) {
        std::uint64_t v = term.coeff;
        for (unsigned i = 0; i < f.num_vars(); ++i) {
            if (term.exps[i] != 0) v = mod.mul(v, mod.pow(t[i], term.exps[i]));
        }
        acc = mod.add(acc, v);
    }
    return acc;
}

std::uint64_t evaluate(const Form& f, std::span<const std::uint64_t> t, std::span<const PowerTable> tables) {
    check_point(f, t);
    if (tables.size() <= f.degree()) throw UsageError("power tables do not cover the form degree");
    const auto& mod = f.modulus();
    for (auto x : t) {
        if (x >= mod.m()) throw UsageError("point coordinate not reduced modulo p^k");
    }
    std::uint64_t acc = 0;
    for (const auto& term : f.terms()) {
        std::uint64_t v = term.coeff;
        for (unsigned i = 0; i < f.num_vars(); ++i) {
            if (term.exps[i] != 0) v = mod.mul(v, tables[term.exps[i]][t[i]]);
        }
        acc = mod.add(acc, v);
    }
    return acc;
}

Form hasse_derivative(const Form& f, unsigned i, unsigned r) {
    if (i >= f.num_vars()) throw UsageError("variable index out of range");
    if (r > f.degree()) throw UsageError("derivative order exceeds the degree");
    std::vector<Term> out;
    for (const auto& term : f.terms()) {
        if (term.exps[i] < r) continue;
        Term d{term.exps, f.modulus().mul(term.coeff, binomial_mod(term.exps[i], r, f.modulus()))};
        d.exps[i] -= r;
        out.push_back(std::move(d));
    }
    return Form(f.modulus(), f.num_vars(), f.degree() - r, std::move(out));
}

std::vector<std::uint64_t> gradient(const Form& f, std::span<const std::uint64_t> t) {
    check_point(f, t);
    std::vector<std::uint64_t> g(f.num_vars(), 0);
    if (f.degree() == 0) return g;
    for (unsigned i = 0; i < f.num_vars(); ++i) g[i] = evaluate(hasse_derivative(f, i, 1), t);
    return g;
}

Form change_precision(const Form& f, unsigned k) {
    std::vector<Term> terms(f.terms().begin(), f.terms().end());
    return Form(Modulus(f.modulus().p(), k), f.num_vars(), f.degree(), std::move(terms));
}

QuadraticLength quadratic_length(const Form& q) {
    if (q.degree() != 2) throw UsageError("quadratic length needs a degree-2 form");
    return {q.terms().size()};
}

}  // namespace qpt
