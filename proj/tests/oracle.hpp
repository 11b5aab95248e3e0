#pragma once

// Naive reference implementations used as test oracles. Nothing here calls into
// the library's evaluators, power tables or search code.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qpt/form.hpp"

namespace oracle {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 powmod(u64 x, unsigned e, u64 m) {
    u64 r = 1 % m;
    for (unsigned i = 0; i < e; ++i) r = static_cast<u64>(u128{r} * (x % m) % m);
    return r;
}

inline u64 eval(const qpt::Form& f, const std::vector<u64>& t) {
    const u64 m = f.modulus().m();
    u64 acc = 0;
    for (const auto& term : f.terms()) {
        u64 v = term.coeff % m;
        for (std::size_t i = 0; i < t.size(); ++i) v = static_cast<u64>(u128{v} * powmod(t[i], term.exps[i], m) % m);
        acc = (acc + v) % m;
    }
    return acc;
}

// Classical partial derivative d f / d t_i at t.
inline u64 partial(const qpt::Form& f, const std::vector<u64>& t, unsigned i) {
    const u64 m = f.modulus().m();
    u64 acc = 0;
    for (const auto& term : f.terms()) {
        const unsigned e = term.exps[i];
        if (e == 0) continue;
        u64 v = static_cast<u64>(u128{term.coeff % m} * (e % m) % m);
        for (std::size_t j = 0; j < t.size(); ++j) {
            v = static_cast<u64>(u128{v} * powmod(t[j], j == i ? e - 1 : term.exps[j], m) % m);
        }
        acc = (acc + v) % m;
    }
    return acc;
}

inline u64 second_partial(const qpt::Form& f, const std::vector<u64>& t, unsigned i) {
    const u64 m = f.modulus().m();
    u64 acc = 0;
    for (const auto& term : f.terms()) {
        const unsigned e = term.exps[i];
        if (e < 2) continue;
        u64 v = static_cast<u64>(u128{term.coeff % m} * (u64{e} * (e - 1) % m) % m);
        for (std::size_t j = 0; j < t.size(); ++j) {
            v = static_cast<u64>(u128{v} * powmod(t[j], j == i ? e - 2 : term.exps[j], m) % m);
        }
        acc = (acc + v) % m;
    }
    return acc;
}

// Odometer over [0, m)^n, last coordinate fastest. Returns false after the last point.
inline bool next(std::vector<u64>& t, u64 m) {
    for (std::size_t i = t.size(); i-- > 0;) {
        if (++t[i] < m) return true;
        t[i] = 0;
    }
    return false;
}

inline bool is_zero(const std::vector<u64>& t) {
    for (auto x : t) {
        if (x) return false;
    }
    return true;
}

// Every nonsingular zero over F_p, in lexicographic order.
inline std::vector<std::pair<std::vector<u64>, unsigned>> all_nonsingular_zeros(const qpt::Form& f) {
    std::vector<std::pair<std::vector<u64>, unsigned>> out;
    const u64 p = f.modulus().p();
    std::vector<u64> t(f.num_vars(), 0);
    while (next(t, p)) {
        if (eval(f, t) != 0) continue;
        for (unsigned i = 0; i < f.num_vars(); ++i) {
            if (partial(f, t, i) != 0) {
                out.push_back({t, i});
                break;
            }
        }
    }
    return out;
}

inline std::vector<unsigned> random_exponents(std::mt19937_64& rng, unsigned n, unsigned d) {
    std::vector<unsigned> e(n, 0);
    for (unsigned k = 0; k < d; ++k) e[rng() % n]++;
    return e;
}

inline qpt::Form random_form(std::mt19937_64& rng, const qpt::Modulus& mod, unsigned n, unsigned d, unsigned terms) {
    std::vector<qpt::Term> ts;
    for (unsigned k = 0; k < terms; ++k) ts.push_back({random_exponents(rng, n, d), rng() % mod.m()});
    return qpt::Form(mod, n, d, ts);
}

inline std::vector<u64> random_point(std::mt19937_64& rng, unsigned n, u64 m) {
    std::vector<u64> t(n);
    for (auto& x : t) x = rng() % m;
    return t;
}

}  // namespace oracle
