#include "qpt/hensel.hpp"

#include <string>

namespace qpt {

namespace {

using u128 = unsigned __int128;
using H = HenselError::Hypothesis;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(u128{a} * b % m);
}

std::uint64_t reduce(std::int64_t x, std::uint64_t m) {
    auto r = static_cast<__int128>(x) % static_cast<__int128>(m);
    return static_cast<std::uint64_t>(r < 0 ? r + m : r);
}

// p^k, refusing anything at or above 2^63.
std::uint64_t prime_power(std::uint64_t p, unsigned k) {
    std::uint64_t m = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (m > ((std::uint64_t{1} << 63) - 1) / p) {
            throw HenselError(H::precision, "p^" + std::to_string(k) + " exceeds the 2^63 precision cap");
        }
        m *= p;
    }
    return m;
}

unsigned val_mod(std::uint64_t x, std::uint64_t p, unsigned cap) {
    unsigned v = 0;
    while (v < cap && x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

std::uint64_t binom_small(unsigned n, unsigned r, std::uint64_t m) {
    if (r > n) return 0;
    std::vector<std::uint64_t> row(r + 1, 0);
    row[0] = 1 % m;
    for (unsigned i = 1; i <= n; ++i) {
        for (unsigned j = std::min(i, r); j > 0; --j) row[j] = (row[j] + row[j - 1]) % m;
    }
    return row[r];
}

}  // namespace

UnivariatePoly::UnivariatePoly(std::uint64_t p, std::vector<std::int64_t> coefficients)
    : p_(p), coeffs_(std::move(coefficients)) {
    if (p < 2 || !is_prime(p)) throw UsageError(std::to_string(p) + " is not prime");
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    if (coeffs_.size() > kMaxDegree + 1) throw UsageError("polynomial degree exceeds 32");
}

std::uint64_t UnivariatePoly::hasse_eval(unsigned r, std::uint64_t x, std::uint64_t m) const {
    // Horner on the coefficients C(j, r) * c_j of x^(j-r).
    std::uint64_t acc = 0;
    x %= m;
    for (std::size_t j = coeffs_.size(); j-- > r;) {
        auto c = mulmod(reduce(coeffs_[j], m), binom_small(static_cast<unsigned>(j), r, m), m);
        acc = (mulmod(acc, x, m) + c) % m;
    }
    return acc;
}

LiftResult hensel_lift_simple(const UnivariatePoly& f, std::int64_t a, unsigned k) {
    if (k < 1) throw HenselError(H::precision, "target precision must be at least 1");
    const auto p = f.p();
    const auto target = prime_power(p, k);
    const auto a0 = reduce(a, p);
    if (f.eval(a0, p) != 0) throw HenselError(H::root_mod_p, "F(a) is not 0 mod p");
    if (f.hasse_eval(1, a0, p) == 0) throw HenselError(H::unit_derivative, "F'(a) is 0 mod p");

    LiftResult out{{p, k, a0 % target}, {}};
    auto& rep = out.report;
    std::uint64_t alpha = a0;
    unsigned prec = 1;
    rep.steps.push_back({0, alpha, val_mod(f.eval(alpha, target), p, k), 0});
    // Newton: precision doubles each round.
    while (prec < k) {
        prec = std::min(2 * prec, k);
        const auto m = prime_power(p, prec);
        const auto fx = f.eval(alpha, m);
        const auto inv = inverse_mod(f.hasse_eval(1, alpha, m), m);
        alpha = (alpha + m - mulmod(fx, inv, m)) % m;
        ++rep.iterations;
        rep.steps.push_back({rep.iterations, alpha, val_mod(f.eval(alpha, target), p, k), 0});
    }
    out.root.value = alpha % target;
    rep.residue = f.eval(out.root.value, target);
    rep.class_mod_p = out.root.value % p;
    if (rep.residue != 0 || rep.class_mod_p != a0) throw InternalError("Hensel lift failed certification");
    return out;
}

LiftResult hensel_lift_a3(const UnivariatePoly& f, std::int64_t a, unsigned k) {
    const auto p = f.p();
    if (p % 2 == 0) throw HenselError(H::odd_prime, "the p^2-level lift is only stated for odd p");
    if (k < 1) throw HenselError(H::precision, "target precision must be at least 1");
    // alpha_r is exact mod p^(r+1); work one digit beyond the target.
    const unsigned work = std::max(k + 1, 2u);
    const auto wm = prime_power(p, work);
    const auto p2 = p * p;
    const auto a0 = reduce(a, wm);

    if (f.eval(a0, p2) != 0) throw HenselError(H::root_mod_p2, "p^2 does not divide F(a)");
    const auto d1 = f.hasse_eval(1, a0, p2);
    if (d1 % p != 0 || d1 == 0) throw HenselError(H::derivative_exactly_p, "F'(a) does not have valuation exactly 1");
    if (mulmod(2, f.hasse_eval(2, a0, p), p) != 0) throw HenselError(H::second_derivative, "p does not divide F''(a)");

    LiftResult out{{p, k, 0}, {}};
    auto& rep = out.report;
    std::uint64_t alpha = a0;
    std::uint64_t pr = p;  // p^r
    auto record = [&](unsigned r) {
        const auto fv = f.eval(alpha, wm);
        const auto dv = f.hasse_eval(1, alpha, wm);
        rep.steps.push_back({r, alpha, val_mod(fv, p, work), val_mod(dv, p, work)});
        if (rep.steps.back().residue_valuation < std::min(r + 2, work) || rep.steps.back().derivative_valuation != 1) {
            throw InternalError("lifting invariant broken at iteration " + std::to_string(r));
        }
    };
    record(0);
    // F(alpha + p^r x) = F(alpha) + p^r x F'(alpha)  (mod p^(r+2)) for r >= 1.
    for (unsigned r = 1; r + 2 <= work; ++r) {
        const auto mod_next = pr * p2;  // p^(r+2)
        const auto fv = f.eval(alpha, mod_next);
        const auto fbar = fv / (pr * p) % p;
        const auto dbar = f.hasse_eval(1, alpha, p2) / p % p;
        const auto x = (p - fbar) % p * inverse_mod(dbar, p) % p;
        alpha = (alpha + mulmod(pr, x, wm)) % wm;
        pr *= p;
        ++rep.iterations;
        record(r);
    }
    const auto target = prime_power(p, k);
    out.root.value = alpha % target;
    rep.residue = f.eval(out.root.value, target);
    rep.class_mod_p = out.root.value % p;
    if (rep.residue != 0 || rep.class_mod_p != a0 % p) throw InternalError("p^2-level lift failed certification");
    return out;
}

UnivariatePoly restrict_to_coordinate(const Form& f, std::span<const std::uint64_t> t, unsigned i,
                                      std::uint64_t modulus) {
    if (t.size() != f.num_vars()) throw UsageError("point dimension does not match the form");
    if (i >= f.num_vars()) throw UsageError("coordinate index out of range");
    std::vector<std::uint64_t> c(f.degree() + 1, 0);
    for (const auto& term : f.terms()) {
        std::uint64_t v = term.coeff % modulus;
        for (unsigned j = 0; j < f.num_vars(); ++j) {
            if (j == i) continue;
            for (unsigned e = 0; e < term.exps[j]; ++e) v = mulmod(v, t[j] % modulus, modulus);
        }
        auto& slot = c[term.exps[i]];
        slot = (slot + v) % modulus;
    }
    std::vector<std::int64_t> coeffs(c.begin(), c.end());
    return UnivariatePoly(f.modulus().p(), std::move(coeffs));
}

namespace {

PointLift assemble(const Form& f, std::span<const std::uint64_t> t, unsigned i, const LiftResult& lr, unsigned k) {
    const auto p = f.modulus().p();
    const auto target = prime_power(p, k);
    PointLift out{{}, i, lr.report};
    for (unsigned j = 0; j < f.num_vars(); ++j) {
        out.point.push_back({p, k, j == i ? lr.root.value : t[j] % target});
    }
    // Certify on the whole form, not just the restriction.
    const auto lifted = values(out.point);
    if (evaluate(change_precision(f, k), lifted) != 0) throw InternalError("lifted point does not vanish mod p^k");
    out.report.residue = 0;
    return out;
}

}  // namespace

PointLift lift_nonsingular_point(const Form& f, std::span<const std::uint64_t> t, unsigned k) {
    if (f.modulus().k() != 1) throw UsageError("nonsingular lifting starts from a form over F_p");
    if (t.size() != f.num_vars()) throw UsageError("point dimension does not match the form");
    if (evaluate(f, t) != 0) throw HenselError(H::root_mod_p, "f(t) is not 0 mod p");
    const auto grad = gradient(f, t);
    unsigned i = 0;
    while (i < grad.size() && grad[i] == 0) ++i;
    if (i == grad.size()) throw HenselError(H::singular_point, "every partial derivative vanishes at t");
    const auto wm = prime_power(f.modulus().p(), std::max(k, 1u));
    auto lr = hensel_lift_simple(restrict_to_coordinate(f, t, i, wm), static_cast<std::int64_t>(t[i]), k);
    return assemble(f, t, i, lr, k);
}

PointLift lift_result3(const Form& f, const Result3Witness& witness, unsigned k) {
    if (f.modulus().k() != 2) throw UsageError("result-3 lifting starts from a form over Z/p^2");
    if (witness.point.size() != f.num_vars()) throw UsageError("point dimension does not match the form");
    if (!check_result3_witness(f, witness.point, witness.index)) {
        throw HenselError(H::witness, "the pair (t, i) is not a valid witness");
    }
    const auto p = f.modulus().p();
    if (k <= 2) {
        PointLift out{{}, witness.index, {}};
        const auto target = prime_power(p, k);
        for (auto x : witness.point) out.point.push_back({p, k, x % target});
        out.report.class_mod_p = witness.point[witness.index] % p;
        return out;
    }
    const auto wm = prime_power(p, k + 1);
    auto lr = hensel_lift_a3(restrict_to_coordinate(f, witness.point, witness.index, wm),
                             static_cast<std::int64_t>(witness.point[witness.index]), k);
    return assemble(f, witness.point, witness.index, lr, k);
}

Point values(const std::vector<PadicApprox>& point) {
    Point out;
    out.reserve(point.size());
    for (const auto& x : point) out.push_back(x.value);
    return out;
}

}  // namespace qpt
