#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "qpt/checked.hpp"
#include "qpt/errors.hpp"
#include "qpt/residue.hpp"

using namespace qpt;

TEST_CASE("primality by trial division") {
    std::vector<std::uint64_t> small;
    for (std::uint64_t n = 0; n < 60; ++n) {
        if (is_prime(n)) small.push_back(n);
    }
    CHECK(small == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59});
    CHECK(is_prime(999983));
    CHECK_FALSE(is_prime(999981));
}

TEST_CASE("modulus rejects bad input") {
    CHECK_THROWS_AS(Modulus(4), UsageError);
    CHECK_THROWS_AS(Modulus(1), UsageError);
    CHECK_THROWS_AS(Modulus(5, 0), UsageError);
    CHECK_THROWS_AS(Modulus(2, 63), UsageError);
    CHECK(Modulus(2, 62).m() == (std::uint64_t{1} << 62));
    CHECK(Modulus(5, 2).m() == 25);
}

TEST_CASE("ring operations agree with 128-bit arithmetic") {
    std::mt19937_64 rng(7);
    for (auto [p, k] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 1}, {5, 2}, {7, 3}, {13, 4}, {999983, 3}}) {
        Modulus mod(p, k);
        const auto m = mod.m();
        for (int it = 0; it < 500; ++it) {
            std::uint64_t a = rng() % m, b = rng() % m;
            CHECK(mod.add(a, b) == static_cast<std::uint64_t>((unsigned __int128)(a + (unsigned __int128)b) % m));
            CHECK(mod.sub(a, b) == (a + m - b) % m);
            CHECK(mod.mul(a, b) == static_cast<std::uint64_t>((unsigned __int128)a * b % m));
            const unsigned e = rng() % 40;
            CHECK(mod.pow(a, e) == oracle::powmod(a, e, m));
            std::int64_t s = static_cast<std::int64_t>(rng() >> 2) * ((it & 1) ? -1 : 1);
            const auto want = static_cast<std::uint64_t>(((s % (std::int64_t)m) + (std::int64_t)m) % (std::int64_t)m);
            CHECK(mod.reduce(s) == want);
        }
    }
}

TEST_CASE("inverses exist exactly for units") {
    Modulus mod(5, 2);
    for (std::uint64_t x = 0; x < 25; ++x) {
        Residue r(x, mod);
        if (x % 5 == 0) {
            CHECK_THROWS_AS(r.inverse(), DomainError);
        } else {
            CHECK((r * r.inverse()).value() == 1);
        }
    }
    CHECK(inverse_mod(3, 7) == 5);
    CHECK_THROWS_AS(inverse_mod(6, 9), DomainError);
}

TEST_CASE("valuation") {
    CHECK(valuation(std::int64_t{0}, 5).is_infinite());
    CHECK(valuation(std::int64_t{250}, 5).value == 3);
    CHECK(valuation(std::int64_t{-48}, 2).value == 4);
    CHECK(valuation(std::int64_t{7}, 3).value == 0);
    __int128 big = 1;
    for (int i = 0; i < 50; ++i) big *= 3;
    CHECK(valuation(big * 2, 3).value == 50);
}

TEST_CASE("property: valuation is additive on products") {
    std::mt19937_64 rng(11);
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13}) {
        for (int it = 0; it < 1000; ++it) {
            const std::int64_t a = static_cast<std::int64_t>(rng() % 2'000'000) - 1'000'000;
            const std::int64_t b = static_cast<std::int64_t>(rng() % 2'000'000) - 1'000'000;
            const auto va = valuation(a, p), vb = valuation(b, p);
            const auto vab = valuation(static_cast<__int128>(a) * b, p);
            if (va.is_infinite() || vb.is_infinite()) {
                CHECK(vab.is_infinite());
            } else {
                CHECK(vab.value == va.value + vb.value);
            }
        }
    }
}

TEST_CASE("fifth power classes over F_p") {
    for (std::uint64_t p : {2, 3, 7, 13, 17}) CHECK(fifth_power_classes(p) == std::vector<std::uint64_t>{1});
    CHECK(fifth_power_classes(11).size() == 5);
    CHECK(fifth_power_classes(31).size() == 5);
}

TEST_CASE("power classes over Z/25 are not trivial") {
    CHECK(power_classes(Modulus(5, 2), 5) == std::vector<std::uint64_t>{1, 2, 3, 6, 9});
    CHECK(power_classes(Modulus(5), 5) == std::vector<std::uint64_t>{1});
    CHECK(power_classes(Modulus(7), 3).size() == 3);
    CHECK(power_classes(Modulus(11), 3) == std::vector<std::uint64_t>{1});
}

TEST_CASE("property: power classes partition the unit group") {
    struct Case {
        std::uint64_t p;
        unsigned k, e;
    };
    for (auto [p, k, e] : std::vector<Case>{
             {2, 1, 5}, {3, 1, 5}, {5, 2, 5}, {7, 1, 3}, {11, 1, 5}, {13, 1, 3}, {13, 1, 5}, {31, 1, 5}, {3, 3, 3}, {2, 4, 2}}) {
        Modulus mod(p, k);
        const auto m = mod.m();
        const auto reps = power_classes(mod, e);
        std::set<std::uint64_t> powers;
        for (std::uint64_t x = 1; x < m; ++x) {
            if (mod.is_unit(x)) powers.insert(oracle::powmod(x, e, m));
        }
        std::size_t units = 0;
        for (std::uint64_t u = 1; u < m; ++u) {
            if (!mod.is_unit(u)) continue;
            ++units;
            int hits = 0;
            for (auto r : reps) {
                // u lies in r * (e-th powers) iff u * r^-1 is an e-th power
                if (powers.count(oracle::powmod(u, 1, m) * inverse_mod(r, m) % m)) ++hits;
            }
            CHECK(hits == 1);
        }
        CHECK(reps.size() * powers.size() == units);
        CHECK(std::is_sorted(reps.begin(), reps.end()));
    }
}

TEST_CASE("power tables") {
    Modulus mod(5, 2);
    auto tables = make_power_tables(5, mod);
    REQUIRE(tables.size() == 6);
    for (unsigned e = 0; e <= 5; ++e) {
        for (std::uint64_t x = 0; x < 25; ++x) CHECK(tables[e][x] == oracle::powmod(x, e, 25));
    }
}

TEST_CASE("checked 128-bit arithmetic") {
    const Int big = Int{1} << 100;
    CHECK(checked::add(big, big) == (Int{1} << 101));
    CHECK_THROWS_AS(checked::mul(big, big), OverflowError);
    CHECK_THROWS_AS(checked::add(big << 26, big << 26), OverflowError);
    CHECK(checked::mul(3, 4, 5) == 60);
    CHECK(checked::div_exact(91, 7) == 13);
    CHECK_THROWS_AS(checked::div_exact(92, 7), InternalError);
    CHECK(checked::binomial(10, 3) == 120);
    CHECK(checked::binomial(3, 5) == 0);
    CHECK(checked::binomial(5, -1) == 0);
    CHECK(checked::binomial(60, 30) == Int{118264581564861424LL});
    CHECK(to_string(-(Int{1} << 100)) == "-1267650600228229401496703205376");
    CHECK(parse_int("6792217044067") == Int{6792217044067LL});
    CHECK(parse_int(to_string(big * 7)) == big * 7);
    CHECK_THROWS_AS(parse_int("12x"), UsageError);
    CHECK_THROWS_AS(parse_int(""), UsageError);
}
