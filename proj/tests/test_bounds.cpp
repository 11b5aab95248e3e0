#include <random>

#include "doctest.h"
#include "qpt/bounds.hpp"
#include "qpt/errors.hpp"

using namespace qpt;

namespace {

DegreeProfile prof(std::vector<Int> r) { return {std::move(r), 0}; }

Int rnd(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

TEST_CASE("phi table") {
    CHECK(phi(4, 2) == 15);
    CHECK(phi(5, 11) == 15);
    CHECK(phi(3, 7) == 6);
    CHECK(phi(2, 13) == 4);
    CHECK(phi(5, 17, true) == 25);
    CHECK_THROWS_AS(phi(5, 17), UsageError);
    CHECK_FALSE(phi_table(5, 17));
}

TEST_CASE("profiles and strategies parse") {
    CHECK(parse_profile("15,20,25") == prof({15, 20, 25}));
    CHECK(to_string(parse_profile("1,0,0,0,0")) == "(1,0,0,0,0)");
    CHECK_THROWS_AS(parse_profile("1,-2"), UsageError);
    CHECK_THROWS_AS(parse_profile("1,,2"), UsageError);
    CHECK_THROWS_AS(parse_profile(""), UsageError);
    CHECK(parse_strategy("hb") == Strategy::heath_brown);
    CHECK(parse_strategy("best") == Strategy::best);
    CHECK_THROWS_AS(parse_strategy("fast"), UsageError);
}

TEST_CASE("diagonal reduction step") {
    auto s = diagonal_step(prof({1, 0, 0, 0, 0}), phi(5, 11));
    CHECK(s.cost == 15);
    CHECK(s.profile == prof({0, 15, 120, 680, 3060}));
    auto q = diagonal_step(prof({1, 0}), 4);
    CHECK(q.cost == 4);
    CHECK(q.profile == prof({0, 4}));
    auto hb = diagonal_step(prof({1, 0, 0, 0, 0}), 15, true);
    CHECK(hb.cost == 0);
    CHECK(hb.profile == s.profile);
    CHECK_THROWS(diagonal_step(prof({0, 3, 2}), 4));
}

TEST_CASE("closed forms reproduce the printed values") {
    auto q = quartic_closed(15, 120, 680, 3060, 8);
    CHECK(q.cost == 120);
    CHECK(q.alpha == 1080);
    CHECK(q.beta == 91080);
    CHECK(q.gamma == 4410900);
    auto zero = quartic_closed(0, 5, 6, 7, 8);
    CHECK((zero.cost == 0 && zero.alpha == 5 && zero.beta == 6 && zero.gamma == 7));

    auto w = cubic_closed(1080, 91080, 4410900, 3, CubicVariant::wooley);
    CHECK(w.cost == 3240);
    CHECK(w.alpha == 1842300);
    CHECK(w.beta == 4082145300);
    auto hb = cubic_closed(15, 20, 25, 3, CubicVariant::heath_brown);
    CHECK(hb.cost == 0);
    CHECK(hb.alpha == 380);
    CHECK(hb.beta == 11725);
    auto nr = cubic_closed(10, 20, 25, 0, CubicVariant::newresult);
    CHECK(nr.alpha == 290);
    CHECK(nr.beta == 11980);
    auto nr2 = cubic_closed(2, 0, 0, 0, CubicVariant::newresult);
    CHECK((nr2.alpha == 6 && nr2.beta == 63));
}

TEST_CASE("cubic system step and helpers") {
    CHECK(cubic_system_step(1, 1, 0) == prof({0, 1, 15}));
    CHECK(cubic_system_step(2, 0, 0) == prof({1, 6, 18}));
    CHECK(cubic_system_step(1, 0, 0) == prof({0, 0, 9}));
    CHECK_THROWS(cubic_system_step(0, 1, 1));
    auto s = strip_linear(prof({15, 20, 25}));
    CHECK(s.linear == 25);
    CHECK(s.rest == prof({15, 20, 0}));
    CHECK(strip_linear(prof({1, 0})).linear == 0);
    CHECK(admissible_requirement(3, 0) == prof({15, 20, 25}));
    CHECK(admissible_requirement(4, 3) == prof({15, 50, 75}));
    CHECK(admissible_requirement(5, 4) == prof({30, 100, 175}));
    CHECK(admissible_requirement(3, 1) == prof({10, 20, 25}));
    CHECK(admissible_requirement(2, 5) == prof({0, 5, 5}));
}

TEST_CASE("quadratic bounds") {
    CHECK(u_bound(0, 5).value == 0);
    CHECK(u_bound(1, 7).value == 4);
    CHECK(u_bound(6, 7).value == 56);
    CHECK(u_bound(380, 2).value == 288784);
    CHECK(u_bound(500, 3).value == 499984);
    CHECK(u_bound(1495, 5).value == 4470036);
    CHECK(u_bound(290, 7).value == 168184);
    CHECK(u_bound(410, 11).value == 335372);
    CHECK(u_bound(290, 13).value == 167612);
    CHECK(u_bound(1842300, 11).value == Int{6788134895392LL});
    CHECK(u_bound(1842300, 7).value == Int{6788138579984LL});
    CHECK_FALSE(u_bound(410, 11).clause.empty());
}

TEST_CASE("property: u_bound is monotone in r") {
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17}) {
        Int prev = -1;
        for (Int r = 0; r <= 10000; ++r) {
            const auto v = u_bound(r, p).value;
            CHECK(v >= prev);
            if (v < prev) break;
            prev = v;
        }
    }
}

TEST_CASE("property: quartic closed form equals iterated steps") {
    std::mt19937_64 rng(1);
    for (int it = 0; it < 1200; ++it) {
        const Int a = rnd(rng, 0, 20), b = rnd(rng, 0, 1'000'000), c = rnd(rng, 0, 1'000'000), d = rnd(rng, 0, 1'000'000);
        const Int ph = phi(4, kTabledPrimes[rng() % 6]);
        auto q = quartic_closed(a, b, c, d, ph);
        DegreeProfile cur = prof({a, b, c, d});
        Int cost = 0;
        while (cur.r[0] > 0) {
            auto s = diagonal_step(cur, ph);
            cost += s.cost;
            cur = s.profile;
        }
        CHECK(q.cost == cost);
        CHECK(cur == prof({0, q.alpha, q.beta, q.gamma}));
    }
}

TEST_CASE("property: cubic closed forms equal iterated steps") {
    std::mt19937_64 rng(2);
    for (int it = 0; it < 1200; ++it) {
        const Int a = rnd(rng, 0, 20), b = rnd(rng, 0, 1'000'000), c = rnd(rng, 0, 1'000'000);
        const Int psi = phi(3, kTabledPrimes[rng() % 6]);
        DegreeProfile cur = prof({a, b, c});
        Int cost = 0;
        while (cur.r[0] > 0) {
            auto s = diagonal_step(cur, psi);
            cost += s.cost;
            cur = s.profile;
        }
        auto w = cubic_closed(a, b, c, psi, CubicVariant::wooley);
        CHECK(w.cost == cost);
        CHECK(cur == prof({0, w.alpha, w.beta}));
        auto hb = cubic_closed(a, b, c, psi, CubicVariant::heath_brown);
        CHECK(hb.cost == 0);
        CHECK((hb.alpha == w.alpha && hb.beta == w.beta));

        auto n = cubic_closed(a, b, c, 0, CubicVariant::newresult);
        DegreeProfile nc = prof({a, b, c});
        while (nc.r[0] > 0) nc = cubic_system_step(nc.r[0], nc.r[1], nc.r[2]);
        CHECK(n.cost == 0);
        CHECK(nc == prof({0, n.alpha, n.beta}));
    }
}

TEST_CASE("golden bounds") {
    CHECK(v5_bound(2).bound == 300509);
    CHECK(v5_bound(3).bound == 520329);
    CHECK(v5_bound(5).bound == 4562911);
    CHECK(v5_bound(7).bound == 180164);
    CHECK(v5_bound(11).bound == 348497);
    CHECK(v5_bound(13).bound == 179592);
    CHECK(v5_bound(17).bound == 25);
    CHECK(wooley_v5(11).bound == Int{6792217044067LL});
    CHECK(overall_v5() == 4562911);
    auto c = corollary_bounds(7);
    CHECK(c.cubic_and_quadratic.bound == 19);
    CHECK(c.two_cubics.bound == 119);
    CHECK_THROWS_AS(corollary_bounds(3), UsageError);
}

TEST_CASE("the p=5 alternate requirement is dominated") {
    auto r = v5_bound(5);
    REQUIRE(r.alternatives.size() == 1);
    CHECK(r.alternatives[0].bound == 2707209);
    CHECK(evaluate_v(prof({25, 175, 350}), 5, Strategy::heath_brown).bound == 2707209);
}

TEST_CASE("chains agree with the single-step oracle") {
    // values from tests/oracles/bound_chains.py
    const std::vector<std::tuple<std::uint64_t, Int, Int>> table = {
        {2, 19541885104LL, 19541884304LL},     {3, 3288506251LL, 3288505666LL},
        {5, 283547035189LL, 283547033642LL},   {7, 6951211951LL, 6951211096LL},
        {11, 6792217044067LL, 6792217040692LL}, {13, 30123274667LL, 30123273432LL},
    };
    for (auto [p, wooley, hb] : table) {
        CHECK(wooley_v5(p).bound == wooley);
        CHECK(evaluate_v(prof({1, 0, 0, 0, 0}), p, Strategy::wooley).bound == wooley);
        CHECK(evaluate_v(prof({1, 0, 0, 0, 0}), p, Strategy::heath_brown).bound == hb);
    }
    CHECK(evaluate_v(prof({10, 20, 25}), 7, Strategy::heath_brown).bound == 259244);
    CHECK(evaluate_v(prof({15, 20, 25}), 2, Strategy::newresult).bound == 884429);
}

TEST_CASE("intermediates of the p=11 Wooley chain") {
    auto r = wooley_v5(11);
    const auto& steps = r.trace.steps;
    REQUIRE(steps.size() >= 4);
    CHECK(steps[0].lemma == "diagonal_step");
    CHECK(steps[0].constant == 15);
    bool quartic = false, cubic = false, quad = false;
    for (const auto& s : steps) {
        if (s.lemma == "quartic_closed") {
            quartic = true;
            CHECK(s.input == prof({15, 120, 680, 3060}));
            CHECK(s.output == prof({1080, 91080, 4410900}));
            CHECK(s.constant == 120);
        }
        if (s.lemma == "cubic_closed") {
            cubic = true;
            CHECK(s.output == prof({1842300, 4082145300LL}));
            CHECK(s.constant == 3240);
        }
        if (s.lemma == "quadratic_bound") {
            quad = true;
            CHECK(s.constant == Int{6788134895392LL});
        }
    }
    CHECK((quartic && cubic && quad));
}

TEST_CASE("strategy handling") {
    CHECK_THROWS_AS(evaluate_v(prof({1, 0, 0}), 3, Strategy::newresult), UsageError);
    auto best = evaluate_v(prof({10, 20, 25}), 7, Strategy::best);
    CHECK(best.bound == 180164);
    CHECK(best.trace.strategy == "best:newresult");
    CHECK(best.alternatives.size() == 2);
    auto best3 = evaluate_v(prof({15, 20, 25}), 3, Strategy::best);
    CHECK(best3.alternatives.size() == 1);
    CHECK(evaluate_v(prof({1, 1, 0}), 7, Strategy::newresult).bound == 19);
    CHECK(evaluate_v(prof({2, 0, 0}), 7, Strategy::newresult).bound == 119);
    CHECK(evaluate_v(prof({0, 0, 7}), 7, Strategy::wooley).bound == 7);
    CHECK(evaluate_v(prof({1, 0}), 7, Strategy::wooley).bound == 4);
    CHECK(evaluate_v(prof({3}), 7, Strategy::wooley).bound == 3);
    CHECK(evaluate_v(DegreeProfile{{0, 0}, 4}, 7, Strategy::wooley).bound == 4);
    CHECK_THROWS_AS(evaluate_v(DegreeProfile{{1, 0}, 4}, 7, Strategy::wooley), UsageError);
    CHECK_THROWS_AS(evaluate_v(prof({1, 0, 0, 0, 0, 0}), 7, Strategy::wooley), UsageError);
    CHECK_THROWS_AS(evaluate_v(prof({1, 0, 0, 0, 0}), 17, Strategy::wooley), UsageError);
    CHECK(evaluate_v(prof({1, 0, 0, 0, 0}), 17, Strategy::wooley, true).bound > 0);
    CHECK_THROWS_AS(evaluate_v(prof({1, 0}), 9, Strategy::wooley), UsageError);
}

TEST_CASE("overflow is reported, never wrapped") {
    CHECK_THROWS_AS(evaluate_v(prof({1'000'000'000'000LL, 0, 0, 0, 0}), 11, Strategy::wooley), OverflowError);
    CHECK_THROWS_AS(u_bound(Int{1} << 70, 11), OverflowError);
}

TEST_CASE("property: Heath-Brown never exceeds Wooley") {
    std::mt19937_64 rng(3);
    for (int it = 0; it < 400; ++it) {
        const unsigned d = 1 + rng() % 5;
        std::vector<Int> r(d);
        for (auto& x : r) x = rnd(rng, 0, d >= 4 ? 3 : 200);
        const auto p = kTabledPrimes[rng() % 6];
        const auto hb = evaluate_v(prof(r), p, Strategy::heath_brown).bound;
        const auto w = evaluate_v(prof(r), p, Strategy::wooley).bound;
        CHECK(hb <= w);
    }
}

TEST_CASE("property: traces replay to their bound") {
    std::mt19937_64 rng(4);
    for (auto p : kTabledPrimes) {
        CHECK(replay(v5_bound(p).trace) == v5_bound(p).bound);
        CHECK(replay(wooley_v5(p).trace) == wooley_v5(p).bound);
    }
    for (int it = 0; it < 300; ++it) {
        const unsigned d = 1 + rng() % 5;
        std::vector<Int> r(d);
        for (auto& x : r) x = rnd(rng, 0, d >= 4 ? 3 : 500);
        const auto p = kTabledPrimes[rng() % 6];
        for (auto s : {Strategy::wooley, Strategy::heath_brown, Strategy::best}) {
            auto res = evaluate_v(prof(r), p, s);
            CHECK(replay(res.trace) == res.bound);
        }
    }
    auto tampered = wooley_v5(7).trace;
    tampered.steps[1].constant += 1;
    CHECK_THROWS_AS(replay(tampered), InternalError);
    auto wrong = wooley_v5(7).trace;
    wrong.bound -= 1;
    CHECK_THROWS_AS(replay(wrong), InternalError);
}

TEST_CASE("trace serialization") {
    auto r = wooley_v5(11);
    auto j = to_json(r);
    CHECK(j.at("bound").get<std::int64_t>() == 6792217044067LL);
    CHECK(j.at("trace").at("steps").size() == r.trace.steps.size());
    CHECK(int_to_json(Int{1} << 100).is_string());
    CHECK(render(r.trace).find("6788134895392") != std::string::npos);
}
