#include "qpt/bounds.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "qpt/errors.hpp"
#include "qpt/residue.hpp"

namespace qpt {

namespace ck = checked;

namespace {

struct PhiRow {
    std::uint64_t p;
    Int phi[4];  // phi_2 .. phi_5
};

constexpr PhiRow kPhiTable[] = {
    {2, {4, 3, 15, 5}},  {3, {4, 4, 8, 5}},   {5, {4, 3, 16, 7}},
    {7, {4, 6, 8, 5}},   {11, {4, 3, 8, 15}}, {13, {4, 6, 12, 5}},
};

DegreeProfile profile(std::initializer_list<Int> r, Int m = 0) { return {std::vector<Int>(r), m}; }

DegreeProfile tail(const DegreeProfile& p) {
    return {std::vector<Int>(p.r.begin() + 1, p.r.end()), p.m};
}

void require_prime(std::uint64_t p) {
    if (!is_prime(p)) throw UsageError(std::to_string(p) + " is not prime");
}

Int mod3(Int r) { return r % 3; }

}  // namespace

DegreeProfile parse_profile(std::string_view text) {
    DegreeProfile out;
    std::string cur;
    auto flush = [&] {
        Int v = parse_int(cur);
        if (v < 0) throw UsageError("profile entries must be non-negative");
        out.r.push_back(v);
        cur.clear();
    };
    for (char c : text) {
        if (c == ',') {
            flush();
        } else if (c != '(' && c != ')') {
            cur.push_back(c);
        }
    }
    flush();
    return out;
}

std::string to_string(const DegreeProfile& profile) {
    if (profile.r.empty()) return "()";
    std::string out = "(";
    for (std::size_t i = 0; i < profile.r.size(); ++i) {
        if (i) out += ",";
        out += to_string(profile.r[i]);
    }
    out += ")";
    if (profile.m != 0) out += "^(m=" + to_string(profile.m) + ")";
    return out;
}

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::wooley: return "wooley";
        case Strategy::heath_brown: return "hb";
        case Strategy::newresult: return "newresult";
        case Strategy::best: return "best";
    }
    return "?";
}

Strategy parse_strategy(std::string_view name) {
    if (name == "wooley") return Strategy::wooley;
    if (name == "hb" || name == "heath_brown" || name == "heathbrown") return Strategy::heath_brown;
    if (name == "newresult") return Strategy::newresult;
    if (name == "best") return Strategy::best;
    throw UsageError("unknown strategy '" + std::string(name) + "'");
}

std::optional<Int> phi_table(unsigned d, std::uint64_t p) {
    if (d < 2 || d > 5) return std::nullopt;
    for (const auto& row : kPhiTable) {
        if (row.p == p) return row.phi[d - 2];
    }
    return std::nullopt;
}

Int phi(unsigned d, std::uint64_t p, bool fallback) {
    if (d < 2 || d > 5) throw UsageError("phi_d is only used for 2 <= d <= 5");
    if (auto v = phi_table(d, p)) return *v;
    if (fallback) return static_cast<Int>(d) * d;
    throw UsageError("phi_" + std::to_string(d) + "(" + std::to_string(p) + ") is not tabled");
}

UBound u_bound(Int r, std::uint64_t p) {
    if (r < 0) throw UsageError("u(r;p) needs r >= 0");
    std::vector<UBound> cands;
    const Int sq2 = ck::mul(2, r, r);
    switch (static_cast<int>(std::min<Int>(r, 7))) {
        case 0: cands.push_back({0, "u(0)=0"}); break;
        case 1: cands.push_back({4, "u(1)=4"}); break;
        case 2: cands.push_back({8, "u(2)=8"}); break;
        case 3: cands.push_back({16, "u(3)<=16"}); break;
        case 4: cands.push_back({24, "u(4)<=24"}); break;
        case 5: cands.push_back({40, "u(5)<=40"}); break;
        case 6: cands.push_back({56, "u(6)<=56"}); break;
        default: break;
    }
    if (r >= 8 && r % 2 == 0) cands.push_back({ck::sub(sq2, 16), "2r^2-16 (even r>=8)"});
    if (r >= 7 && r % 2 == 1) cands.push_back({ck::sub(sq2, 14), "2r^2-14 (odd r>=7)"});
    if (p >= 11) {
        if (r == 3) cands.push_back({12, "u(3)=12 (p>=11)"});
        if (r == 4) cands.push_back({24, "u(4)<=24 (p>=11)"});
        if (r == 5) cands.push_back({32, "u(5)<=32 (p>=11)"});
        if (r == 6) cands.push_back({56, "u(6)<=56 (p>=11)"});
        const Int base = ck::sub(sq2, ck::mul(2, r));
        if (r >= 7 && mod3(r) == 1) cands.push_back({ck::sub(base, 12), "2r^2-2r-12 (r=1 mod 3, r>=7, p>=11)"});
        if (r >= 8 && mod3(r) == 2) cands.push_back({ck::sub(base, 8), "2r^2-2r-8 (r=2 mod 3, r>=8, p>=11)"});
        if (r >= 9 && mod3(r) == 0) cands.push_back({ck::sub(base, 8), "2r^2-2r-8 (r=0 mod 3, r>=9, p>=11)"});
    }
    auto best = cands.front();
    for (const auto& c : cands) {
        if (c.value < best.value) best = c;
    }
    return best;
}

StepResult diagonal_step(const DegreeProfile& prof, Int phi, bool cost_free) {
    const unsigned d = prof.degree();
    if (d < 2) throw UsageError("diagonal reduction needs degree >= 2");
    if (prof.count(d) <= 0) throw UsageError("diagonal reduction needs r_d > 0");
    DegreeProfile out{std::vector<Int>(d, 0), prof.m};
    auto at = [d](unsigned deg) { return d - deg; };
    out.r[at(d)] = prof.count(d) - 1;
    for (unsigned j = 1; j < d; ++j) {
        Int acc = 0;
        for (unsigned i = j; i <= d; ++i) {
            acc = ck::add(acc, ck::mul(prof.count(i), ck::binomial(phi + i - j - 1, i - j)));
        }
        out.r[at(j)] = acc;
    }
    return {cost_free ? Int{0} : phi, std::move(out)};
}

QuarticClosed quartic_closed(Int a, Int b, Int c, Int d, Int f) {
    if (a < 0) throw UsageError("quartic count must be non-negative");
    using namespace ck;
    const Int am1 = a - 1;
    const Int alpha = add(b, div_exact(mul(f, a, a + 1), 2));

    Int nb = mul(6, f, f + 1, a, a);
    nb = sub(nb, mul(3, f, a, am1));
    nb = add(nb, mul(f, f, a, am1, add(mul(4, a), 1)));
    const Int beta = add(add(c, mul(f, a, b)), div_exact(nb, 12));

    // 24 * (gamma - d), term by term
    const Int inner1 = add(add(add(mul(2, a), mul(3, b)), mul(6, c)), add(mul(3, f, add(a, b)), mul(f, f, a)));
    const Int inner2 = add(add(-2, mul(6, f, add(a, b))), mul(3, f, f, a));
    Int ng = mul(4, f, a, inner1);
    ng = add(ng, mul(2, f, a, am1, inner2));
    ng = add(ng, mul(2, f, f, a, am1, sub(mul(2, a), 1), sub(mul(f, a), 1)));
    ng = sub(ng, mul(f, f, f, a, a, am1, am1));
    const Int gamma = add(d, div_exact(ng, 24));

    return {mul(a, f), alpha, beta, gamma};
}

CubicClosed cubic_closed(Int a, Int b, Int c, Int psi, CubicVariant variant) {
    if (a < 0) throw UsageError("cubic count must be non-negative");
    using namespace ck;
    if (variant == CubicVariant::newresult) {
        const Int alpha = add(b, mul(3, a, a - 1));
        Int beta = add(c, mul(3, a, add(mul(2, b), mul(3, a))));
        beta = add(beta, div_exact(mul(a, a - 1, sub(mul(24, a), 21)), 2));
        return {0, alpha, beta};
    }
    const Int alpha = add(b, div_exact(mul(psi, a, a + 1), 2));
    Int nb = mul(4, psi, psi, a, sub(mul(a, a), 1));
    nb = add(nb, mul(3, psi, psi + 1, a, a + 1));
    const Int beta = add(add(c, mul(psi, a, b)), div_exact(nb, 12));
    const Int cost = variant == CubicVariant::wooley ? mul(a, psi) : Int{0};
    return {cost, alpha, beta};
}

DegreeProfile cubic_system_step(Int r3, Int r2, Int r1) {
    if (r3 <= 0) throw UsageError("the cubic-system reduction needs r3 > 0");
    using namespace ck;
    return profile({r3 - 1, add(r2, mul(6, r3 - 1)), add(add(r1, mul(6, r2)), mul(9, r3))});
}

LinearSplit strip_linear(const DegreeProfile& prof) {
    if (prof.r.empty()) return {0, prof};
    LinearSplit out{prof.r.back(), prof};
    out.rest.r.back() = 0;
    return out;
}

DegreeProfile admissible_requirement(Int s, Int t) {
    if (s < 2 || t < 0) throw UsageError("admissible sets need s >= 2 and t >= 0");
    using namespace ck;
    const Int r3 = mul(5, std::max<Int>(sub(binomial(s, 2), t), 0));
    return profile({r3, mul(5, binomial(s + 1, 3)), mul(5, binomial(s + 2, 4))});
}

namespace {

CubicVariant variant_for(Strategy s) {
    switch (s) {
        case Strategy::wooley: return CubicVariant::wooley;
        case Strategy::heath_brown: return CubicVariant::heath_brown;
        case Strategy::newresult: return CubicVariant::newresult;
        case Strategy::best: break;
    }
    throw InternalError("no single cubic variant for the best strategy");
}

// Applies one chain; all steps recorded.
BoundResult run_chain(const DegreeProfile& start, std::uint64_t p, Strategy strategy, bool fallback) {
    ReductionTrace trace{p, std::string(to_string(strategy)), {}, 0};
    const bool cost_free = strategy != Strategy::wooley;
    DegreeProfile cur = start;
    auto push = [&](std::string lemma, DegreeProfile out, Int constant, std::string note = {},
                    std::map<std::string, Int> params = {}) {
        trace.steps.push_back({std::move(lemma), cur, out, constant, std::move(note), std::move(params)});
        cur = std::move(out);
    };
    const Int flag = cost_free ? 1 : 0;

    while (cur.degree() >= 3) {
        const unsigned d = cur.degree();
        if (cur.r[0] == 0) {
            push("drop_empty_degree", tail(cur), 0);
            continue;
        }
        if (d == 5) {
            const Int ph = phi(5, p, fallback);
            auto step = diagonal_step(cur, ph, cost_free);
            push("diagonal_step", std::move(step.profile), step.cost, {}, {{"phi", ph}, {"cost_free", flag}});
        } else if (d == 4) {
            const Int ph = phi(4, p, fallback);
            auto q = quartic_closed(cur.r[0], cur.r[1], cur.r[2], cur.r[3], ph);
            push("quartic_closed", {{q.alpha, q.beta, q.gamma}, cur.m}, cost_free ? Int{0} : q.cost, {},
                 {{"phi", ph}, {"cost_free", flag}});
        } else {
            const auto variant = variant_for(strategy);
            const Int psi = variant == CubicVariant::newresult ? Int{0} : phi(3, p, fallback);
            auto c = cubic_closed(cur.r[0], cur.r[1], cur.r[2], psi, variant);
            std::map<std::string, Int> params{{"variant", static_cast<Int>(variant)}};
            if (variant != CubicVariant::newresult) params["psi"] = psi;
            push("cubic_closed", {{c.alpha, c.beta}, cur.m}, c.cost, {}, std::move(params));
        }
    }
    auto split = strip_linear(cur);
    if (split.linear != 0 || cur.degree() >= 1) push("strip_linear", split.rest, split.linear);
    if (cur.degree() == 2 && cur.r[0] != 0) {
        auto u = u_bound(cur.r[0], p);
        push("quadratic_bound", DegreeProfile{}, u.value, u.clause);
    } else {
        const Int m = cur.m;
        push("terminal", DegreeProfile{}, m, "V^(m)(0,...,0) = m");
    }
    Int total = 0;
    for (const auto& s : trace.steps) total = ck::add(total, s.constant);
    trace.bound = total;
    return {total, std::move(trace), {}};
}

}  // namespace

BoundResult evaluate_v(const DegreeProfile& prof, std::uint64_t p, Strategy strategy, bool phi_fallback) {
    require_prime(p);
    if (prof.r.empty()) throw UsageError("empty degree profile");
    if (prof.degree() > 5) throw UsageError("degree profiles above degree 5 are not supported");
    for (auto v : prof.r) {
        if (v < 0) throw UsageError("profile entries must be non-negative");
    }
    if (prof.m < 0) throw UsageError("subspace dimension must be non-negative");
    if (prof.m > 0) {
        for (std::size_t i = 0; i + 1 < prof.r.size(); ++i) {
            if (prof.r[i] != 0) throw UsageError("m > 0 is only supported for purely linear profiles");
        }
    }
    if (strategy == Strategy::newresult && p == 3) throw UsageError("the cubic-system reduction needs p != 3");

    if (strategy != Strategy::best) return run_chain(prof, p, strategy, phi_fallback);

    std::vector<Strategy> order{Strategy::heath_brown};
    if (p != 3) order.push_back(Strategy::newresult);
    order.push_back(Strategy::wooley);
    std::vector<BoundResult> all;
    for (auto s : order) all.push_back(run_chain(prof, p, s, phi_fallback));
    std::size_t win = 0;
    for (std::size_t i = 1; i < all.size(); ++i) {
        if (all[i].bound < all[win].bound) win = i;
    }
    BoundResult out = all[win];
    out.trace.strategy = "best:" + all[win].trace.strategy;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (i != win) out.alternatives.push_back(std::move(all[i]));
    }
    return out;
}

Int replay(const ReductionTrace& trace) {
    Int total = 0;
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const auto& s = trace.steps[k];
        if (k > 0 && !(trace.steps[k - 1].output == s.input)) {
            throw InternalError("trace chain broken before step " + std::to_string(k));
        }
        auto param = [&](const char* key) {
            auto it = s.params.find(key);
            if (it == s.params.end()) throw InternalError("trace step lacks parameter " + std::string(key));
            return it->second;
        };
        DegreeProfile out;
        Int constant = 0;
        if (s.lemma == "diagonal_step") {
            auto r = diagonal_step(s.input, param("phi"), param("cost_free") != 0);
            out = r.profile;
            constant = r.cost;
        } else if (s.lemma == "quartic_closed") {
            const auto& r = s.input.r;
            auto q = quartic_closed(r.at(0), r.at(1), r.at(2), r.at(3), param("phi"));
            out = {{q.alpha, q.beta, q.gamma}, s.input.m};
            constant = param("cost_free") != 0 ? Int{0} : q.cost;
        } else if (s.lemma == "cubic_closed") {
            const auto& r = s.input.r;
            const auto variant = static_cast<CubicVariant>(static_cast<int>(param("variant")));
            const Int psi = variant == CubicVariant::newresult ? Int{0} : param("psi");
            auto c = cubic_closed(r.at(0), r.at(1), r.at(2), psi, variant);
            out = {{c.alpha, c.beta}, s.input.m};
            constant = c.cost;
        } else if (s.lemma == "cubic_system_step") {
            const auto& r = s.input.r;
            out = cubic_system_step(r.at(0), r.at(1), r.at(2));
            out.m = s.input.m;
        } else if (s.lemma == "drop_empty_degree") {
            if (s.input.r.empty() || s.input.r[0] != 0) throw InternalError("dropping a nonempty degree");
            out = tail(s.input);
        } else if (s.lemma == "strip_linear") {
            auto split = strip_linear(s.input);
            out = split.rest;
            constant = split.linear;
        } else if (s.lemma == "quadratic_bound") {
            if (s.input.degree() != 2 || s.input.r[1] != 0) throw InternalError("quadratic bound on a non-quadratic profile");
            constant = u_bound(s.input.r[0], trace.p).value;
        } else if (s.lemma == "terminal") {
            for (auto v : s.input.r) {
                if (v != 0) throw InternalError("terminal step on a nonzero profile");
            }
            constant = s.input.m;
        } else if (s.lemma == "admissible_requirement") {
            out = admissible_requirement(param("s"), param("t"));
        } else if (s.lemma == "known_value") {
            constant = s.constant;
        } else {
            throw InternalError("unknown trace step '" + s.lemma + "'");
        }
        if (!(out == s.output) || constant != s.constant) {
            throw InternalError("trace step " + std::to_string(k) + " (" + s.lemma + ") does not reproduce");
        }
        total = ck::add(total, constant);
    }
    if (!trace.steps.empty() && !trace.steps.back().output.r.empty()) throw InternalError("trace does not terminate");
    if (total != trace.bound) throw InternalError("trace constants do not sum to the stored bound");
    return total;
}

namespace {

BoundResult admissible_chain(std::uint64_t p, Int s, Int t, Strategy strategy) {
    const auto start = profile({1, 0, 0, 0, 0});
    const auto req = admissible_requirement(s, t);
    auto chain = evaluate_v(req, p, strategy);
    TraceStep head{"admissible_requirement", start, req, 0,
                   "(" + to_string(s) + "," + to_string(t) + ")-admissible set", {{"s", s}, {"t", t}}};
    chain.trace.steps.insert(chain.trace.steps.begin(), std::move(head));
    return chain;
}

}  // namespace

BoundResult v5_bound(std::uint64_t p) {
    require_prime(p);
    switch (p) {
        case 2:
        case 3: return admissible_chain(p, 3, 0, Strategy::heath_brown);
        case 7:
        case 13: return admissible_chain(p, 3, 1, Strategy::newresult);
        case 11: return admissible_chain(p, 4, 3, Strategy::heath_brown);
        case 5: {
            auto main = admissible_chain(p, 5, 4, Strategy::heath_brown);
            // The sixth vector of the construction needs V(25,175,350); it is dominated.
            auto sixth = evaluate_v(profile({25, 175, 350}), p, Strategy::heath_brown);
            for (auto& step : main.trace.steps) {
                if (step.lemma == "quadratic_bound") step.note += "; u(1495) = 2*1495^2-14";
            }
            if (sixth.bound > main.bound) std::swap(main, sixth);
            main.alternatives.push_back(std::move(sixth));
            return main;
        }
        default: break;
    }
    ReductionTrace trace{p, "known", {}, 25};
    trace.steps.push_back({"known_value", profile({1, 0, 0, 0, 0}), DegreeProfile{}, 25, "v5(p) = 25 for p >= 17", {}});
    return {25, std::move(trace), {}};
}

BoundResult wooley_v5(std::uint64_t p) {
    require_prime(p);
    if (!phi_table(5, p)) throw UsageError("the diagonal-reduction chain needs a tabled prime");
    return evaluate_v(profile({1, 0, 0, 0, 0}), p, Strategy::wooley);
}

Int overall_v5() {
    Int worst = 25;
    for (auto p : kTabledPrimes) worst = std::max(worst, std::min(wooley_v5(p).bound, v5_bound(p).bound));
    return worst;
}

CorollaryBounds corollary_bounds(std::uint64_t p) {
    require_prime(p);
    if (p == 3) throw UsageError("the cubic-system reduction needs p != 3");
    auto chain = [p](DegreeProfile start) {
        ReductionTrace trace{p, "newresult", {}, 0};
        DegreeProfile cur = std::move(start);
        auto push = [&](std::string lemma, DegreeProfile out, Int constant, std::string note = {}) {
            trace.steps.push_back({std::move(lemma), cur, out, constant, std::move(note), {}});
            cur = std::move(out);
        };
        while (cur.r[0] > 0) push("cubic_system_step", cubic_system_step(cur.r[0], cur.r[1], cur.r[2]), 0);
        push("drop_empty_degree", tail(cur), 0);
        auto split = strip_linear(cur);
        push("strip_linear", split.rest, split.linear);
        auto u = u_bound(cur.r[0], p);
        push("quadratic_bound", DegreeProfile{}, u.value, u.clause);
        for (const auto& s : trace.steps) trace.bound = ck::add(trace.bound, s.constant);
        return BoundResult{trace.bound, std::move(trace), {}};
    };
    return {chain(profile({1, 1, 0})), chain(profile({2, 0, 0}))};
}

nlohmann::json int_to_json(Int v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
        return static_cast<std::int64_t>(v);
    }
    return to_string(v);
}

namespace {

nlohmann::json profile_json(const DegreeProfile& prof) {
    auto arr = nlohmann::json::array();
    for (auto v : prof.r) arr.push_back(int_to_json(v));
    return arr;
}

}  // namespace

nlohmann::json to_json(const ReductionTrace& trace) {
    auto steps = nlohmann::json::array();
    for (const auto& s : trace.steps) {
        nlohmann::json params = nlohmann::json::object();
        for (const auto& [k, v] : s.params) params[k] = int_to_json(v);
        nlohmann::json step{{"lemma", s.lemma},
                            {"input", profile_json(s.input)},
                            {"output", profile_json(s.output)},
                            {"constant", int_to_json(s.constant)},
                            {"note", s.note},
                            {"params", params}};
        if (s.input.m != 0) step["m"] = int_to_json(s.input.m);
        steps.push_back(std::move(step));
    }
    return {{"p", trace.p}, {"strategy", trace.strategy}, {"steps", steps}, {"bound", int_to_json(trace.bound)}};
}

nlohmann::json to_json(const BoundResult& result) {
    nlohmann::json out{{"bound", int_to_json(result.bound)}, {"trace", to_json(result.trace)}};
    if (!result.alternatives.empty()) {
        auto alts = nlohmann::json::array();
        for (const auto& a : result.alternatives) alts.push_back(to_json(a));
        out["alternatives"] = alts;
    }
    return out;
}

std::string render(const ReductionTrace& trace) {
    std::ostringstream os;
    os << "p = " << trace.p << "  strategy = " << trace.strategy << '\n';
    std::size_t wl = 0, wi = 0, wo = 0;
    for (const auto& s : trace.steps) {
        wl = std::max(wl, s.lemma.size());
        wi = std::max(wi, to_string(s.input).size());
        wo = std::max(wo, to_string(s.output).size());
    }
    for (const auto& s : trace.steps) {
        os << "  " << std::left << std::setw(static_cast<int>(wl)) << s.lemma << "  V" << std::setw(static_cast<int>(wi))
           << to_string(s.input) << " <= " << std::right << std::setw(14) << to_string(s.constant) << " + V"
           << std::left << std::setw(static_cast<int>(wo)) << to_string(s.output);
        if (!s.note.empty()) os << "  [" << s.note << "]";
        os << '\n';
    }
    os << "  bound = " << to_string(trace.bound) << '\n';
    return os.str();
}

}  // namespace qpt
