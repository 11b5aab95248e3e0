#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qpt/checked.hpp"

namespace qpt {

// Counts (r_d, ..., r_1) of forms of each degree, highest degree first, plus
// the subspace dimension m of the terminal convention V^(m)(0,...,0) = m.
struct DegreeProfile {
    std::vector<Int> r;
    Int m = 0;

    unsigned degree() const { return static_cast<unsigned>(r.size()); }
    // Count of forms of degree j (1 <= j <= degree()).
    Int count(unsigned j) const { return r[r.size() - j]; }

    friend bool operator==(const DegreeProfile&, const DegreeProfile&) = default;
};

// Parses "r_d,...,r_1".
DegreeProfile parse_profile(std::string_view text);
std::string to_string(const DegreeProfile& profile);

enum class Strategy { wooley, heath_brown, newresult, best };

std::string_view to_string(Strategy s);
// wooley | hb | newresult | best
Strategy parse_strategy(std::string_view name);

// Diagonal-form thresholds phi_d(p) for 2 <= d <= 5 and p <= 13.
std::optional<Int> phi_table(unsigned d, std::uint64_t p);
// Table value; d^2 for untabled p when fallback is set; UsageError otherwise.
Int phi(unsigned d, std::uint64_t p, bool fallback = false);

struct UBound {
    Int value;
    std::string clause;
};

// Best available bound for u(r;p) = V(r,0;p): minimum over every applicable clause.
UBound u_bound(Int r, std::uint64_t p);

struct StepResult {
    Int cost;
    DegreeProfile profile;
};

// One application of the diagonal reduction at the top degree:
// r'_d = r_d - 1, r'_j = sum_{i=j}^{d} r_i C(phi + i - j - 1, i - j).
// cost_free drops the leading phi addend.
StepResult diagonal_step(const DegreeProfile& profile, Int phi, bool cost_free = false);

struct QuarticClosed {
    Int cost;
    Int alpha;
    Int beta;
    Int gamma;
};

// a-fold diagonal reduction of V(a,b,c,d) in closed form; cost = a*phi.
QuarticClosed quartic_closed(Int a, Int b, Int c, Int d, Int phi);

enum class CubicVariant { wooley, heath_brown, newresult };

struct CubicClosed {
    Int cost;
    Int alpha;  // quadratic count
    Int beta;   // linear count
};

// V(a,b,c) <= cost + V(alpha, 0) + beta. psi is ignored by the newresult variant.
CubicClosed cubic_closed(Int a, Int b, Int c, Int psi, CubicVariant variant);

// V(r3,r2,r1) <= V(r3-1, r2+6(r3-1), r1+6r2+9r3) for p != 3.
DegreeProfile cubic_system_step(Int r3, Int r2, Int r1);

struct LinearSplit {
    Int linear;
    DegreeProfile rest;
};

LinearSplit strip_linear(const DegreeProfile& profile);

// Requirement (r3, r2, r1) guaranteeing an (s,t)-admissible set for a quintic form.
DegreeProfile admissible_requirement(Int s, Int t);

struct TraceStep {
    std::string lemma;
    DegreeProfile input;
    DegreeProfile output;
    Int constant = 0;
    std::string note;
    std::map<std::string, Int> params;
};

struct ReductionTrace {
    std::uint64_t p = 0;
    std::string strategy;
    std::vector<TraceStep> steps;
    Int bound = 0;
};

struct BoundResult {
    Int bound;
    ReductionTrace trace;
    std::vector<BoundResult> alternatives;  // other chains that were evaluated
};

// Reduce a profile of degree <= 5 to a number: degree-5 single steps, quartic and
// cubic closed forms, then the quadratic bound plus the linear count.
BoundResult evaluate_v(const DegreeProfile& profile, std::uint64_t p, Strategy strategy, bool phi_fallback = false);

// Recomputes every step from its input and parameters; returns the summed bound.
// Throws InternalError when a step does not reproduce or the chain is broken.
Int replay(const ReductionTrace& trace);

// Upper bound for v_5(p) from the admissible-set argument for the prime.
BoundResult v5_bound(std::uint64_t p);
// The plain diagonal-reduction chain from V(1,0,0,0,0).
BoundResult wooley_v5(std::uint64_t p);
// max over tabled p of min(wooley_v5, v5_bound), together with 25 for p >= 17.
Int overall_v5();

struct CorollaryBounds {
    BoundResult cubic_and_quadratic;  // V(1,1,0;p)
    BoundResult two_cubics;           // V(2,0,0;p)
};

CorollaryBounds corollary_bounds(std::uint64_t p);

inline constexpr std::uint64_t kTabledPrimes[] = {2, 3, 5, 7, 11, 13};

nlohmann::json int_to_json(Int v);
nlohmann::json to_json(const ReductionTrace& trace);
nlohmann::json to_json(const BoundResult& result);
// Aligned text rendering of a chain.
std::string render(const ReductionTrace& trace);

}  // namespace qpt
