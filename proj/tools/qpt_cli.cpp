#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qpt/bounds.hpp"
#include "qpt/errors.hpp"
#include "qpt/form_io.hpp"
#include "qpt/hensel.hpp"
#include "qpt/search.hpp"
#include "qpt/verify.hpp"

namespace {

using nlohmann::json;

enum Exit { kOk = 0, kAbsent = 1, kUsage = 2, kInternal = 3 };

// Flat key = value file; keys are long flag names without dashes.
void apply_config(CLI::App& sub, const std::string& path) {
    if (path.empty()) return;
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_file(path);
    } catch (const CLI::FileError& e) {
        throw qpt::UsageError(e.what());
    }
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue;
        if (!item.parents.empty()) throw qpt::UsageError("config file must be flat; found section for '" + item.name + "'");
        auto* opt = sub.get_option_no_throw("--" + item.name);
        if (!opt || item.name == "config") throw qpt::UsageError("unknown config key '" + item.name + "'");
        if (opt->count() > 0) continue;
        for (const auto& in : item.inputs) opt->add_result(in);
        opt->run_callback();
    }
}

qpt::Point parse_point(const std::string& text) {
    qpt::Point out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto first = part.find_first_not_of(" \t()");
        auto last = part.find_last_not_of(" \t()");
        if (first == std::string::npos) throw qpt::UsageError("empty coordinate in point '" + text + "'");
        part = part.substr(first, last - first + 1);
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != part.size() || v < 0) throw qpt::UsageError("bad coordinate '" + part + "' in point");
        out.push_back(static_cast<std::uint64_t>(v));
    }
    if (out.empty()) throw qpt::UsageError("empty point");
    return out;
}

void emit(const json& doc, const std::string& path) {
    const auto text = doc.dump(2) + "\n";
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(path);
        if (!out) throw qpt::UsageError("cannot write " + path);
        out << text;
    }
}

// bounds ------------------------------------------------------------------

struct BoundsArgs {
    std::optional<std::uint64_t> prime;
    bool all = false;
    std::string strategy = "best";
    std::string profile;
    std::string format = "table";
    bool phi_fallback = false;
    std::string config;
};

void check_trace(const qpt::BoundResult& r) {
    if (qpt::replay(r.trace) != r.bound) throw qpt::InternalError("trace replay disagrees with the bound");
}

int run_bounds(const BoundsArgs& a) {
    const auto strategy = qpt::parse_strategy(a.strategy);
    if (a.all) {
        if (a.prime || !a.profile.empty()) throw qpt::UsageError("--all cannot be combined with --prime or --profile");
        json rows = json::array();
        std::vector<std::pair<qpt::BoundResult, qpt::BoundResult>> results;
        for (auto p : qpt::kTabledPrimes) {
            auto best = qpt::v5_bound(p);
            auto wool = qpt::wooley_v5(p);
            check_trace(best);
            check_trace(wool);
            results.emplace_back(std::move(best), std::move(wool));
        }
        const auto overall = qpt::overall_v5();
        if (a.format == "json") {
            for (const auto& [best, wool] : results) {
                rows.push_back({{"p", best.trace.p},
                                {"v5_bound", qpt::int_to_json(best.bound)},
                                {"wooley", qpt::int_to_json(wool.bound)},
                                {"trace", qpt::to_json(best)}});
            }
            emit({{"primes", rows}, {"overall_v5", qpt::int_to_json(overall)}}, "");
            return kOk;
        }
        std::cout << std::setw(4) << "p" << std::setw(14) << "v5(p) <=" << std::setw(22) << "wooley chain"
                  << "  method\n";
        for (const auto& [best, wool] : results) {
            std::cout << std::setw(4) << best.trace.p << std::setw(14) << qpt::to_string(best.bound) << std::setw(22)
                      << qpt::to_string(wool.bound) << "  " << best.trace.strategy << '\n';
        }
        std::cout << "p >= 17: v5(p) = 25\n";
        std::cout << "overall v5 <= " << qpt::to_string(overall) << "\n\n";
        for (const auto& [best, wool] : results) std::cout << qpt::render(best.trace) << '\n';
        return kOk;
    }
    if (!a.prime) throw qpt::UsageError("bounds needs --prime or --all");
    const auto p = *a.prime;
    qpt::BoundResult result = [&] {
        if (!a.profile.empty()) return qpt::evaluate_v(qpt::parse_profile(a.profile), p, strategy, a.phi_fallback);
        if (strategy == qpt::Strategy::best) {
            auto admissible = qpt::v5_bound(p);
            if (!qpt::phi_table(5, p) && !a.phi_fallback) return admissible;
            auto chain = qpt::evaluate_v(qpt::parse_profile("1,0,0,0,0"), p, strategy, a.phi_fallback);
            if (chain.bound < admissible.bound) std::swap(chain, admissible);
            admissible.alternatives.push_back(std::move(chain));
            return admissible;
        }
        return qpt::evaluate_v(qpt::parse_profile("1,0,0,0,0"), p, strategy, a.phi_fallback);
    }();
    check_trace(result);
    if (a.format == "json") {
        emit(qpt::to_json(result), "");
    } else {
        std::cout << qpt::to_string(result.bound) << "\n\n" << qpt::render(result.trace);
    }
    return kOk;
}

// verify ------------------------------------------------------------------

struct VerifyArgs {
    std::string result;
    std::uint64_t prime = 0;
    std::string mode;
    std::optional<std::uint64_t> samples;
    std::uint64_t seed = 42;
    unsigned threads = 1;
    std::uint32_t partitions = 16;
    std::string checkpoint;
    bool resume = false;
    std::string report;
    std::optional<std::uint64_t> max_forms;
    std::uint64_t checkpoint_every = 1'000'000;
    bool quiet = false;
    std::string config;
};

int run_verify(const VerifyArgs& a) {
    qpt::SearchTask task;
    task.shape = qpt::parse_shape(a.result);
    task.p = a.prime;
    if (!qpt::is_supported_pair(task.shape, task.p)) {
        throw qpt::UsageError("no solubility claim for --result " + a.result + " at p = " + std::to_string(a.prime));
    }
    const bool big = task.shape == qpt::Shape::r2 || task.shape == qpt::Shape::r3;
    task.mode = a.mode.empty() ? (big ? qpt::SearchMode::sample : qpt::SearchMode::exhaustive) : qpt::parse_mode(a.mode);
    if (task.mode == qpt::SearchMode::sample) {
        task.sample_count = a.samples.value_or(task.shape == qpt::Shape::r3 ? 100'000 : 1'000'000);
        task.seed = a.seed;
    } else if (a.samples) {
        throw qpt::UsageError("--samples only applies to sample mode");
    }
    task.partitions = a.partitions;
    if (a.threads < 1) throw qpt::UsageError("--threads must be at least 1");
    if (a.resume && a.checkpoint.empty()) throw qpt::UsageError("--resume needs --checkpoint");

    qpt::RunOptions opts;
    opts.threads = a.threads;
    opts.max_forms = a.max_forms;
    opts.checkpoint_path = a.checkpoint;
    opts.checkpoint_every = a.checkpoint_every;
    opts.progress = a.quiet ? nullptr : &std::cerr;

    qpt::VerificationReport report;
    if (a.resume) {
        auto cp = qpt::read_checkpoint(a.checkpoint);
        report = qpt::resume(cp, task, opts);
    } else {
        report = qpt::verify_shape(task, opts);
    }

    const qpt::CoefficientSpace space(task.shape, task.p);
    for (const auto& w : report.witness_samples) {
        if (!qpt::recheck_witness(space, w)) throw qpt::InternalError("a reported witness failed the naive re-check");
    }
    if (report.completed && task.mode == qpt::SearchMode::exhaustive && space.size() &&
        report.forms_checked != *space.size()) {
        throw qpt::InternalError("exhaustive count does not match the size of the coefficient space");
    }
    emit(qpt::to_json(report), a.report);
    if (!a.quiet) {
        std::cerr << "verify " << qpt::to_string(task.shape) << " p=" << task.p << ": " << report.forms_checked
                  << " forms, " << report.counterexamples.size() << " counterexamples"
                  << (report.completed ? "" : " (incomplete)") << ", " << std::fixed << std::setprecision(2)
                  << report.elapsed.count() << "s\n";
    }
    return report.counterexamples.empty() ? kOk : kAbsent;
}

// search ------------------------------------------------------------------

int run_search(const std::string& form_path) {
    const auto f = qpt::read_form_file(form_path);
    if (f.modulus().k() == 2) {
        auto w = qpt::find_result3_witness(f);
        if (!w) {
            emit({{"found", false}}, "");
            return kAbsent;
        }
        if (!qpt::check_result3_witness(f, w->point, w->index)) throw qpt::InternalError("witness failed its re-check");
        const auto d = qpt::hasse_derivative(f, w->index, 1);
        emit({{"found", true},
              {"kind", "result3"},
              {"point", w->point},
              {"index", w->index},
              {"value_mod_p2", qpt::evaluate(f, w->point)},
              {"partial_mod_p2", qpt::evaluate(d, w->point)}},
             "");
        return kOk;
    }
    if (f.modulus().k() != 1) throw qpt::UsageError("search expects a form over F_p or Z/p^2");
    auto z = qpt::find_nonsingular_zero(f);
    if (!z) {
        emit({{"found", false}}, "");
        return kAbsent;
    }
    const auto value = qpt::evaluate(f, z->point);
    const auto grad = qpt::gradient(f, z->point);
    if (value != 0 || grad.at(z->index) == 0) throw qpt::InternalError("witness failed its re-check");
    emit({{"found", true},
          {"kind", "nonsingular"},
          {"point", z->point},
          {"index", z->index},
          {"value", value},
          {"gradient", grad}},
         "");
    return kOk;
}

// lift --------------------------------------------------------------------

json report_json(const qpt::LiftReport& r) {
    json steps = json::array();
    for (const auto& s : r.steps) {
        steps.push_back({{"r", s.r},
                         {"alpha", s.alpha},
                         {"residue_valuation", s.residue_valuation},
                         {"derivative_valuation", s.derivative_valuation}});
    }
    return {{"iterations", r.iterations}, {"residue", r.residue}, {"class_mod_p", r.class_mod_p}, {"steps", steps}};
}

int run_lift(const std::string& form_path, const std::string& point_text, unsigned k, bool a3,
             std::optional<unsigned> index) {
    auto f = qpt::read_form_file(form_path);
    const auto t = parse_point(point_text);
    if (t.size() != f.num_vars()) throw qpt::UsageError("point dimension does not match the form");
    qpt::PointLift lifted;
    if (a3) {
        if (f.modulus().k() == 1) f = qpt::change_precision(f, 2);
        if (f.modulus().k() != 2) throw qpt::UsageError("--a3 expects a form over F_p or Z/p^2");
        unsigned i = 0;
        if (index) {
            i = *index;
        } else {
            while (i < f.num_vars() && !qpt::check_result3_witness(f, t, i)) ++i;
            if (i == f.num_vars()) throw qpt::UsageError("point is not a result-3 witness for any coordinate");
        }
        lifted = qpt::lift_result3(f, qpt::Result3Witness{t, i}, k);
    } else {
        if (f.modulus().k() != 1) throw qpt::UsageError("standard lifting expects a form over F_p");
        lifted = qpt::lift_nonsingular_point(f, t, k);
    }
    const auto pt = qpt::values(lifted.point);
    const auto fk = qpt::change_precision(f, k);
    const auto residue = qpt::evaluate(fk, pt);
    if (residue != 0) throw qpt::InternalError("lifted point does not certify");
    for (std::size_t j = 0; j < t.size(); ++j) {
        if (pt[j] % f.modulus().p() != t[j] % f.modulus().p()) throw qpt::InternalError("lift left the residue class of the witness");
    }
    emit({{"p", f.modulus().p()},
          {"precision", k},
          {"modulus", fk.modulus().m()},
          {"point", pt},
          {"coordinate", lifted.coordinate},
          {"certification", {{"value_mod_pk", residue}}},
          {"report", report_json(lifted.report)}},
         "");
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounds for p-adic solubility of quintic forms, and finite-field verification"};
    app.require_subcommand(1);

    BoundsArgs ba;
    auto* bounds = app.add_subcommand("bounds", "Upper bounds for v5(p) and V(r_d,...,r_1;p) with traces");
    auto* prime_opt = bounds->add_option("--prime", ba.prime, "Prime p");
    bounds->add_flag("--all", ba.all, "All tabled primes and overall v5")->excludes(prime_opt);
    bounds->add_option("--strategy", ba.strategy)->check(CLI::IsMember({"wooley", "hb", "newresult", "best"}));
    bounds->add_option("--profile", ba.profile, "Counts r_d,...,r_1, highest degree first");
    bounds->add_option("--format", ba.format)->check(CLI::IsMember({"json", "table"}));
    bounds->add_flag("--phi-fallback", ba.phi_fallback, "Use phi_d = d^2 for untabled primes");
    bounds->add_option("--config", ba.config, "Flat key = value file");

    VerifyArgs va;
    if (const char* env = std::getenv("QPT_THREADS")) {
        try {
            va.threads = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            std::cerr << "error: QPT_THREADS must be a positive integer\n";
            return kUsage;
        }
    }
    auto* verify = app.add_subcommand("verify", "Check a solubility result over its coefficient space");
    verify->add_option("--result", va.result)->check(CLI::IsMember({"r1", "r1star", "r1*", "r2", "r3", "cubic-ad", "cubic_ad"}));
    verify->add_option("--prime", va.prime);
    verify->add_option("--mode", va.mode)->check(CLI::IsMember({"exhaustive", "sample"}));
    verify->add_option("--samples", va.samples);
    verify->add_option("--seed", va.seed);
    verify->add_option("--threads", va.threads, "Worker threads (default $QPT_THREADS or 1)")->check(CLI::PositiveNumber);
    verify->add_option("--partitions", va.partitions, "Index ranges; part of the task identity")->check(CLI::PositiveNumber);
    verify->add_option("--checkpoint", va.checkpoint);
    verify->add_flag("--resume", va.resume);
    verify->add_option("--report", va.report, "Write the JSON report here instead of stdout");
    verify->add_option("--max-forms", va.max_forms, "Stop after this many forms (resumable)");
    verify->add_option("--checkpoint-every", va.checkpoint_every)->check(CLI::PositiveNumber);
    verify->add_flag("--quiet", va.quiet);
    verify->add_option("--config", va.config, "Flat key = value file");

    std::string search_form;
    auto* search = app.add_subcommand("search", "First nonsingular zero (or result-3 witness over Z/p^2)");
    search->add_option("--form", search_form)->required();

    std::string lift_form, lift_point;
    unsigned lift_k = 0;
    bool lift_a3 = false;
    std::optional<unsigned> lift_index;
    auto* lift = app.add_subcommand("lift", "Lift a zero to Z/p^k");
    lift->add_option("--form", lift_form)->required();
    lift->add_option("--point", lift_point)->required();
    lift->add_option("--precision", lift_k)->required()->check(CLI::PositiveNumber);
    lift->add_flag("--a3", lift_a3, "Use the p^2 | F(a), p || F'(a), p | F''(a) lemma");
    lift->add_option("--index", lift_index, "Coordinate of the result-3 witness (0-based)");

    try {
        app.parse(argc, argv);
        if (bounds->parsed()) {
            apply_config(*bounds, ba.config);
            return run_bounds(ba);
        }
        if (verify->parsed()) {
            apply_config(*verify, va.config);
            if (va.result.empty() || va.prime == 0) throw qpt::UsageError("verify needs --result and --prime");
            return run_verify(va);
        }
        if (search->parsed()) return run_search(search_form);
        if (lift->parsed()) return run_lift(lift_form, lift_point, lift_k, lift_a3, lift_index);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    } catch (const qpt::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const qpt::CheckpointError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const qpt::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const qpt::OverflowError& e) {
        std::cerr << "overflow: " << e.what() << '\n';
        return kInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}
