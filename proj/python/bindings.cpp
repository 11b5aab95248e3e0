#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qpt/bounds.hpp"
#include "qpt/errors.hpp"
#include "qpt/form_io.hpp"
#include "qpt/hensel.hpp"
#include "qpt/search.hpp"
#include "qpt/verify.hpp"

namespace py = pybind11;

namespace {

// Results cross the boundary as JSON text; 128-bit values would not survive a C++ integer cast.
std::string dump(const nlohmann::json& j) { return j.dump(); }

qpt::Form parse_form(const std::string& text) {
    try {
        return qpt::form_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw qpt::UsageError(e.what());
    }
}

qpt::DegreeProfile to_profile(const std::vector<std::int64_t>& r) {
    qpt::DegreeProfile out;
    for (auto v : r) out.r.push_back(v);
    return out;
}

nlohmann::json lift_json(const qpt::PointLift& pl) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : pl.report.steps) {
        steps.push_back({{"r", s.r}, {"alpha", s.alpha}, {"residue_valuation", s.residue_valuation},
                         {"derivative_valuation", s.derivative_valuation}});
    }
    return {{"point", qpt::values(pl.point)},
            {"coordinate", pl.coordinate},
            {"iterations", pl.report.iterations},
            {"class_mod_p", pl.report.class_mod_p},
            {"steps", steps}};
}

}  // namespace

PYBIND11_MODULE(_qpt, m) {
    m.doc() = "Bounds for p-adic solubility of quintic forms and finite-field verification";

    py::register_exception<qpt::UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<qpt::DomainError>(m, "DomainError", PyExc_ArithmeticError);
    py::register_exception<qpt::OverflowError>(m, "BoundOverflowError", PyExc_OverflowError);
    py::register_exception<qpt::CheckpointError>(m, "CheckpointError", PyExc_RuntimeError);
    py::register_exception<qpt::InternalError>(m, "InternalError", PyExc_RuntimeError);

    m.def("v5_bound", [](std::uint64_t p) { return dump(qpt::to_json(qpt::v5_bound(p))); }, py::arg("p"));
    m.def("wooley_v5", [](std::uint64_t p) { return dump(qpt::to_json(qpt::wooley_v5(p))); }, py::arg("p"));
    m.def("overall_v5", [] { return qpt::to_string(qpt::overall_v5()); });
    m.def(
        "evaluate_v",
        [](const std::vector<std::int64_t>& profile, std::uint64_t p, const std::string& strategy, bool fallback) {
            return dump(qpt::to_json(qpt::evaluate_v(to_profile(profile), p, qpt::parse_strategy(strategy), fallback)));
        },
        py::arg("profile"), py::arg("p"), py::arg("strategy") = "best", py::arg("phi_fallback") = false);
    m.def(
        "u_bound",
        [](std::int64_t r, std::uint64_t p) {
            auto u = qpt::u_bound(r, p);
            return py::make_tuple(qpt::to_string(u.value), u.clause);
        },
        py::arg("r"), py::arg("p"));
    m.def("corollary_bounds", [](std::uint64_t p) {
        auto c = qpt::corollary_bounds(p);
        return py::make_tuple(qpt::to_string(c.cubic_and_quadratic.bound), qpt::to_string(c.two_cubics.bound));
    });

    m.def(
        "find_nonsingular_zero",
        [](const std::string& form) -> std::optional<std::pair<qpt::Point, unsigned>> {
            auto z = qpt::find_nonsingular_zero(parse_form(form));
            if (!z) return std::nullopt;
            return std::make_pair(z->point, z->index);
        },
        py::arg("form_json"));
    m.def(
        "find_result3_witness",
        [](const std::string& form) -> std::optional<std::pair<qpt::Point, unsigned>> {
            auto w = qpt::find_result3_witness(parse_form(form));
            if (!w) return std::nullopt;
            return std::make_pair(w->point, w->index);
        },
        py::arg("form_json"));
    m.def(
        "check_result3_witness",
        [](const std::string& form, const qpt::Point& t, unsigned i) {
            return qpt::check_result3_witness(parse_form(form), t, i);
        },
        py::arg("form_json"), py::arg("point"), py::arg("index"));
    m.def(
        "evaluate", [](const std::string& form, const qpt::Point& t) { return qpt::evaluate(parse_form(form), t); },
        py::arg("form_json"), py::arg("point"));

    m.def(
        "hensel_lift",
        [](std::uint64_t p, const std::vector<std::int64_t>& coeffs, std::int64_t a, unsigned k, bool a3) {
            qpt::UnivariatePoly f(p, coeffs);
            auto r = a3 ? qpt::hensel_lift_a3(f, a, k) : qpt::hensel_lift_simple(f, a, k);
            return r.root.value;
        },
        py::arg("p"), py::arg("coeffs"), py::arg("a"), py::arg("k"), py::arg("a3") = false);
    m.def(
        "lift_point",
        [](const std::string& form, const qpt::Point& t, unsigned k) {
            return dump(lift_json(qpt::lift_nonsingular_point(parse_form(form), t, k)));
        },
        py::arg("form_json"), py::arg("point"), py::arg("k"));
    m.def(
        "lift_result3",
        [](const std::string& form, const qpt::Point& t, unsigned i, unsigned k) {
            return dump(lift_json(qpt::lift_result3(parse_form(form), {t, i}, k)));
        },
        py::arg("form_json"), py::arg("point"), py::arg("index"), py::arg("k"));

    m.def(
        "space_size",
        [](const std::string& shape, std::uint64_t p) {
            return qpt::reduced_coefficient_space(qpt::parse_shape(shape), p).size_decimal();
        },
        py::arg("shape"), py::arg("p"));
    m.def(
        "verify",
        [](const std::string& shape, std::uint64_t p, const std::string& mode, std::uint64_t samples, std::uint64_t seed,
           std::uint32_t partitions, unsigned threads) {
            qpt::SearchTask task{qpt::parse_shape(shape), p, qpt::parse_mode(mode), samples, seed, partitions};
            qpt::RunOptions opts;
            opts.threads = threads;
            qpt::VerificationReport r;
            {
                py::gil_scoped_release release;
                r = qpt::verify_shape(task, opts);
            }
            return dump(qpt::to_json(r));
        },
        py::arg("shape"), py::arg("p"), py::arg("mode") = "exhaustive", py::arg("samples") = 0, py::arg("seed") = 0,
        py::arg("partitions") = 1, py::arg("threads") = 1);
}
