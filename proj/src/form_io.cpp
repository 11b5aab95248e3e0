#include "qpt/form_io.hpp"

#include <fstream>
#include <sstream>

#include "qpt/errors.hpp"

namespace qpt {

nlohmann::json form_to_json(const Form& f) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : f.terms()) terms.push_back({{"exps", t.exps}, {"coeff", t.coeff}});
    return {{"p", f.modulus().p()},
            {"k", f.modulus().k()},
            {"n", f.num_vars()},
            {"d", f.degree()},
            {"terms", std::move(terms)}};
}

Form form_from_json(const nlohmann::json& doc) {
    try {
        if (!doc.is_object()) throw UsageError("form document must be an object");
        for (const char* key : {"p", "n", "d", "terms"}) {
            if (!doc.contains(key)) throw UsageError(std::string("form document lacks '") + key + "'");
        }
        Modulus mod(doc.at("p").get<std::uint64_t>(), doc.value("k", 1u));
        auto n = doc.at("n").get<unsigned>();
        auto d = doc.at("d").get<unsigned>();
        std::vector<Term> terms;
        for (const auto& t : doc.at("terms")) {
            auto coeff = t.at("coeff").get<std::int64_t>();
            if (coeff < 0 || static_cast<std::uint64_t>(coeff) >= mod.m()) {
                throw UsageError("coefficient outside [0, p^k)");
            }
            terms.push_back({t.at("exps").get<Exponents>(), static_cast<std::uint64_t>(coeff)});
        }
        return Form(mod, n, d, std::move(terms));
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed form document: ") + e.what());
    }
}

Form read_form_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open form file " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("form file " + path.string() + " is not valid JSON: " + e.what());
    }
    return form_from_json(doc);
}

void write_form_file(const std::filesystem::path& path, const Form& f) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path.string());
    out << form_to_json(f).dump(2) << '\n';
}

nlohmann::json point_to_json(std::span<const std::uint64_t> t) {
    return nlohmann::json(std::vector<std::uint64_t>(t.begin(), t.end()));
}

}  // namespace qpt
