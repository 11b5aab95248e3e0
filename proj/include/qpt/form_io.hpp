#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "qpt/form.hpp"

namespace qpt {

// {"p":..,"k":..,"n":..,"d":..,"terms":[{"exps":[..],"coeff":..}]}
nlohmann::json form_to_json(const Form& f);
// Throws UsageError on schema violations.
Form form_from_json(const nlohmann::json& doc);

Form read_form_file(const std::filesystem::path& path);
void write_form_file(const std::filesystem::path& path, const Form& f);

nlohmann::json point_to_json(std::span<const std::uint64_t> t);

}  // namespace qpt
