#pragma once

// Shared JSON helpers for the complex and sheaf file formats.

#include "pltk/complex.hpp"

#include <json.hpp>

#include <string>

namespace pltk::detail {

using Json = nlohmann::json;

const Json& field(const Json& obj, const char* key, const std::string& loc);
double number(const Json& v, const std::string& loc);
Index index_value(const Json& v, const std::string& loc);
const Json& array(const Json& v, const std::string& loc);

FilteredComplex complex_from_json(const Json& doc, bool strict_simplicial);
Json complex_to_json(const FilteredComplex& fc);

Json parse(std::string_view text);

}  // namespace pltk::detail
