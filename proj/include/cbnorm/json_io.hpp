#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cbnorm/functorial.hpp"
#include "cbnorm/groups.hpp"
#include "cbnorm/schur.hpp"

namespace cbnorm::io {

using json = nlohmann::ordered_json;

/// Parses text, reporting the byte offset of syntax errors as InputError.
json parse(const std::string& text, const std::string& source);
/// Reads a file, or treats the argument as inline JSON when it starts with
/// '[' or '{'.
json load(const std::string& path_or_inline);

/// A number, {"re":..,"im":..} or [re, im]. `where` names the location in
/// error messages.
Complex complex_from_json(const json& j, const std::string& where);
json complex_to_json(Complex z);

std::vector<Complex> function_from_json(const json& j, const std::string& where);
json function_to_json(std::span<const Complex> f);

/// Either {"rows","cols","re":[[..]],"im":[[..]]} or a list of rows of values.
ComplexMatrix matrix_from_json(const json& j, const std::string& where);
json matrix_to_json(const ComplexMatrix& m);

using Carrier = std::variant<FiniteGroup, FiniteSection>;

/// {"kind":"cyclic","n":4} | {"kind":"dihedral","n":4} | {"kind":"symmetric","n":4}
/// | {"kind":"product","of":[..]} | {"kind":"table","cayley":[[..]]}
/// | {"kind":"free_section","gens":2,"radius":2}
Carrier carrier_from_json(const json& j, const std::string& where = "group");
FiniteGroup group_from_json(const json& j, const std::string& where = "group");

json report_to_json(const NormReport& r);
json comparison_to_json(const NormComparison& c);

}  // namespace cbnorm::io
