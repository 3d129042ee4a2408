#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cdyn/morphisms.hpp"
#include "cdyn/operators.hpp"
#include "cdyn/system.hpp"
#include "cdyn/words.hpp"

namespace cdyn {

using Json = nlohmann::json;

/// {"family": "shift", "k": K}: the one-sided shift, which is not a DynamicalSystem.
struct ShiftSpec {
  int k = 2;
};

using SystemDocument = std::variant<SystemSpec, ShiftSpec>;

/// Accepts a JSON string of digits or a JSON integer.
Int int_from_json(const Json& j);
Json int_to_json(const Int& x);

SystemDocument system_document_from_json(const Json& j);
/// Rejects the shift family.
SystemSpec system_spec_from_json(const Json& j);
Json system_spec_to_json(const SystemSpec& spec);

/// {"table": {"x": "y", ...}} or {"affine": {"u": "..", "v": ".."}}; a bare
/// object of decimal keys is read as a table.
Morphism morphism_from_json(const Json& j, const DynamicalSystem& source, const DynamicalSystem& target);
Json morphism_to_json(const Morphism& phi);

/// Array of states, or {"states": [...]}.
std::vector<Int> states_from_json(const Json& j);

Json word_to_json(const Word& w);
Json cycles_to_json(const std::vector<CycleEntry>& cycles);
Json rational_vector_to_json(const RationalVector& v);
Json basis_to_json(const SubspaceBasis& basis);
SubspaceBasis basis_from_json(const Json& j, std::size_t dim);

/// Throws Io when the file cannot be read and Parse on malformed JSON.
Json read_json_file(const std::string& path);

}  // namespace cdyn
