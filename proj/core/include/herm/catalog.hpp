#pragma once

// Built-in manifolds with their expected classification.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "herm/geometry.hpp"

namespace herm {

std::vector<std::string> catalog_names();

/// The manifold document as shipped (same schema as a manifold file, plus
/// "description" and "expected").
const nlohmann::json& catalog_document(const std::string& name);

/// Throws InputError("unknown catalog entry ...") for unknown names.
HermitianManifold catalog_entry(const std::string& name);

}  // namespace herm
