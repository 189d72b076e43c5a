#pragma once

// JSON ingestion of manifold and family files. Errors carry JSON-pointer
// locations ("/metric/0/1").

#include <string>

#include <nlohmann/json.hpp>

#include "herm/geometry.hpp"

namespace herm {

/// Validates schema, Hermitian symmetry, positive definiteness at the
/// declared points, and (for Lie input) antisymmetry and Jacobi.
HermitianManifold manifold_from_json(const nlohmann::json& doc);

/// `src` is a file path or `catalog:<name>`.
HermitianManifold load_manifold(const std::string& src);

/// Reads and parses a JSON file; InputError on I/O or syntax failure.
nlohmann::json read_json_file(const std::string& path);

/// [re, im] pair (a bare number is accepted as a real value).
Complex complex_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json complex_to_json(Complex z);

}  // namespace herm
