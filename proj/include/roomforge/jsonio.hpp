#pragma once

#include <string>

#include "json.hpp"

namespace roomforge {

// Ordered so dumps are stable across runs and platforms.
using Json = nlohmann::ordered_json;

// Collapses runs of whitespace to single spaces and trims the ends.
// Catalog documents are tolerant of sloppy spacing in their keys.
std::string normalize_key(const std::string& key);

// Case-insensitive field lookup with whitespace-normalized keys.
// Returns nullptr when absent.
const Json* find_field(const Json& obj, const std::string& key);

}  // namespace roomforge
