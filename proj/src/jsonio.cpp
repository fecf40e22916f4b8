#include "roomforge/jsonio.hpp"

#include <cctype>

namespace roomforge {

std::string normalize_key(const std::string& key) {
  std::string out;
  out.reserve(key.size());
  bool pending_space = false;
  for (char raw : key) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

const Json* find_field(const Json& obj, const std::string& key) {
  if (!obj.is_object()) return nullptr;
  const std::string wanted = normalize_key(key);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (normalize_key(it.key()) == wanted) return &it.value();
  }
  return nullptr;
}

}  // namespace roomforge
