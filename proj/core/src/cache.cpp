#include <uipt/cache.hpp>

#include <filesystem>
#include <fstream>

namespace uipt::cache {

bool save_json(const std::string& dir, const std::string& name, const nlohmann::json& j) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return false;
  std::ofstream out(std::filesystem::path(dir) / name);
  if (!out) return false;
  out << j.dump();
  return static_cast<bool>(out);
}

std::optional<nlohmann::json> load_json(const std::string& dir, const std::string& name) {
  std::ifstream in(std::filesystem::path(dir) / name);
  if (!in) return std::nullopt;
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  return j;
}

}  // namespace uipt::cache
