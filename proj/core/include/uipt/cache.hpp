#pragma once

// Warm-cache persistence: exact and float series dumped as the series-module
// JSON schema under a directory chosen by the caller (the CLI wires this to
// UIPT_LAB_CACHE_DIR).

#include <uipt/series.hpp>

#include <optional>
#include <string>

namespace uipt::cache {

bool save_json(const std::string& dir, const std::string& name, const nlohmann::json& j);
std::optional<nlohmann::json> load_json(const std::string& dir, const std::string& name);

template <class R>
bool save_series(const std::string& dir, const std::string& name, const Series<R>& s) {
  return save_json(dir, name, series_to_json(s));
}

template <class R>
std::optional<Series<R>> load_series(const std::string& dir, const std::string& name, int min_order) {
  auto j = load_json(dir, name);
  if (!j) return std::nullopt;
  try {
    Series<R> s = series_from_json<R>(*j);
    if (s.order() < min_order) return std::nullopt;
    return s;
  } catch (const std::exception&) {
    return std::nullopt;  // stale or foreign file: recompute
  }
}

}  // namespace uipt::cache
