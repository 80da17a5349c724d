#include "crcensus/report/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "crcensus/errors.hpp"

namespace crcensus::report {

using nlohmann::json;

FileConstantCache::FileConstantCache(std::filesystem::path directory, std::ostream* warnings)
    : directory_(std::move(directory)), warnings_(warnings) {
  load();
}

std::filesystem::path FileConstantCache::default_directory() {
  if (const char* env = std::getenv("CRCENSUS_CACHE_DIR"); env != nullptr && *env != '\0') return env;
  return std::filesystem::current_path() / ".crcensus-cache";
}

std::string FileConstantCache::key(const std::string& name, double beta, double tolerance) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "|beta=%.17g|tol=%.17g", beta, tolerance);
  return name + buf;
}

void FileConstantCache::load() {
  const auto path = file();
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return;
  auto warn = [&](const std::string& why) {
    entries_.clear();
    if (warnings_ != nullptr) *warnings_ << "warning: constants cache " << path.string() << " " << why << "; rebuilding\n";
  };
  std::ifstream in(path, std::ios::binary);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception&) {
    warn("is corrupt");
    return;
  }
  try {
    if (root.value("schema", "") != "crcensus-constants" || root.value("version", 0) != kCacheSchemaVersion) {
      warn("has an unknown schema or version");
      return;
    }
    for (const auto& e : root.at("entries")) {
      Entry entry;
      entry.name = e.at("name").get<std::string>();
      entry.beta = e.at("beta").get<double>();
      entry.tolerance = e.at("tolerance").get<double>();
      entry.value = {e.at("value").get<double>(), e.at("error").get<double>()};
      entries_[key(entry.name, entry.beta, entry.tolerance)] = entry;
    }
  } catch (const json::exception&) {
    warn("has malformed entries");
  }
}

void FileConstantCache::flush() const {
  json entries = json::array();
  for (const auto& [k, e] : entries_) {
    entries.push_back({{"name", e.name},
                       {"beta", e.beta},
                       {"tolerance", e.tolerance},
                       {"value", e.value.value},
                       {"error", e.value.error}});
  }
  const json root = {{"schema", "crcensus-constants"}, {"version", kCacheSchemaVersion}, {"entries", entries}};
  std::filesystem::create_directories(directory_);
  const auto target = file();
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write constants cache " + tmp.string());
    out << root.dump(2) << '\n';
    if (!out) throw Error("cannot write constants cache " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::optional<quadrature::ValueWithError> FileConstantCache::lookup(const std::string& name, double beta,
                                                                    double tolerance) {
  std::lock_guard lock(mutex_);
  const auto it = entries_.find(key(name, beta, tolerance));
  if (it == entries_.end()) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  return it->second.value;
}

void FileConstantCache::store(const std::string& name, double beta, double tolerance,
                              const quadrature::ValueWithError& value) {
  std::lock_guard lock(mutex_);
  entries_[key(name, beta, tolerance)] = Entry{name, beta, tolerance, value};
  flush();
}

std::size_t FileConstantCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

}  // namespace crcensus::report
