#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <ostream>
#include <string>

#include "crcensus/quadrature/constants.hpp"

namespace crcensus::report {

inline constexpr int kCacheSchemaVersion = 1;

/// Constants persisted as a human-readable JSON file in a directory. Writes go
/// through a temporary file and a rename; a missing, corrupt or foreign-version
/// file is treated as empty (with a warning) and rewritten on the next store.
class FileConstantCache : public quadrature::ConstantCache {
 public:
  explicit FileConstantCache(std::filesystem::path directory, std::ostream* warnings = nullptr);

  /// $CRCENSUS_CACHE_DIR, or .crcensus-cache under the working directory.
  static std::filesystem::path default_directory();

  std::optional<quadrature::ValueWithError> lookup(const std::string& name, double beta, double tolerance) override;
  void store(const std::string& name, double beta, double tolerance, const quadrature::ValueWithError& value) override;

  std::filesystem::path file() const { return directory_ / "constants.json"; }
  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }
  std::size_t size() const;

 private:
  struct Entry {
    std::string name;
    double beta = 0.0;
    double tolerance = 0.0;
    quadrature::ValueWithError value;
  };

  void load();
  void flush() const;
  static std::string key(const std::string& name, double beta, double tolerance);

  std::filesystem::path directory_;
  std::ostream* warnings_;
  mutable std::mutex mutex_;
  std::map<std::string, Entry> entries_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace crcensus::report
