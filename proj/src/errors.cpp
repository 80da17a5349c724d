#include "crcensus/errors.hpp"

namespace crcensus {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out = "invalid configuration";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i == 0 ? ": " : "; ") + items[i];
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error(join(violations)), violations_(std::move(violations)) {}

}  // namespace crcensus
