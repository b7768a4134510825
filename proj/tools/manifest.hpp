#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace seqrank::cli {

struct InputDigest {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::vector<InputDigest> inputs;
  std::optional<std::uint64_t> seed;
  std::string tool_version;
  std::string timestamp;  // UTC, ISO-8601

  // The timestamp is left out of the copy embedded in reports so that
  // identical runs produce identical bytes; it lives in the sidecar file.
  nlohmann::json to_json(bool with_timestamp) const;
};

std::string sha256_file(const std::filesystem::path& path);
std::string utc_timestamp();
std::string tool_version();

}  // namespace seqrank::cli
