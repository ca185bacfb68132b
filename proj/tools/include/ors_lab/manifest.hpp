#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace ors::lab {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// manifest.json under an output directory: {artifacts: {relative path: {sha256, bytes, command}}}.
/// Entries from earlier commands are kept; re-recorded files are overwritten.
class Manifest {
 public:
  explicit Manifest(std::filesystem::path out_dir);

  void record(const std::filesystem::path& file, const std::string& command);
  void set(const std::string& key, nlohmann::json value) { doc_[key] = std::move(value); }
  void save() const;

  const nlohmann::json& json() const noexcept { return doc_; }

 private:
  std::filesystem::path out_dir_;
  nlohmann::json doc_;
};

}  // namespace ors::lab
