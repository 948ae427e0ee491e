#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "implang/core/files.hpp"

namespace implang::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("implang-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string golden(const std::string& rel) {
  return read_file(std::filesystem::path(IMPLANG_GOLDEN_DIR) / rel);
}

}  // namespace implang::testing
