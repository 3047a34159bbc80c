#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "distort/lexicon.hpp"
#include "distort/textmine.hpp"

namespace testing_support {

inline std::filesystem::path data_dir() { return DISTORT_TEST_DATA_DIR; }
inline std::filesystem::path test_data_dir() { return DISTORT_TEST_FIXTURE_DIR; }

inline distort::PipelineConfig shipped_pipeline() {
  distort::PipelineConfig c;
  c.stopwords = distort::load_stopwords(data_dir() / "stopwords.txt");
  return c;
}

inline distort::Lexicon shipped_lexicon() { return distort::load_lexicon(data_dir() / "lexicon.json"); }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("distort-test-" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support
