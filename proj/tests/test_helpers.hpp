#pragma once

#include <filesystem>
#include <string>

#include "doctest.h"
#include "plap/errors.hpp"

namespace plap_test {

// Asserts that fn() throws a plap::Error with the given code and that the
// message mentions `needle` (empty needle skips the message check).
template <typename Fn>
void expect_error(plap::ErrorCode code, const std::string& needle, Fn&& fn) {
  try {
    fn();
    FAIL_CHECK("expected error '" << plap::error_code_name(code)
                                  << "', nothing was thrown");
  } catch (const plap::Error& e) {
    CHECK(plap::error_code_name(e.code()) ==
          doctest::String(plap::error_code_name(code)));
    if (!needle.empty()) {
      const std::string what = e.what();
      if (what.find(needle) == std::string::npos) {
        FAIL_CHECK("error message '" << what << "' does not mention '"
                                     << needle << "'");
      }
    }
  }
}

// Fresh scratch directory under the build tree, cleaned on construction so
// reruns start from a blank slate.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() /
              ("plap_tests_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }

  std::string file(const std::string& leaf) const {
    return (path_ / leaf).string();
  }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace plap_test
