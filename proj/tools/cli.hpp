#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace udgcds::cli {

// Exit codes: 0 success, 1 validation error, 2 internal assertion failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitInternal = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct GeomCheckRow {
  std::string name;
  double statistic = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// Geometry self-test behind `geom-check`.
std::vector<GeomCheckRow> geom_check(std::uint64_t seed, std::size_t configs, std::uint64_t samples);

// Writes `content` to `path` through a temporary file and a rename, so a
// failed run never leaves a partial file behind.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace udgcds::cli
