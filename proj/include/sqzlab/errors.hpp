#ifndef SQZLAB_ERRORS_HPP
#define SQZLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sqzlab {

// Exit codes used by the CLI: 0 success, 2 config, 3 data, 4 degeneracy.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
  static constexpr int exit_code = 2;
};

struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
  static constexpr int exit_code = 3;
};

struct DegenerateDataError : std::runtime_error {
  explicit DegenerateDataError(const std::string& msg) : std::runtime_error(msg) {}
  static constexpr int exit_code = 4;
};

struct DimensionError : std::invalid_argument {
  explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace sqzlab

#endif
