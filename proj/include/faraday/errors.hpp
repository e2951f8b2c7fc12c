#pragma once

#include <stdexcept>
#include <string>

namespace faraday {

// Error taxonomy maps onto CLI exit codes:
//   2 config rejected, 3 numerical guard tripped, 4 file I/O.
enum class ErrorKind { Config = 2, Numerical = 3, Io = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

inline Error config_error(const std::string& msg) {
  return Error(ErrorKind::Config, msg);
}
inline Error numerical_error(const std::string& msg) {
  return Error(ErrorKind::Numerical, msg);
}
inline Error io_error(const std::string& msg) {
  return Error(ErrorKind::Io, msg);
}

}  // namespace faraday
