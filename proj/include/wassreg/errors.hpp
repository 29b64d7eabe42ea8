#pragma once

#include <stdexcept>
#include <string>

namespace wassreg {

// Exit code conventions used by the CLI: 2 for bad input, 3 for
// numerical / degenerate-design failures.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& msg, int exit_code)
      : std::runtime_error(msg), code_(std::move(code)), exit_code_(exit_code) {}
  const std::string& code() const { return code_; }
  int exit_code() const { return exit_code_; }

private:
  std::string code_;
  int exit_code_;
};

class InputError : public Error {
public:
  InputError(std::string code, const std::string& msg)
      : Error(std::move(code), msg, 2) {}
};

class NumericalError : public Error {
public:
  NumericalError(std::string code, const std::string& msg)
      : Error(std::move(code), msg, 3) {}
};

inline InputError invalid_input(const std::string& msg) { return {"invalid-input", msg}; }
inline InputError incompatible_grid(const std::string& msg) { return {"incompatible-grid", msg}; }
inline InputError incompatible_base(const std::string& msg) { return {"incompatible-base", msg}; }
inline InputError insufficient_data(const std::string& msg) { return {"insufficient-data", msg}; }
inline InputError atomless_violation(const std::string& msg) { return {"atomless-violation", msg}; }
inline InputError domain_error(const std::string& msg) { return {"domain-error", msg}; }
inline InputError malformed_csv(const std::string& msg) { return {"malformed-csv", msg}; }
inline NumericalError not_in_log_image(const std::string& msg) { return {"not-in-log-image", msg}; }
inline NumericalError degenerate_design(const std::string& msg) { return {"degenerate-design", msg}; }
inline NumericalError monotonicity_violation(const std::string& msg) { return {"monotonicity-violation", msg}; }

}  // namespace wassreg
