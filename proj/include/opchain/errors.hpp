#pragma once

/**
 * @file errors.hpp
 * @brief Exception types shared by every opchain module.
 *
 * All numeric failures derive from math_error so callers (the CLI in
 * particular) can map a whole family to one exit code. Parse failures and
 * non-convergence are kept separate because they carry extra payload.
 */

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opchain {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything that is "the value does not exist here".
class math_error : public error {
 public:
  using error::error;
};

class domain_error : public math_error {
 public:
  using math_error::math_error;
};

// Forms such as inf - inf or 0 * inf.
class undefined_form : public math_error {
 public:
  using math_error::math_error;
};

class overflow_error : public math_error {
 public:
  using math_error::math_error;
};

class no_identity : public math_error {
 public:
  using math_error::math_error;
};

class no_inverse : public math_error {
 public:
  using math_error::math_error;
};

class level_error : public math_error {
 public:
  using math_error::math_error;
};

class unbound_variable : public math_error {
 public:
  explicit unbound_variable(std::string name)
      : math_error("unbound variable '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// A node kind or level for which no rule exists (e.g. D_n with n >= 2 in
// closed form, or symbolic differentiation of a limit-only node).
class unsupported : public math_error {
 public:
  using math_error::math_error;
};

class parse_error : public error {
 public:
  parse_error(std::size_t position, std::string expected, std::string found)
      : error(format(position, expected, found)),
        position_(position),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  static std::string format(std::size_t pos, const std::string& expected,
                            const std::string& found) {
    return "parse error at offset " + std::to_string(pos) + ": expected " +
           expected + ", found " + (found.empty() ? "end of input" : "'" + found + "'");
  }

  std::size_t position_;
  std::string expected_;
  std::string found_;
};

}  // namespace opchain
