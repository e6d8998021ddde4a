#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace palsgd {

/// Two operands of a vector operation disagree on length.
class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(std::string op, std::size_t lhs, std::size_t rhs)
      : std::invalid_argument(op + ": dimension mismatch (" + std::to_string(lhs) + " vs " +
                              std::to_string(rhs) + ")"),
        lhs_(lhs),
        rhs_(rhs) {}

  std::size_t lhs() const noexcept { return lhs_; }
  std::size_t rhs() const noexcept { return rhs_; }

 private:
  std::size_t lhs_;
  std::size_t rhs_;
};

/// A configuration field violates its constraint. `field()` is the dotted
/// path of the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& rule)
      : std::invalid_argument(field + ": " + rule), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace palsgd
