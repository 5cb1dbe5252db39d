#pragma once

#include <stdexcept>
#include <string>

namespace udgcds {

// Thrown when an operation's input lies outside its mathematical domain
// (negative distances, points outside the habitat, empty index windows...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Thrown for malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace udgcds
