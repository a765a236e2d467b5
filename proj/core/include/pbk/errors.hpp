// Error taxonomy.  input_error -> CLI exit 2, numeric_error -> CLI exit 3.
#pragma once
#include <stdexcept>
#include <string>

namespace pbk {

struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested section space is empty (dim == 0) where a basis is required.
struct dimension_zero_error : numeric_error {
  explicit dimension_zero_error(const std::string& what) : numeric_error(what) {}
};

// Weighted evaluation matrix numerically rank deficient even after the
// extended-precision retry.
struct ill_conditioned_error : numeric_error {
  explicit ill_conditioned_error(const std::string& what) : numeric_error(what) {}
};

// Envelope requested for a configuration with theta_mass <= 0.
struct not_big_error : numeric_error {
  explicit not_big_error(const std::string& what) : numeric_error(what) {}
};

struct root_finding_error : numeric_error {
  explicit root_finding_error(const std::string& what) : numeric_error(what) {}
};

struct no_convergence_error : numeric_error {
  explicit no_convergence_error(const std::string& what) : numeric_error(what) {}
};

}  // namespace pbk
