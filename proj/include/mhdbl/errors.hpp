#pragma once

#include <stdexcept>
#include <string>

namespace mhdbl {

// State left the region the model is valid on.  The message names the
// violated inequality.
class admissibility_error : public std::domain_error {
 public:
  explicit admissibility_error(const std::string& msg) : std::domain_error(msg) {}
};

// Bad parameters or an incompatible profile at construction time.
class construction_error : public std::invalid_argument {
 public:
  explicit construction_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Degenerate transform map or diffusion coefficient.
class degeneracy_error : public std::runtime_error {
 public:
  explicit degeneracy_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Time integration could not proceed (singular solve, repeated rejections).
class step_failure : public std::runtime_error {
 public:
  explicit step_failure(const std::string& msg) : std::runtime_error(msg) {}
};

// A fit or diagnostic was requested with too few samples.
class insufficient_data : public std::runtime_error {
 public:
  explicit insufficient_data(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mhdbl
