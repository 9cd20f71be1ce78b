#pragma once

#include <stdexcept>
#include <string>

namespace glcmsample {

/// Raised for invalid inputs, malformed files and violated preconditions.
/// The message is a single line suitable for a CLI diagnostic.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace glcmsample
