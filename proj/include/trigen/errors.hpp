#pragma once

// Error taxonomy shared across modules. Domain violations use the standard
// std::invalid_argument / std::logic_error; ResourceError marks computations
// abandoned because a configured cap was exceeded, so callers (and the CLI)
// can distinguish "too big" from "wrong".

#include <stdexcept>
#include <string>

namespace trigen {

class ResourceError : public std::runtime_error {
public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace trigen
