#include "cuspforge/error.hpp"

#include <utility>

namespace cuspforge {

Error::Error(std::string code, const std::string& what)
    : std::runtime_error(what), code_(std::move(code)) {}

}  // namespace cuspforge
