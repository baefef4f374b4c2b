#include "varest/error.hpp"

namespace varest {

DegeneratePopulationError::DegeneratePopulationError(char variate, const std::string& what)
    : Error(what), variate_(variate) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : InvalidInputError("line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace varest
