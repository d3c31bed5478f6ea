#include "jsnet/errors.hpp"

#include <cstdio>

namespace jsnet {

namespace {

std::string domain_message(const std::string& family, double value, int dimension) {
    char buf[160];
    if (dimension >= 0) {
        std::snprintf(buf, sizeof(buf), "value %.17g outside %s domain in dimension %d",
                      value, family.c_str(), dimension);
    } else {
        std::snprintf(buf, sizeof(buf), "value %.17g outside %s domain", value, family.c_str());
    }
    return buf;
}

}  // namespace

DomainError::DomainError(std::string family, double value, int dimension)
    : DataError(domain_message(family, value, dimension)),
      family_(std::move(family)),
      value_(value),
      dimension_(dimension) {}

ParseError::ParseError(const std::string& what, long line)
    : DataError(line >= 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

}  // namespace jsnet
