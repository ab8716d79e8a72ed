#pragma once

#include <stdexcept>
#include <string>

namespace bulkgap {

// Thrown when an iterative numerical procedure fails to converge or a
// computed quantity falls outside its validated range. Distinct from
// std::invalid_argument / std::domain_error, which signal bad caller input.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace bulkgap
