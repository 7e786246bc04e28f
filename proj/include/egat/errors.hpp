#ifndef EGAT_ERRORS_HPP
#define EGAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace egat {

/// Invalid graph or tensor structure: bad indices, duplicate edges,
/// mismatched dimensions.
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite values encountered during a numeric pass.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed on-disk data: CSV rows, split files, checkpoints.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace egat

#endif // EGAT_ERRORS_HPP
