#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace ghosttrack {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration values (bad sizes, probabilities, unknown keys).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Caller broke a precondition (length mismatch, index out of range).
class UsageError : public Error {
public:
    using Error::Error;
};

/// A target would leave the field of view.
class OutOfBoundsError : public UsageError {
public:
    using UsageError::UsageError;
};

/// No usable signal in an image (max <= 0, or constant image).
class DegenerateImageError : public Error {
public:
    explicit DegenerateImageError(const std::string& what, std::optional<int> segment = std::nullopt)
        : Error(segment ? what + " (segment " + std::to_string(*segment) + ")" : what),
          segment_(segment) {}

    std::optional<int> segment() const { return segment_; }

private:
    std::optional<int> segment_;
};

class IoError : public Error {
public:
    IoError(const std::string& what, std::filesystem::path path)
        : Error(what + ": " + path.string()), path_(std::move(path)) {}

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace ghosttrack
