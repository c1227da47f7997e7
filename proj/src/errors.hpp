#pragma once

#include <stdexcept>
#include <string>

namespace croann {

/// Invalid configuration value or malformed config text.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File system failures (missing file, unreadable file, ...). The message
/// always names the path involved.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed dataset contents, impossible split counts, checksum mismatch.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace croann
