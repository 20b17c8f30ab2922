#pragma once

#include <stdexcept>
#include <string>

namespace vncs {

// Photon energy lies at or beyond the kinematic edge for the given angle.
class KinematicsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Azimuthal sampling too coarse for the winding content of the amplitude.
class AliasingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoEmissionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace vncs
