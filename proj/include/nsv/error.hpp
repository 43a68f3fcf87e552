#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsv {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RoleMismatch : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class WrongDimension : public Error {
public:
    using Error::Error;
};

class WrongRegime : public Error {
public:
    using Error::Error;
};

/// Root finder or other numerical routine failed to converge.
class NumericalError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

/// Time integration produced a non-finite state.
class IntegrationDiverged : public Error {
public:
    IntegrationDiverged(long step, double time)
        : Error("integration diverged at step " + std::to_string(step) + " (t = " +
                std::to_string(time) + ")"),
          step_(step),
          time_(time) {}

    long step() const noexcept { return step_; }
    double time() const noexcept { return time_; }

private:
    long step_;
    double time_;
};

/// Gram-Schmidt met a vector that is (numerically) in the span of its predecessors.
class DegenerateFrame : public Error {
public:
    explicit DegenerateFrame(std::size_t index, const std::string& detail = {})
        : Error("degenerate frame: vector " + std::to_string(index) +
                " is linearly dependent on the preceding vectors" +
                (detail.empty() ? std::string() : " (" + detail + ")")),
          index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class StaleFrame : public Error {
public:
    using Error::Error;
};

/// Aggregated configuration problems; what() lists all of them.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> problems)
        : Error(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& problems) {
        std::string out = "invalid configuration:";
        for (const auto& p : problems) out += "\n  - " + p;
        return out;
    }

    std::vector<std::string> problems_;
};

}  // namespace nsv
