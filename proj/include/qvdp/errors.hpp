#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace qvdp {

// Short form of a real number for error messages.
inline std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* tag() const noexcept { return "Error"; }
};

#define QVDP_DEFINE_ERROR(Name)                                            \
    class Name : public Error {                                            \
    public:                                                                \
        using Error::Error;                                                \
        const char* tag() const noexcept override { return #Name; }        \
    }

QVDP_DEFINE_ERROR(DimensionMismatch);
QVDP_DEFINE_ERROR(InvalidArgument);
QVDP_DEFINE_ERROR(SingularSolve);
QVDP_DEFINE_ERROR(InvariantViolation);
QVDP_DEFINE_ERROR(StepSizeUnderflow);
QVDP_DEFINE_ERROR(NonConvergence);
QVDP_DEFINE_ERROR(AmbiguousKernel);
QVDP_DEFINE_ERROR(IndefiniteDiffusion);
QVDP_DEFINE_ERROR(Divergence);

#undef QVDP_DEFINE_ERROR

// Configuration errors carry the offending line (0 if unknown) and key.
class ConfigError : public Error {
public:
    ConfigError(const std::string& message, int line = 0, std::string key = {})
        : Error(format(message, line, key)), line_(line), key_(std::move(key)) {}

    const char* tag() const noexcept override { return "ConfigError"; }
    int line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

private:
    static std::string format(const std::string& message, int line, const std::string& key) {
        std::string out;
        if (line > 0) out += "line " + std::to_string(line) + ": ";
        if (!key.empty()) out += "key '" + key + "': ";
        return out + message;
    }

    int line_;
    std::string key_;
};

} // namespace qvdp
