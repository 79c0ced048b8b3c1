#pragma once

#include <stdexcept>
#include <string>

namespace momenta {

// One class per documented failure mode; the CLI maps these to exit codes.
enum class ErrorClass {
    parse_error,
    init_shortfall,
    window_shortfall,
    capacity_shortfall,
    no_recurrence_found,
    insufficient_moments,
    oracle_mismatch,
    singular_point,
    degenerate_input,
    checkpoint_mismatch,
    internal,
};

const char* error_class_name(ErrorClass cls);
int error_exit_code(ErrorClass cls);

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& detail)
        : std::runtime_error(detail), cls_(cls) {}
    ErrorClass cls() const { return cls_; }

private:
    ErrorClass cls_;
};

[[noreturn]] inline void fail(ErrorClass cls, const std::string& detail) {
    throw Error(cls, detail);
}

} // namespace momenta
