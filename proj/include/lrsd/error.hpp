#pragma once

#include <stdexcept>
#include <string>

namespace lrsd {

enum class Errc {
    invalid_argument = 1,
    domain,
    shape_mismatch,
    parse,
    io,
    degenerate,
};

const char* to_string(Errc code) noexcept;

/// Exception type thrown by every lrsd routine. The code maps one-to-one onto
/// the status values of the C API.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace lrsd
