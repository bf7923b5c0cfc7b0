#include "lrsd/error.hpp"

namespace lrsd {

const char* to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::domain: return "domain error";
    case Errc::shape_mismatch: return "shape mismatch";
    case Errc::parse: return "parse error";
    case Errc::io: return "i/o error";
    case Errc::degenerate: return "degenerate input";
    }
    return "unknown error";
}

void fail(Errc code, const std::string& what)
{
    throw Error(code, what);
}

}  // namespace lrsd
