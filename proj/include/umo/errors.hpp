#pragma once

#include <stdexcept>
#include <string>

namespace umo {

// Every failure mode the library distinguishes.  Callers that care about the
// kind of failure switch on code(); the message carries the specifics.
enum class Errc {
    none = 0,
    invalid_argument,  // parameter outside the documented domain
    parse,             // malformed text input, message carries the position
    precision,         // result not certifiable within the digit window
    domain,            // operation undefined for this value (inv of 0, ...)
    budget,            // exhaustive validation would exceed the allowed work
    cap_exceeded,      // enumeration larger than the configured size cap
    field_mismatch,    // operands belong to different fields
    io,                // cache or config file trouble
};

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::none: return "none";
        case Errc::invalid_argument: return "invalid-argument";
        case Errc::parse: return "parse";
        case Errc::precision: return "precision";
        case Errc::domain: return "domain";
        case Errc::budget: return "budget";
        case Errc::cap_exceeded: return "cap-exceeded";
        case Errc::field_mismatch: return "field-mismatch";
        case Errc::io: return "io";
    }
    return "unknown";
}

}  // namespace umo
