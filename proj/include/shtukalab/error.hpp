#pragma once

#include <stdexcept>
#include <string>

namespace shtukalab {

enum class Errc {
    NotPrime,
    ReducibleModulus,
    DegreeMismatch,
    DimensionMismatch,
    FieldMismatch,
    NotNilpotent,
    TooLarge,
    WeightIncompatibleRelation,
    NonConfluent,
    BadPresentation,
    LengthMismatch,
    NotBalanced,
    CapExceeded,
    QPowerLeavesSubspace,
    SyntaxError,
    UnknownKey,
    BadElement,
    Internal,
};

const char* errc_name(Errc c);

/// Library-wide exception type; carries a machine-readable code next to the message.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace shtukalab
