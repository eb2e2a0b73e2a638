#pragma once

/**
 * @file errors.hpp
 * @brief Exception hierarchy. Every library error derives from hmenc::Error;
 *        the CLI maps the categories below onto process exit codes.
 */

#include <stdexcept>
#include <string>

namespace hmenc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition.
struct BadInput : Error {
    using Error::Error;
};

// --- number theory ---------------------------------------------------------

struct NotInvertible : Error {
    using Error::Error;
};

struct ModuliNotCoprime : Error {
    using Error::Error;
};

struct ModulusTooLarge : Error {
    using Error::Error;
};

struct BadGroupOrder : Error {
    using Error::Error;
};

/// A bounded factoring attempt gave up (dealer-scale inputs only).
struct FactorizationFailed : Error {
    using Error::Error;
};

// --- parameter search -------------------------------------------------------

/// Candidate budget exhausted; caller may retry with fresh randomness.
struct SearchExhausted : Error {
    using Error::Error;
};

// --- scheme / pool ----------------------------------------------------------

struct MessageOutOfRange : Error {
    using Error::Error;
};

struct NotInSubgroup : Error {
    using Error::Error;
};

struct DecodeUnsupported : Error {
    using Error::Error;
};

struct UnknownParty : Error {
    using Error::Error;
};

struct WrongVariant : Error {
    using Error::Error;
};

struct PoolExhausted : Error {
    using Error::Error;
};

struct UnsupportedForV1 : Error {
    using Error::Error;
};

// --- threshold ---------------------------------------------------------------

struct ThresholdOutOfRange : Error {
    using Error::Error;
};

struct PoolTooLarge : Error {
    using Error::Error;
};

// --- analysis ----------------------------------------------------------------

/// Thrown by oracle stubs that refuse to answer; the distinguisher has no
/// other input channel, so without a live oracle it cannot run at all.
struct OracleUnavailable : Error {
    using Error::Error;
};

// --- serialization -----------------------------------------------------------

struct FormatError : Error {
    using Error::Error;
};

} // namespace hmenc
