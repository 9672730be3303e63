#pragma once

#include <stdexcept>
#include <string>

namespace csched {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- data ingestion ---
struct MalformedRow : Error {
    using Error::Error;
};
struct GapError : Error {
    GapError(const std::string& msg, std::int64_t missing_ts)
        : Error(msg), missing_timestamp(missing_ts) {}
    std::int64_t missing_timestamp;
};
struct NegativeIntensity : Error {
    using Error::Error;
};
struct HttpError : Error {
    using Error::Error;
};
struct SchemaDrift : Error {
    using Error::Error;
};
struct RangeError : Error {
    using Error::Error;
};

// --- forecast ---
struct ZeroActual : Error {
    using Error::Error;
};

// --- scheduler ---
struct Infeasible : Error {
    Infeasible(const std::string& msg, int session)
        : Error(msg), first_bad_session(session) {}
    int first_bad_session;  // 1-based index of the first session whose floor cannot be met
};
struct TooLarge : Error {
    using Error::Error;
};
struct InfeasibleOnGrid : Error {
    using Error::Error;
};

// --- behavior / sim ---
struct EmptyWindow : Error {
    using Error::Error;
};
struct EmptyLog : Error {
    using Error::Error;
};

}  // namespace csched
