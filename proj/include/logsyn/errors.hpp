#pragma once

#include <stdexcept>
#include <string>

namespace logsyn {

/// Bad user input: malformed files, missing columns, invalid configuration.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Transport failure after the retry budget is spent, or a non-retryable
/// response from the completion endpoint.
class BackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// HTTP 401/403. Never retried, and aborts a run instead of being recorded
/// per record.
class AuthError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal invariant did not hold.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace logsyn
