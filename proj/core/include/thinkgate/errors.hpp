// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace thinkgate {

/// Base class for all thinkgate errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Endpoint unreachable or kept failing after the retry budget.
class TransportError : public Error {
public:
    using Error::Error;
};

/// Endpoint reachable but the response body violates the wire contract.
class ProtocolError : public Error {
public:
    using Error::Error;
};

/// Endpoint does not expose token logprobs.
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// No answer label matched any returned token alternative.
class ProbeDegenerate : public Error {
public:
    using Error::Error;
};

/// Open-ended tree search found no completed candidate within budget.
class OpenProbeExhausted : public Error {
public:
    using Error::Error;
};

/// Final answer could not be located in the response text.
class ExtractionFailed : public Error {
public:
    using Error::Error;
};

/// Mock script file failed to parse or violated a script invariant.
class ScriptError : public Error {
public:
    using Error::Error;
};

/// Dataset file failed validation; the message names the line.
class DatasetError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration (flag values, mode combinations).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// All pairwise sample distances are zero; no usable kernel bandwidth.
class DegenerateBandwidth : public Error {
public:
    using Error::Error;
};

/// Matrix row/column counts do not line up.
class ShapeError : public Error {
public:
    using Error::Error;
};

} // namespace thinkgate
