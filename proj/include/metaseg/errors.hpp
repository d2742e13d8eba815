#pragma once

#include <stdexcept>
#include <string>

namespace metaseg {

// Base for all pipeline errors. Subclasses distinguish the failure family
// so callers can react (e.g. the CLI maps them to exit codes and messages).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed file contents (bad magic, truncated payload, bad PNM header).
class FormatError : public Error {
public:
    using Error::Error;
};

// Sidecar metadata missing or unparsable.
class MetadataError : public Error {
public:
    using Error::Error;
};

// Well-formed file but a feature we do not handle (e.g. maxval != 255).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

// Values violate a documented range/consistency contract.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Caller-supplied argument outside the operation's precondition.
class ParameterError : public Error {
public:
    using Error::Error;
};

// Underlying I/O failure (open/read/write).
class IoError : public Error {
public:
    using Error::Error;
};

// Histogram with fewer than two nonempty bins cannot be thresholded.
class DegenerateHistogramError : public Error {
public:
    using Error::Error;
};

// Normal-patch sampling has no candidate window at all.
class SamplingInfeasibleError : public Error {
public:
    using Error::Error;
};

// Training loss became non-finite; message carries epoch/step.
class DivergenceError : public Error {
public:
    using Error::Error;
};

} // namespace metaseg
