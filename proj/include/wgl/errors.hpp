#pragma once

#include <stdexcept>
#include <string>

namespace wgl {

/// Base class for every error thrown by this library. Messages are
/// module-qualified ("graph: ...", "spectral: ...") so CLI consumers can
/// surface them verbatim.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or argument lies outside its admissible domain.
class param_error : public error {
public:
    using error::error;
};

/// Two objects that must live on the same level / have the same size do not.
class shape_error : public error {
public:
    using error::error;
};

/// A vertex or index was not found where required.
class lookup_error : public error {
public:
    using error::error;
};

/// An internal cross-check failed; signals a formula bug, not bad input.
class consistency_error : public error {
public:
    using error::error;
};

/// Degenerate geometry (zero-area polygon).
class geometry_error : public error {
public:
    using error::error;
};

/// A resource cap (level cap, eigensolver budget) was exceeded.
class budget_error : public error {
public:
    using error::error;
};

/// File/stream output failed.
class io_error : public error {
public:
    using error::error;
};

} // namespace wgl
