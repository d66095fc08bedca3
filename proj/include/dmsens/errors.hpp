#pragma once

#include <stdexcept>
#include <string>

namespace dmsens {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct MissingFileError : Error {
    using Error::Error;
};
struct RaggedRowsError : Error {
    using Error::Error;
};
struct NonNumericCellError : Error {
    using Error::Error;
};
struct InvalidBoundsError : Error {
    using Error::Error;
};
struct ZeroBandwidthError : Error {
    using Error::Error;
};
struct KindMismatchError : Error {
    using Error::Error;
};
struct BadAlphaError : Error {
    using Error::Error;
};
struct SizeMismatchError : Error {
    using Error::Error;
};
struct DegenerateSampleError : Error {
    using Error::Error;
};
struct BadKError : Error {
    using Error::Error;
};
struct BadBError : Error {
    using Error::Error;
};
struct ZeroVarianceError : Error {
    using Error::Error;
};
struct DimMismatchError : Error {
    using Error::Error;
};
struct BadMError : Error {
    using Error::Error;
};
struct NoReferenceError : Error {
    using Error::Error;
};

/// Config file problems; the CLI maps these to exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace dmsens
