#pragma once

#include <stdexcept>
#include <string>

namespace tala {

// Base class for every recoverable analysis error. The pipeline catches
// these and degrades to a "none" detection instead of aborting a batch.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct UnreadableFile : Error {
    using Error::Error;
};
struct UnsupportedEncoding : Error {
    using Error::Error;
};
struct WrongSampleRate : Error {
    using Error::Error;
};
struct InvalidBankSpec : Error {
    using Error::Error;
};
struct ClipTooShort : Error {
    using Error::Error;
};
struct EmptyPeakSet : Error {
    using Error::Error;
};
struct InsufficientBayanStrokes : Error {
    using Error::Error;
};
struct SeriesTooShort : Error {
    using Error::Error;
};
struct EmptyMatrix : Error {
    using Error::Error;
};
struct InvalidSpec : Error {
    using Error::Error;
};
struct NoMatchingPairs : Error {
    using Error::Error;
};

}  // namespace tala
