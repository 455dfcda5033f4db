#pragma once

#include <stdexcept>
#include <string>

namespace repscore {

struct MalformedWav : std::runtime_error {
    explicit MalformedWav(const std::string& msg) : std::runtime_error("malformed wav: " + msg) {}
};

struct UnsupportedEncoding : std::runtime_error {
    explicit UnsupportedEncoding(const std::string& msg)
        : std::runtime_error("unsupported encoding: " + msg) {}
};

struct EmptyAudio : std::runtime_error {
    explicit EmptyAudio(const std::string& msg) : std::runtime_error("empty audio: " + msg) {}
};

struct BufferTooShort : std::runtime_error {
    explicit BufferTooShort(const std::string& msg)
        : std::runtime_error("buffer too short: " + msg) {}
};

struct IncompatibleOverlap : std::runtime_error {
    explicit IncompatibleOverlap(const std::string& msg)
        : std::runtime_error("incompatible overlap: " + msg) {}
};

struct RegionTooShort : std::runtime_error {
    explicit RegionTooShort(const std::string& msg)
        : std::runtime_error("region too short: " + msg) {}
};

struct DegenerateLabels : std::runtime_error {
    explicit DegenerateLabels(const std::string& msg)
        : std::runtime_error("degenerate labels: " + msg) {}
};

struct NonFiniteFeature : std::runtime_error {
    explicit NonFiniteFeature(const std::string& msg)
        : std::runtime_error("non-finite feature: " + msg) {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& msg)
        : std::runtime_error("dimension mismatch: " + msg) {}
};

struct DuplicateFileId : std::runtime_error {
    explicit DuplicateFileId(const std::string& msg)
        : std::runtime_error("duplicate file id: " + msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error("io error: " + msg) {}
};

struct ModelFormatError : std::runtime_error {
    explicit ModelFormatError(const std::string& msg)
        : std::runtime_error("model format error: " + msg) {}
};

}  // namespace repscore
