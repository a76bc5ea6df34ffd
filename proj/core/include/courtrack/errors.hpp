#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace courtrack {

/// Base of every error raised by the engine. Precondition violations on
/// plain arguments use std::invalid_argument instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define COURTRACK_DEFINE_ERROR(Name)                         \
    class Name : public Error {                              \
    public:                                                  \
        explicit Name(const std::string& what) : Error(what) {} \
    }

// geometry
COURTRACK_DEFINE_ERROR(DegenerateProjection);
COURTRACK_DEFINE_ERROR(SingularHomography);

// imaging
COURTRACK_DEFINE_ERROR(EmptyOverlap);
COURTRACK_DEFINE_ERROR(EmptyRegion);

// court
COURTRACK_DEFINE_ERROR(NoSegments);
COURTRACK_DEFINE_ERROR(NoCandidates);
COURTRACK_DEFINE_ERROR(DegenerateCourt);

// detect
COURTRACK_DEFINE_ERROR(DetectorFailure);
COURTRACK_DEFINE_ERROR(EmptyKeypoints);

// track
COURTRACK_DEFINE_ERROR(InconsistentFrameIndexing);

// eval
COURTRACK_DEFINE_ERROR(EmptyGroundTruth);

// synth
COURTRACK_DEFINE_ERROR(TargetOutOfFrame);
COURTRACK_DEFINE_ERROR(TooLarge);

#undef COURTRACK_DEFINE_ERROR

/// Malformed input file. Carries the file, 1-based line (0 when the format has
/// no meaningful line), and offending field.
class FormatError : public Error {
public:
    FormatError(std::string file, std::size_t line, std::string field, const std::string& detail)
        : Error(file + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": field '" +
                field + "': " + detail),
          file_(std::move(file)),
          line_(line),
          field_(std::move(field)) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::string file_;
    std::size_t line_;
    std::string field_;
};

}  // namespace courtrack
