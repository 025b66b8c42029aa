#pragma once

#include <stdexcept>
#include <string>

namespace adpipe {

/// Root of the library error taxonomy. Pipeline drivers annotate errors with
/// the stage index at which they surfaced; -1 means "not stage-tagged".
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}

    int stage() const { return stage_; }
    void set_stage(int stage) { stage_ = stage; }

private:
    int stage_ = -1;
};

#define ADPIPE_DEFINE_ERROR(Name, Base)                                    \
    class Name : public Base {                                             \
    public:                                                                \
        using Base::Base;                                                  \
    }

// Programmatic misuse of an API contract (bad argument, violated pre).
ADPIPE_DEFINE_ERROR(InvalidArgument, Error);

// --- dataset / scene model -------------------------------------------------

class MalformedRecord : public Error {
public:
    MalformedRecord(int line, const std::string& reason)
        : Error("line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}

    int line() const { return line_; }
    const std::string& reason() const { return reason_; }

private:
    int line_;
    std::string reason_;
};

class MissingImage : public Error {
public:
    explicit MissingImage(const std::string& path) : Error("missing image: " + path), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class UnknownCategory : public Error {
public:
    explicit UnknownCategory(const std::string& name)
        : Error("unknown category: " + name), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

// --- backends ----------------------------------------------------------------

ADPIPE_DEFINE_ERROR(BackendError, Error);
ADPIPE_DEFINE_ERROR(UnscriptedPrompt, BackendError);
ADPIPE_DEFINE_ERROR(AmbiguousScript, BackendError);
ADPIPE_DEFINE_ERROR(NormViolation, BackendError);
ADPIPE_DEFINE_ERROR(Timeout, BackendError);
ADPIPE_DEFINE_ERROR(ProviderError, BackendError);
ADPIPE_DEFINE_ERROR(RateLimited, BackendError);
ADPIPE_DEFINE_ERROR(DetectorFailure, BackendError);

// --- suggestion / response parsing -------------------------------------------

ADPIPE_DEFINE_ERROR(ParseError, Error);
ADPIPE_DEFINE_ERROR(UnparseableResponse, ParseError);
ADPIPE_DEFINE_ERROR(EmptyResponse, ParseError);
ADPIPE_DEFINE_ERROR(MultiLineResponse, ParseError);
ADPIPE_DEFINE_ERROR(NoListedObject, ParseError);
ADPIPE_DEFINE_ERROR(UnparseableRating, ParseError);
ADPIPE_DEFINE_ERROR(EmptyTaxonomy, Error);

// --- compositing ---------------------------------------------------------------

ADPIPE_DEFINE_ERROR(EmptyObjectPhrase, Error);
ADPIPE_DEFINE_ERROR(AllBackground, Error);
ADPIPE_DEFINE_ERROR(DegenerateBox, Error);
ADPIPE_DEFINE_ERROR(NoOverlap, Error);
ADPIPE_DEFINE_ERROR(NonConvergence, Error);

// --- sponsor -------------------------------------------------------------------

ADPIPE_DEFINE_ERROR(EmptyCandidates, Error);
ADPIPE_DEFINE_ERROR(EmptyMask, Error);

// --- evaluation ------------------------------------------------------------------

ADPIPE_DEFINE_ERROR(EmptyInput, Error);
ADPIPE_DEFINE_ERROR(EmptyMatrix, Error);
ADPIPE_DEFINE_ERROR(EmptyRun, Error);
ADPIPE_DEFINE_ERROR(LengthMismatch, Error);
ADPIPE_DEFINE_ERROR(MisalignedInputs, Error);
ADPIPE_DEFINE_ERROR(MalformedAnnotationFile, Error);

// --- configuration / templates ------------------------------------------------

ADPIPE_DEFINE_ERROR(ConfigError, Error);
ADPIPE_DEFINE_ERROR(TemplateError, ConfigError);

#undef ADPIPE_DEFINE_ERROR

}  // namespace adpipe
