#pragma once

#include <stdexcept>
#include <string>

namespace evidencer {

// Every failure in the library carries one of these kinds so callers
// (and the CLI exit-code mapping) can react without string matching.
enum class ErrorKind {
    IoError,
    SchemaError,
    MissingDate,
    NotFound,
    ParseError,
    Transport,
    MalformedResponse,
    EmptyLexicon,
    EmptyCorpus,
    EmptyTraining,
    UntrainedModel,
    EmptyText,
    SingleClass,
    ShapeMismatch,
    TooFewSamples,
    Validation,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::MissingDate: return "MissingDate";
        case ErrorKind::NotFound: return "NotFound";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::Transport: return "Transport";
        case ErrorKind::MalformedResponse: return "MalformedResponse";
        case ErrorKind::EmptyLexicon: return "EmptyLexicon";
        case ErrorKind::EmptyCorpus: return "EmptyCorpus";
        case ErrorKind::EmptyTraining: return "EmptyTraining";
        case ErrorKind::UntrainedModel: return "UntrainedModel";
        case ErrorKind::EmptyText: return "EmptyText";
        case ErrorKind::SingleClass: return "SingleClass";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::TooFewSamples: return "TooFewSamples";
        case ErrorKind::Validation: return "Validation";
    }
    return "Unknown";
}

}  // namespace evidencer
