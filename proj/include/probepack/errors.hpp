#pragma once

#include <stdexcept>
#include <string>

namespace probepack {

// Base for all library errors so callers can catch the whole family at once.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class MalformedName : public Error {
public:
    explicit MalformedName(const std::string& what) : Error(what) {}
};

class PropertyConflict : public Error {
public:
    explicit PropertyConflict(const std::string& what) : Error(what) {}
};

class DuplicatePoint : public Error {
public:
    explicit DuplicatePoint(const std::string& what) : Error(what) {}
};

class CardinalityMismatch : public Error {
public:
    explicit CardinalityMismatch(const std::string& what) : Error(what) {}
};

class ActionDimensionMismatch : public Error {
public:
    explicit ActionDimensionMismatch(const std::string& what) : Error(what) {}
};

class MissingProperty : public Error {
public:
    explicit MissingProperty(const std::string& what) : Error(what) {}
};

class UnsupportedInstruction : public Error {
public:
    explicit UnsupportedInstruction(const std::string& what) : Error(what) {}
};

class TraceMismatch : public Error {
public:
    explicit TraceMismatch(const std::string& what) : Error(what) {}
};

class InapplicableFault : public Error {
public:
    explicit InapplicableFault(const std::string& what) : Error(what) {}
};

class AdapterFailure : public Error {
public:
    explicit AdapterFailure(const std::string& what) : Error(what) {}
};

class ParseFailure : public Error {
public:
    ParseFailure(const std::string& what, std::string span = {})
        : Error(span.empty() ? what : what + ": \"" + span + "\""), offending_span(std::move(span)) {}
    std::string offending_span;
};

class ReplayMiss : public Error {
public:
    explicit ReplayMiss(const std::string& what) : Error(what) {}
};

class IncompleteContext : public Error {
public:
    explicit IncompleteContext(const std::string& what) : Error(what) {}
};

class GenerationExhausted : public Error {
public:
    explicit GenerationExhausted(const std::string& what) : Error(what) {}
};

class FileError : public Error {
public:
    explicit FileError(const std::string& what) : Error(what) {}
};

}  // namespace probepack
