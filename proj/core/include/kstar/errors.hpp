#pragma once

#include <stdexcept>
#include <string>

namespace kstar {

// All library errors derive from Error. what() starts with the concrete
// error name so CLI diagnostics identify the failure kind without RTTI.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error("Error: " + msg) {}

protected:
    struct Raw {};
    Error(Raw, const std::string& formatted) : std::runtime_error(formatted) {}
};

// File missing, unreadable, or unwritable.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(Raw{}, "IoError: " + msg) {}
};

// Input file exists but its bytes do not form the claimed format.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(Raw{}, "ParseError: " + msg) {}
};

// Structurally parseable input that violates a data invariant
// (non-finite coordinates, ragged rows, fewer than two classes).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg)
        : Error(Raw{}, "ValidationError: " + msg) {}

protected:
    ValidationError(Raw r, const std::string& formatted) : Error(r, formatted) {}
};

// The single-class case gets its own type (the rank of the first
// differently-labeled neighbor does not exist), but it is still a
// validation failure, so it stays inside that hierarchy.
class SingleClassError : public ValidationError {
public:
    explicit SingleClassError(const std::string& msg)
        : ValidationError(Raw{}, "SingleClassError: " + msg) {}
};

// Vector length mismatch between parallel inputs (points vs labels vs predictions).
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg)
        : Error(Raw{}, "DimensionError: " + msg) {}
};

// Cosine distance is undefined when either vector has zero norm.
class ZeroVectorError : public Error {
public:
    explicit ZeroVectorError(const std::string& msg)
        : Error(Raw{}, "ZeroVectorError: " + msg) {}
};

// Invalid synthetic-layout parameters.
class SpecError : public Error {
public:
    explicit SpecError(const std::string& msg) : Error(Raw{}, "SpecError: " + msg) {}
};

// Reports being compared do not share a class vocabulary.
class VocabularyMismatchError : public Error {
public:
    explicit VocabularyMismatchError(const std::string& msg)
        : Error(Raw{}, "VocabularyMismatchError: " + msg) {}
};

} // namespace kstar
