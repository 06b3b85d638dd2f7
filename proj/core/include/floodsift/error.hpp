#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace floodsift {

// Base of every error raised by the library. `stage()` names the pipeline
// step that failed ("load", "encode", "scale", "split", "train", ...).
class Error : public std::runtime_error {
public:
    Error(std::string stage, const std::string& message)
        : std::runtime_error(message), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

// Problems with the input data: schema, parsing, labels, categories, shapes.
class DataError : public Error {
public:
    using Error::Error;
};

class SchemaError : public DataError {
public:
    SchemaError(const std::string& column, const std::string& message)
        : DataError("load", message), column_(column) {}

    const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

class ParseError : public DataError {
public:
    ParseError(std::size_t row, const std::string& column, const std::string& message)
        : DataError("load", message), row_(row), column_(column) {}

    // 1-based data row (the header is row 0).
    std::size_t row() const noexcept { return row_; }
    const std::string& column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

class LabelError : public DataError {
public:
    using DataError::DataError;
};

class EncodingError : public DataError {
public:
    EncodingError(const std::string& column, const std::string& category)
        : DataError("encode", "unseen category '" + category + "' in column " + column),
          column_(column), category_(category) {}

    const std::string& column() const noexcept { return column_; }
    const std::string& category() const noexcept { return category_; }

private:
    std::string column_;
    std::string category_;
};

// Model fitting could not proceed (degenerate classes, non-finite input, ...).
class TrainingError : public Error {
public:
    using Error::Error;
};

}  // namespace floodsift
