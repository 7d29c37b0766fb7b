#pragma once

#include "horoforge/core/errors.hpp"

#include <cstddef>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace horoforge::cli {

/// Malformed input with a position: "<source>:<line>:<column>: <message>".
class ParseError : public Error {
public:
    ParseError(std::string source, std::size_t line, std::size_t column, std::string message);
    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string source_;
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

/// Bad command line or unknown name; maps to exit code 2 like ParseError.
class UsageError : public Error {
public:
    using Error::Error;
};

struct ConfigValue {
    std::string text;
    std::size_t line = 0;   // 0 for values set programmatically
    std::size_t column = 0; // 1-based column of the first value character
    std::size_t key_column = 0;
};

/// Sectioned "key = value" file.
///
///   # comment (anywhere on a line)
///   [section]
///   key = value
///
/// Keys and section names use [A-Za-z0-9_.-]. Every key belongs to a section,
/// keys are unique within a section, values are trimmed and nonempty.
class Config {
public:
    using Schema = std::map<std::string, std::set<std::string>>;

    static Config parse(std::istream& in, const std::string& source = "<config>");
    static Config parse_string(const std::string& text, const std::string& source = "<config>");
    // Throws UsageError when the file cannot be opened.
    static Config load(const std::string& path);

    const std::string& source() const noexcept { return source_; }
    // Directory of the loaded file, for resolving relative paths; empty otherwise.
    const std::string& directory() const noexcept { return directory_; }

    const ConfigValue* find(const std::string& section, const std::string& key) const;
    bool has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }
    void set(const std::string& section, const std::string& key, std::string value);

    std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long long get_int(const std::string& section, const std::string& key, long long fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

    /// ParseError at a value's position.
    [[noreturn]] void fail_at(const ConfigValue& value, std::size_t offset, const std::string& message) const;
    /// Rejects sections and keys outside the schema.
    void require_known(const Schema& schema) const;

private:
    std::string source_ = "<config>";
    std::string directory_;
    std::map<std::string, std::map<std::string, ConfigValue>> sections_;
    std::map<std::string, std::size_t> section_lines_;
};

/// Splits on a separator, trimming whitespace; empty pieces are dropped.
/// Offsets of each piece within text are returned alongside.
std::vector<std::pair<std::string, std::size_t>> split_trimmed(const std::string& text, char separator);

} // namespace horoforge::cli
