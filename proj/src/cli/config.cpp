#include "horoforge/cli/config.hpp"

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace horoforge::cli {

namespace {

bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

bool blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::size_t skip_blank(const std::string& s, std::size_t i) {
    while (i < s.size() && blank(s[i])) ++i;
    return i;
}

std::size_t trim_end(const std::string& s, std::size_t end) {
    while (end > 0 && blank(s[end - 1])) --end;
    return end;
}

} // namespace

ParseError::ParseError(std::string source, std::size_t line, std::size_t column, std::string message)
    : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      source_(std::move(source)), line_(line), column_(column), message_(std::move(message)) {}

Config Config::parse(std::istream& in, const std::string& source) {
    Config config;
    config.source_ = source;
    std::string raw;
    std::string section;
    bool in_section = false;
    for (std::size_t line_number = 1; std::getline(in, raw); ++line_number) {
        const std::string line = raw.substr(0, raw.find('#'));
        std::size_t i = skip_blank(line, 0);
        if (i == line.size()) continue;
        auto fail = [&](std::size_t index, const std::string& message) {
            throw ParseError(source, line_number, index + 1, message);
        };

        if (line[i] == '[') {
            const std::size_t start = skip_blank(line, i + 1);
            std::size_t end = start;
            while (end < line.size() && name_char(line[end])) ++end;
            if (end == start) fail(start, "expected a section name");
            const std::size_t close = skip_blank(line, end);
            if (close >= line.size() || line[close] != ']') fail(close, "expected ']'");
            const std::size_t rest = skip_blank(line, close + 1);
            if (rest != line.size()) fail(rest, "unexpected text after section header");
            section = line.substr(start, end - start);
            if (config.section_lines_.count(section) != 0) {
                fail(start, "section [" + section + "] already defined on line " +
                                std::to_string(config.section_lines_[section]));
            }
            config.section_lines_[section] = line_number;
            config.sections_[section];
            in_section = true;
            continue;
        }

        std::size_t key_end = i;
        while (key_end < line.size() && name_char(line[key_end])) ++key_end;
        if (key_end == i) fail(i, "expected a key or [section]");
        const std::string key = line.substr(i, key_end - i);
        const std::size_t equals = skip_blank(line, key_end);
        if (equals >= line.size() || line[equals] != '=') fail(equals, "expected '=' after key '" + key + "'");
        if (!in_section) fail(i, "key '" + key + "' appears before any [section]");
        const std::size_t value_start = skip_blank(line, equals + 1);
        const std::size_t value_end = trim_end(line, line.size());
        if (value_start >= value_end) fail(value_start, "empty value for key '" + key + "'");
        auto& entries = config.sections_[section];
        if (const auto it = entries.find(key); it != entries.end()) {
            fail(i, "duplicate key '" + key + "' in [" + section + "] (first on line " +
                        std::to_string(it->second.line) + ")");
        }
        entries[key] = ConfigValue{line.substr(value_start, value_end - value_start), line_number, value_start + 1, i + 1};
    }
    return config;
}

Config Config::parse_string(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    return parse(in, source);
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    Config config = parse(in, path);
    config.directory_ = std::filesystem::path(path).parent_path().string();
    return config;
}

const ConfigValue* Config::find(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
}

void Config::set(const std::string& section, const std::string& key, std::string value) {
    sections_[section][key] = ConfigValue{std::move(value), 0, 0, 0};
}

void Config::fail_at(const ConfigValue& value, std::size_t offset, const std::string& message) const {
    if (value.line == 0) throw UsageError(message + " ('" + value.text + "')");
    throw ParseError(source_, value.line, value.column + offset, message);
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    const ConfigValue* value = find(section, key);
    return value ? value->text : fallback;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
    const ConfigValue* value = find(section, key);
    if (!value) return fallback;
    double out = 0.0;
    const char* first = value->text.data();
    const char* last = first + value->text.size();
    const auto [end, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || end != last) {
        fail_at(*value, static_cast<std::size_t>(end - first), "expected a number for '" + key + "'");
    }
    return out;
}

long long Config::get_int(const std::string& section, const std::string& key, long long fallback) const {
    const ConfigValue* value = find(section, key);
    if (!value) return fallback;
    long long out = 0;
    const char* first = value->text.data();
    const char* last = first + value->text.size();
    const auto [end, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || end != last) {
        fail_at(*value, static_cast<std::size_t>(end - first), "expected an integer for '" + key + "'");
    }
    return out;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    const ConfigValue* value = find(section, key);
    if (!value) return fallback;
    if (value->text == "true" || value->text == "yes" || value->text == "1") return true;
    if (value->text == "false" || value->text == "no" || value->text == "0") return false;
    fail_at(*value, 0, "expected true or false for '" + key + "'");
}

void Config::require_known(const Schema& schema) const {
    for (const auto& [section, entries] : sections_) {
        const auto known = schema.find(section);
        if (known == schema.end()) {
            const auto line = section_lines_.find(section);
            if (line == section_lines_.end()) throw UsageError("unknown config section [" + section + "]");
            throw ParseError(source_, line->second, 2, "unknown section [" + section + "]");
        }
        if (known->second.count("*") != 0) continue;
        for (const auto& [key, value] : entries) {
            if (known->second.count(key) != 0) continue;
            if (value.line == 0) throw UsageError("unknown key '" + key + "' in [" + section + "]");
            throw ParseError(source_, value.line, value.key_column, "unknown key '" + key + "' in [" + section + "]");
        }
    }
}

std::vector<std::pair<std::string, std::size_t>> split_trimmed(const std::string& text, char separator) {
    std::vector<std::pair<std::string, std::size_t>> pieces;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(separator, start);
        if (end == std::string::npos) end = text.size();
        const std::size_t first = skip_blank(text, start);
        const std::size_t last = trim_end(text, end);
        if (first < last) pieces.emplace_back(text.substr(first, last - first), first);
        start = end + 1;
    }
    return pieces;
}

} // namespace horoforge::cli
