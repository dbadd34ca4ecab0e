#pragma once

#include <charconv>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pace {

// Parse error carrying the 1-based line number of the offending record.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Shortest representation that round-trips the exact double value.
std::string format_double(double v);

double parse_double(std::string_view s, std::size_t line);
int parse_int(std::string_view s, std::size_t line);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

namespace csv {

// Splits one CSV record. Handles quoted fields with "" escapes; no
// embedded newlines (records are one physical line in all our formats).
std::vector<std::string> parse_line(std::string_view line, std::size_t line_no);

// Quotes a field only when it contains a separator, quote, or newline.
std::string escape(std::string_view field);

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    Writer& field(std::string_view s);
    Writer& field(double v) { return field(format_double(v)); }
    Writer& field(int v) { return field(std::to_string(v)); }
    Writer& field(std::uint64_t v) { return field(std::to_string(v)); }
    Writer& field(const std::optional<double>& v) { return v ? field(*v) : field(""); }
    void end_row();

private:
    std::ostream& out_;
    bool row_open_ = false;
};

} // namespace csv
} // namespace pace
