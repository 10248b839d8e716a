// Minimal RFC 4180 CSV reading/writing (quoted fields, embedded commas,
// quotes and newlines). Enough for the corpus and annotation formats.
#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "graded/core.hpp"

namespace graded::csv {

// Reads one CSV record (possibly spanning physical lines inside quotes).
// Returns std::nullopt at end of input. `line_no` is advanced past all
// physical lines consumed.
inline std::optional<std::vector<std::string>> read_record(std::istream& in,
                                                           std::size_t& line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool any = false;
    int c;
    while ((c = in.get()) != EOF) {
        any = true;
        char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') line_no++;
                field.push_back(ch);
            }
        } else if (ch == '"') {
            if (!field.empty())
                throw DataError("line " + std::to_string(line_no) +
                                ": stray quote inside unquoted field");
            in_quotes = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch == '\r') {
            // swallow; \r\n handled at \n
        } else if (ch == '\n') {
            line_no++;
            fields.push_back(std::move(field));
            return fields;
        } else {
            field.push_back(ch);
        }
    }
    if (in_quotes)
        throw DataError("line " + std::to_string(line_no) +
                        ": unterminated quoted field");
    if (!any) return std::nullopt;
    line_no++;
    fields.push_back(std::move(field));
    return fields;
}

inline std::string escape(const std::string& s) {
    bool needs_quotes = s.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

inline void write_record(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape(fields[i]);
    }
    out << '\n';
}

}  // namespace graded::csv
