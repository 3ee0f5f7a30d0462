#ifndef ONFLOW_CSV_HPP
#define ONFLOW_CSV_HPP

// Minimal RFC 4180 reader/writer. Rows keep the physical line number of their
// first character so validation errors can point at the offending line.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"

namespace onflow::csv {

struct Row {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

inline std::vector<Row> parse(std::string_view text) {
    std::vector<Row> rows;
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    std::size_t line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        Row row;
        row.line = line;
        std::string field;
        bool quoted = false;
        bool field_started = false;
        for (;;) {
            if (i >= text.size()) {
                if (quoted) throw Error(ErrorCode::MalformedRow, "unterminated quoted field", row.line);
                row.fields.push_back(std::move(field));
                break;
            }
            char c = text[i];
            if (quoted) {
                if (c == '"') {
                    if (i + 1 < text.size() && text[i + 1] == '"') {
                        field.push_back('"');
                        i += 2;
                    } else {
                        quoted = false;
                        ++i;
                    }
                } else {
                    if (c == '\n') ++line;
                    field.push_back(c);
                    ++i;
                }
                continue;
            }
            if (c == '"' && !field_started) {
                quoted = true;
                field_started = true;
                ++i;
            } else if (c == ',') {
                row.fields.push_back(std::move(field));
                field.clear();
                field_started = false;
                ++i;
            } else if (c == '\r' || c == '\n') {
                row.fields.push_back(std::move(field));
                if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
                ++i;
                ++line;
                break;
            } else {
                field.push_back(c);
                field_started = true;
                ++i;
            }
        }
        bool blank = row.fields.size() == 1 && row.fields.front().empty();
        if (!blank) rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

inline std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

/// Appends one LF-terminated record.
inline void append_row(std::string& out, std::initializer_list<std::string_view> fields) {
    bool first = true;
    for (auto f : fields) {
        if (!first) out.push_back(',');
        out += escape(f);
        first = false;
    }
    out.push_back('\n');
}

}  // namespace onflow::csv

#endif  // ONFLOW_CSV_HPP
