#include "curricula/csv.hpp"

#include <fstream>
#include <sstream>

#include "curricula/errors.hpp"

namespace curricula::csv {

namespace {

enum class State { field_start, unquoted, quoted, quote_seen };

}  // namespace

std::vector<Row> parse_string(std::string_view text, const std::string& origin) {
    std::vector<Row> rows;
    Row current;
    std::string field;
    State state = State::field_start;
    std::size_t row_no = 1;

    auto end_field = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        current.row_no = row_no++;
        rows.push_back(std::move(current));
        current = Row{};
        state = State::field_start;
    };

    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const char c = text[i];
        switch (state) {
            case State::field_start:
                if (c == '"') {
                    state = State::quoted;
                } else if (c == ',') {
                    end_field();
                } else if (c == '\n') {
                    end_row();
                } else if (c == '\r') {
                    // swallowed; the following \n (if any) ends the row
                    if (i + 1 < n && text[i + 1] == '\n') ++i;
                    end_row();
                } else {
                    field.push_back(c);
                    state = State::unquoted;
                }
                break;
            case State::unquoted:
                if (c == ',') {
                    end_field();
                    state = State::field_start;
                } else if (c == '\n') {
                    end_row();
                } else if (c == '\r') {
                    if (i + 1 < n && text[i + 1] == '\n') ++i;
                    end_row();
                } else if (c == '"') {
                    throw IngestError(origin + ": row " + std::to_string(row_no) +
                                      ": bare quote inside unquoted field");
                } else {
                    field.push_back(c);
                }
                break;
            case State::quoted:
                if (c == '"') {
                    state = State::quote_seen;
                } else {
                    field.push_back(c);
                }
                break;
            case State::quote_seen:
                if (c == '"') {
                    field.push_back('"');
                    state = State::quoted;
                } else if (c == ',') {
                    end_field();
                    state = State::field_start;
                } else if (c == '\n') {
                    end_row();
                } else if (c == '\r') {
                    if (i + 1 < n && text[i + 1] == '\n') ++i;
                    end_row();
                } else {
                    throw IngestError(origin + ": row " + std::to_string(row_no) +
                                      ": stray character after closing quote");
                }
                break;
        }
        ++i;
    }
    if (state == State::quoted) {
        throw IngestError(origin + ": row " + std::to_string(row_no) + ": unterminated quoted field");
    }
    // Trailing record without newline; a lone empty tail is not a record.
    if (state != State::field_start || !field.empty() || !current.fields.empty()) {
        end_row();
    }
    return rows;
}

std::vector<Row> parse_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IngestError("cannot open file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path.string());
}

std::string escape_field(std::string_view field) {
    const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out << ',';
        out << escape_field(fields[i]);
    }
    out << '\n';
}

}  // namespace curricula::csv
