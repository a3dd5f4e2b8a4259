#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace curricula::csv {

// One parsed record. row_no counts records from 1 (the header row is row 1),
// independent of physical lines, so quoted multi-line fields do not shift it.
struct Row {
    std::vector<std::string> fields;
    std::size_t row_no = 0;
};

// Strict comma-separated parser: double-quote escaping, quoted fields may
// contain commas, quotes ("" = literal quote) and newlines. CRLF tolerated.
// Throws IngestError on a missing file or a malformed record.
std::vector<Row> parse_file(const std::filesystem::path& path);
std::vector<Row> parse_string(std::string_view text, const std::string& origin = "<string>");

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape_field(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace curricula::csv
