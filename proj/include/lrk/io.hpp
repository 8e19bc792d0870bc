#pragma once

// CSV text with shortest round-trip floats, file output and the config file
// format (one `key = value` per line, `#` comments).

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lrk {

/// Shortest representation that parses back to the same double; "nan",
/// "inf" and "-inf" for non-finite values.
std::string format_double(double v);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    /// Cells are quoted when they contain a comma, quote or newline.
    void add_row(std::vector<std::string> cells);
    void append(const CsvTable& other);

    [[nodiscard]] std::size_t rows() const { return rows_.size(); }
    [[nodiscard]] const std::vector<std::string>& header() const { return header_; }
    /// Header plus rows, LF line endings.
    [[nodiscard]] std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Writes bytes exactly; throws InvalidInput when the file cannot be opened.
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Entries in file order. Throws InvalidInput on lines without '=' or with
/// an empty key.
ConfigEntries parse_config(std::string_view text);
ConfigEntries load_config(const std::filesystem::path& path);

}  // namespace lrk
