#include "lrk/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lrk/errors.hpp"

namespace lrk {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw InvalidInput("CSV row width does not match header");
    rows_.push_back(std::move(cells));
}

void CsvTable::append(const CsvTable& other) {
    if (other.header_ != header_) throw InvalidInput("CSV headers differ");
    rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

namespace {

void put_cell(std::string& out, const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") == std::string::npos) {
        out += cell;
        return;
    }
    out += '"';
    for (char ch : cell) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
}

void put_row(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        put_cell(out, cells[i]);
    }
    out += '\n';
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string CsvTable::str() const {
    std::string out;
    put_row(out, header_);
    for (const auto& r : rows_) put_row(out, r);
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidInput("cannot open " + path.string() + " for writing");
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw InvalidInput("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ConfigEntries parse_config(std::string_view text) {
    ConfigEntries out;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw InvalidInput("config line " + std::to_string(line_no) + ": expected key = value");
        }
        auto key = trim(std::string_view(body).substr(0, eq));
        auto value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw InvalidInput("config line " + std::to_string(line_no) + ": empty key");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

ConfigEntries load_config(const std::filesystem::path& path) { return parse_config(read_text_file(path)); }

}  // namespace lrk
