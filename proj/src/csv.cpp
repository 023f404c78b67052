#include "csv.hpp"

#include "errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mhtc::io {

std::string format_double(double v) {
    char tmp[64];
    std::snprintf(tmp, sizeof(tmp), "%.12g", v);
    return tmp;
}

CsvWriter::CsvWriter(std::string version, uint64_t seed) {
    buf_ += "# mhtc " + version + "\n";
    buf_ += "# seed = " + std::to_string(seed) + "\n";
}

void CsvWriter::comment(const std::string& line) { buf_ += "# " + line + "\n"; }

void CsvWriter::config_block(const std::string& serialized_config) {
    std::stringstream ss(serialized_config);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) buf_ += "# config " + line + "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    columns_ = columns.size();
    for (size_t i = 0; i < columns.size(); ++i) {
        if (i) buf_ += ",";
        buf_ += columns[i];
    }
    buf_ += "\n";
}

void CsvWriter::sep() {
    if (in_row_) buf_ += ",";
    ++in_row_;
}

void CsvWriter::field(double v) {
    sep();
    buf_ += format_double(v);
}

void CsvWriter::field(const std::string& v) {
    sep();
    buf_ += v;
}

void CsvWriter::field(uint64_t v) {
    sep();
    buf_ += std::to_string(v);
}

void CsvWriter::field(int v) {
    sep();
    buf_ += std::to_string(v);
}

void CsvWriter::end_row() {
    if (columns_ && in_row_ != columns_)
        throw error(errc::io, "csv row width does not match header");
    in_row_ = 0;
    buf_ += "\n";
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error(errc::io, "cannot open output file: " + path);
    out << buf_;
    if (!out) throw error(errc::io, "write failed: " + path);
}

} // namespace mhtc::io
