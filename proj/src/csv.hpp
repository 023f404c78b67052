#pragma once

// CSV emission with '#'-prefixed provenance comments. Column order is part of
// the file contract; values are printed with %.12g so identical runs produce
// byte-identical files.

#include <cstdint>
#include <string>
#include <vector>

namespace mhtc::io {

class CsvWriter {
public:
    CsvWriter(std::string version, uint64_t seed);

    void comment(const std::string& line);
    void config_block(const std::string& serialized_config);
    void header(const std::vector<std::string>& columns);

    void field(double v);
    void field(const std::string& v);
    void field(uint64_t v);
    void field(int v);
    void end_row();

    const std::string& str() const { return buf_; }
    void write_file(const std::string& path) const;

private:
    std::string buf_;
    size_t columns_ = 0;
    size_t in_row_ = 0;
    void sep();
};

std::string format_double(double v);

} // namespace mhtc::io
