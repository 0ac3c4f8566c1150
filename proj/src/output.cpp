#include "diracsim/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "diracsim/errors.hpp"

namespace diracsim {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw ValidationError("write failed for " + path);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns) {
    if (header.size() != columns.size())
        throw ValidationError("csv header and column counts differ");
    if (columns.empty()) throw ValidationError("csv needs at least one column");
    const std::size_t rows = columns[0]->size();
    for (const auto* c : columns)
        if (c->size() != rows) throw ValidationError("csv columns have unequal lengths");

    std::ostringstream out;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j) out << ',';
        out << header[j];
    }
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (j) out << ',';
            out << format_g17((*columns[j])[r]);
        }
        out << '\n';
    }
    write_text_file(path, out.str());
}

void write_series_csv(const std::string& path, const ObservableSeries& s) {
    std::vector<std::string> header = s.column_names();
    std::vector<const std::vector<double>*> cols;
    for (const auto& name : header) cols.push_back(&s.column(name));
    write_csv(path, header, cols);
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path + " for checksumming");
    std::uint64_t h = 14695981039346656037ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
        if (in.eof()) break;
    }
    return h;
}

std::uint64_t file_size_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw ValidationError("cannot open " + path);
    return static_cast<std::uint64_t>(in.tellg());
}

} // namespace diracsim
