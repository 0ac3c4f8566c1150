#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "diracsim/propagator.hpp"

namespace diracsim {

// Shortest round-trip decimal form, 17 significant digits, locale independent.
std::string format_g17(double v);

void write_text_file(const std::string& path, const std::string& text);

// Column-oriented CSV with LF line endings and a single header row.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns);

void write_series_csv(const std::string& path, const ObservableSeries& s);

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64_file(const std::string& path);
std::uint64_t file_size_bytes(const std::string& path);

} // namespace diracsim
