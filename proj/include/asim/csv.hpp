#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "asim/optim.hpp"

namespace asim {

// Shortest decimal representation that round-trips to the same double, so
// repeated runs emit byte-identical files.
std::string format_double(double x);

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& trace);

std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path);

}  // namespace asim
