#include "asim/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace asim {

std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, ptr);
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "k,loss,grad_norm_sq,w_inf,p_inf,s_term\n";
  for (const TraceRecord& r : trace) {
    out << r.k << ',' << format_double(r.loss) << ',' << format_double(r.grad_norm_sq) << ','
        << format_double(r.w_inf) << ',' << format_double(r.p_inf) << ','
        << format_double(r.s_term) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "k,loss,grad_norm_sq,w_inf,p_inf,s_term")
    throw std::runtime_error("unexpected trace schema in " + path.string());
  std::vector<TraceRecord> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TraceRecord r;
    std::istringstream ss(line);
    std::string field;
    double* slots[] = {&r.loss, &r.grad_norm_sq, &r.w_inf, &r.p_inf, &r.s_term};
    if (!std::getline(ss, field, ',')) throw std::runtime_error("short row in " + path.string());
    r.k = std::stol(field);
    for (double* slot : slots) {
      if (!std::getline(ss, field, ',')) throw std::runtime_error("short row in " + path.string());
      *slot = std::stod(field);
    }
    trace.push_back(r);
  }
  return trace;
}

}  // namespace asim
