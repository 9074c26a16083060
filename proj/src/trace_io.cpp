#include "rdciag/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rdciag {

namespace {
const char* kHeader = "k,D,gap,dist2,gamma,primal_err2,max_age,seconds";

void put(std::ostream& o, double v) {
  if (std::isnan(v)) return;  // missing reference -> empty field
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  o << buf;
}
}  // namespace

void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path);
  out << kHeader << "\n";
  for (const auto& r : trace.rows) {
    out << r.k << ",";
    put(out, r.D);
    out << ",";
    put(out, r.gap);
    out << ",";
    put(out, r.dist2);
    out << ",";
    put(out, r.gamma);
    out << ",";
    put(out, r.primal_err2);
    out << "," << r.max_age << ",";
    put(out, r.seconds);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write_trace_csv: write failed: " + path);
}

Trace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_trace_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kHeader)
    throw std::runtime_error("read_trace_csv: bad header in " + path);
  Trace t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    TraceRow r;
    auto next = [&]() -> std::string {
      std::getline(ss, field, ',');
      return field;
    };
    auto opt = [&](const std::string& s) {
      return s.empty() ? std::numeric_limits<double>::quiet_NaN()
                       : std::strtod(s.c_str(), nullptr);
    };
    r.k = std::strtol(next().c_str(), nullptr, 10);
    r.D = opt(next());
    r.gap = opt(next());
    r.dist2 = opt(next());
    r.gamma = opt(next());
    r.primal_err2 = opt(next());
    r.max_age = static_cast<int>(std::strtol(next().c_str(), nullptr, 10));
    r.seconds = opt(next());
    t.rows.push_back(r);
  }
  return t;
}

}  // namespace rdciag
