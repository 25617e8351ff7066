#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tdd/experiments.hpp"

namespace tdd {

namespace {

constexpr const char* kHeader =
    "scheme,sweep,net_rate,weighted_sum_rate,upper_bound,tau_r,n_selected,seed,trials,half_width";

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> opt_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

}  // namespace

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << kHeader << '\n';
  for (const ResultRow& r : rows) {
    if (r.scheme.find_first_of(",\n\"") != std::string::npos)
      throw std::invalid_argument("scheme label may not contain commas, quotes or newlines");
    out << r.scheme << ',' << fmt(r.sweep) << ',' << fmt(r.net_rate) << ','
        << fmt(r.weighted_sum_rate) << ',' << fmt(r.upper_bound) << ',' << r.tau_r << ','
        << r.n_selected << ',' << r.seed << ',' << r.trials << ',' << fmt(r.half_width) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing CSV output");
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(rows, f);
  f.close();
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw std::runtime_error("unexpected CSV header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 10) throw std::runtime_error("CSV row needs 10 fields: " + line);
    ResultRow r;
    r.scheme = f[0];
    r.sweep = opt_number(f[1]);
    r.net_rate = std::stod(f[2]);
    r.weighted_sum_rate = std::stod(f[3]);
    r.upper_bound = opt_number(f[4]);
    r.tau_r = std::stoi(f[5]);
    r.n_selected = std::stoi(f[6]);
    r.seed = std::stoull(f[7]);
    r.trials = std::stoull(f[8]);
    r.half_width = std::stod(f[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> read_csv_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  return read_csv(f);
}

}  // namespace tdd
