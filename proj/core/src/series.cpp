#include "bbmsel/series.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "bbmsel/errors.hpp"
#include "bbmsel/population.hpp"

namespace bbmsel {

void StatsSeries::append(Row r) {
  if (r.med.size() != alphas.size()) throw DomainError("series: med arity differs from alphas");
  if (!rows.empty() && !(r.t > rows.back().t)) throw DomainError("series: times must increase strictly");
  rows.push_back(std::move(r));
}

std::vector<double> StatsSeries::times() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.t);
  return out;
}

std::vector<double> StatsSeries::med_column(std::size_t i) const {
  if (i >= alphas.size()) throw DomainError("series: alpha index out of range");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.med[i]);
  return out;
}

void write_series_csv(std::ostream& os, const StatsSeries& s, const std::string& manifest_hash) {
  os << "# manifest_sha256=" << manifest_hash << '\n';
  os << "t";
  for (double a : s.alphas) os << ",med_" << format_real(a);
  os << ",count,Z,Y,R_cum,barrier_shift\n";
  for (const auto& r : s.rows) {
    os << format_real(r.t);
    for (double m : r.med) os << ',' << format_real(m);
    os << ',' << format_real(r.count) << ',' << format_real(r.Z) << ',' << format_real(r.Y) << ','
       << format_real(r.R_cum) << ',' << format_real(r.barrier_shift) << '\n';
  }
}

namespace {

double parse_real(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw DomainError("series: malformed number '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

StatsSeries read_series_csv(std::istream& is) {
  StatsSeries s;
  std::string line;
  std::size_t ncol = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line);
    if (ncol == 0) {
      if (cells.size() < 6 || cells[0] != "t") throw DomainError("series: unexpected header");
      for (std::size_t i = 1; i + 5 < cells.size(); ++i) {
        if (cells[i].rfind("med_", 0) != 0) throw DomainError("series: expected med_<alpha> column");
        s.alphas.push_back(parse_real(cells[i].substr(4)));
      }
      ncol = cells.size();
      continue;
    }
    if (cells.size() != ncol) throw DomainError("series: row width mismatch");
    StatsSeries::Row r;
    r.t = parse_real(cells[0]);
    for (std::size_t i = 0; i < s.alphas.size(); ++i) r.med.push_back(parse_real(cells[1 + i]));
    const std::size_t k = 1 + s.alphas.size();
    r.count = parse_real(cells[k]);
    r.Z = parse_real(cells[k + 1]);
    r.Y = parse_real(cells[k + 2]);
    r.R_cum = parse_real(cells[k + 3]);
    r.barrier_shift = parse_real(cells[k + 4]);
    s.append(std::move(r));
  }
  return s;
}

}  // namespace bbmsel
