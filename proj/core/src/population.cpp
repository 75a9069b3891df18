#include "bbmsel/population.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "bbmsel/errors.hpp"

namespace bbmsel {

std::vector<double> Population::positions() const {
  std::vector<double> out;
  out.reserve(particles.size());
  for (const auto& p : particles) out.push_back(p.x);
  return out;
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Branch: return "branch";
    case EventKind::AbsorbLo: return "absorb_lo";
    case EventKind::AbsorbHi: return "absorb_hi";
    case EventKind::Freeze: return "freeze";
  }
  return "?";
}

EventKind parse_event_kind(const std::string& s) {
  if (s == "branch") return EventKind::Branch;
  if (s == "absorb_lo") return EventKind::AbsorbLo;
  if (s == "absorb_hi") return EventKind::AbsorbHi;
  if (s == "freeze") return EventKind::Freeze;
  throw DomainError("unknown event kind '" + s + "'");
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_event_log(std::ostream& os, const std::vector<Event>& events, const std::string& manifest_hash) {
  os << "# manifest_sha256=" << manifest_hash << '\n';
  os << "event,time,label,position,k\n";
  for (const auto& e : events) {
    os << to_string(e.kind) << ',' << format_real(e.time) << ',' << e.label.to_string() << ','
       << format_real(e.position) << ',' << e.k << '\n';
  }
}

std::vector<Event> read_event_log(std::istream& is) {
  std::vector<Event> out;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "event,time,label,position,k") throw DomainError("event log: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    std::stringstream ss(line);
    std::string kind, time, label, pos, k;
    if (!std::getline(ss, kind, ',') || !std::getline(ss, time, ',') || !std::getline(ss, label, ',') ||
        !std::getline(ss, pos, ',') || !std::getline(ss, k))
      throw DomainError("event log: malformed row '" + line + "'");
    out.push_back({parse_event_kind(kind), std::stod(time), Label::parse(label), std::stod(pos), std::stoi(k)});
  }
  return out;
}

}  // namespace bbmsel
