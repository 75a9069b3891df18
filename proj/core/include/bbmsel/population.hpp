#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bbmsel/label.hpp"

namespace bbmsel {

enum class Colour : std::uint8_t { White = 0, Red = 1, Blue = 2 };

struct Particle {
  Label label;
  double x = 0.0;
  double birth_time = 0.0;
  Colour colour = Colour::White;
  /// Engine-specific state (for example the index of an open breakout trial); 0 means none.
  std::uint32_t tag = 0;
  /// Engine-specific scalar attached to the state in `tag`.
  double aux = 0.0;
};

struct Population {
  double time = 0.0;
  std::vector<Particle> particles;

  std::size_t size() const { return particles.size(); }
  std::vector<double> positions() const;
};

enum class EventKind : std::uint8_t { Branch, AbsorbLo, AbsorbHi, Freeze };

const char* to_string(EventKind k);
EventKind parse_event_kind(const std::string& s);

struct Event {
  EventKind kind = EventKind::Branch;
  double time = 0.0;
  Label label;
  double position = 0.0;
  /// Offspring count for branch events, 0 otherwise.
  int k = 0;
};

/// CSV with header event,time,label,position,k preceded by a manifest-hash comment.
void write_event_log(std::ostream& os, const std::vector<Event>& events, const std::string& manifest_hash);
std::vector<Event> read_event_log(std::istream& is);

/// Fixed 17-significant-digit rendering used by every text output.
std::string format_real(double v);

}  // namespace bbmsel
