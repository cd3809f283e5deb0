#pragma once

#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapforge/primes.hpp"

namespace gapforge::manifest {

inline constexpr const char* kVersion = "gapforge 0.1.0";

// Every output file embeds its manifest (JSON key or leading CSV comment).
// Timing is reported on stderr only, so identical manifests produce
// byte-identical files.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> assumptions;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["parameters"] = parameters;
    if (seed) j["seed"] = *seed;
    j["version"] = kVersion;
    j["assumptions"] = assumptions;
    return j;
  }

  std::string comment_line() const { return "# manifest " + to_json().dump(); }
};

// fixed formatting so CSV output is reproducible
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Gap-vs-bound plot data. Columns are fixed; empty input is a usage error.
inline void emit_plotdata(std::ostream& os,
                          const std::vector<primes::GapRecord>& records,
                          const RunManifest& m) {
  if (records.empty())
    throw std::invalid_argument("emit_plotdata: no records to emit");
  os << m.comment_line() << "\n";
  os << "p_lo,p_hi,gap,merit,rankin_merit\n";
  for (const auto& r : records)
    os << r.p_lo << ',' << r.p_hi << ',' << r.gap << ','
       << format_double(r.merit) << ',' << format_double(r.rankin_merit)
       << "\n";
}

}  // namespace gapforge::manifest
