#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "smartskin/error.hpp"
#include "smartskin/format.hpp"
#include "smartskin/geometry.hpp"
#include "smartskin/measurement.hpp"
#include "smartskin/pattern.hpp"

// Newline-delimited text records exchanged with an external plant:
//   request   EVAL <60 comma-separated integers>
//   response  MEAS <tap pressures in Pa, space-separated> <p0>
//             ERR <message>
namespace smartskin::protocol {

inline std::string format_request(const ActuationPattern& p) { return "EVAL " + to_string(p) + "\n"; }

inline ActuationPattern parse_request(std::string_view line) {
  line = detail::trim(line);
  if (line.substr(0, 5) != "EVAL ") throw EncodingError("request does not start with 'EVAL '");
  return parse_pattern(line.substr(5));
}

inline std::string format_measurement(const Measurement& m) {
  std::string out = "MEAS";
  for (double p : m.mean_pressure) out += ' ' + format_double(p);
  out += ' ' + format_double(m.freestream_pressure);
  out += '\n';
  return out;
}

inline std::string format_error(std::string_view message) {
  std::string out = "ERR ";
  for (char c : message) out += (c == '\n' || c == '\r') ? ' ' : c;
  out += '\n';
  return out;
}

/// Parses one response line. ERR records become PlantFailure; a wrong tap count becomes
/// DimensionMismatch; anything else unparseable is MalformedResponse.
inline Measurement parse_response(std::string_view line, std::size_t expected_taps = TapGrid::kTaps) {
  line = detail::trim(line);
  if (line == "ERR" || line.substr(0, 4) == "ERR ") {
    throw PlantFailure("plant reported: " + std::string(detail::trim(line.substr(3))));
  }
  if (line.substr(0, 5) != "MEAS ") {
    throw MalformedResponse("unexpected response record '" + std::string(line.substr(0, 40)) + "'");
  }
  std::vector<double> values;
  std::size_t pos = 5;
  while (pos < line.size()) {
    const std::size_t b = line.find_first_not_of(' ', pos);
    if (b == std::string_view::npos) break;
    std::size_t e = line.find(' ', b);
    if (e == std::string_view::npos) e = line.size();
    double v = 0.0;
    if (!parse_double(line.substr(b, e - b), v)) {
      throw MalformedResponse("value " + std::to_string(values.size() + 1) + " ('" + std::string(line.substr(b, e - b)) +
                              "') is not a number");
    }
    values.push_back(v);
    pos = e;
  }
  if (values.size() < 2) throw MalformedResponse("MEAS record carries no tap values");
  if (values.size() - 1 != expected_taps) {
    throw DimensionMismatch("plant returned " + std::to_string(values.size() - 1) + " tap pressures, expected " +
                            std::to_string(expected_taps));
  }
  Measurement m;
  m.freestream_pressure = values.back();
  values.pop_back();
  m.mean_pressure = std::move(values);
  m.validate(expected_taps);
  return m;
}

}  // namespace smartskin::protocol
