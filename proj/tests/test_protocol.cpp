#include <gtest/gtest.h>

#include "smartskin/protocol.hpp"

using namespace smartskin;

namespace {

Measurement sample() {
  Measurement m;
  for (int t = 0; t < 42; ++t) m.mean_pressure.push_back(-3.25 + 0.1 * t);
  m.freestream_pressure = 0.1 + 0.2;
  return m;
}

}  // namespace

TEST(Protocol, RequestFormatAndParse) {
  const auto p = parse_pattern(
      "1,1,1,1,1,1,1,1,1,1,1,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,"
      "1,1,1,1,1,1,1,1,1,1,1,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0");
  const std::string line = protocol::format_request(p);
  EXPECT_EQ(line.rfind("EVAL 1,1,1", 0), 0u);
  EXPECT_EQ(line.back(), '\n');
  EXPECT_EQ(protocol::parse_request(line), p);
  EXPECT_THROW(protocol::parse_request("EVAL 1,2"), EncodingError);
  EXPECT_THROW(protocol::parse_request("HELLO"), EncodingError);
}

TEST(Protocol, MeasurementRoundTripsExactly) {
  const auto m = sample();
  const auto back = protocol::parse_response(protocol::format_measurement(m));
  EXPECT_EQ(back.mean_pressure, m.mean_pressure);
  EXPECT_EQ(back.freestream_pressure, m.freestream_pressure);
}

TEST(Protocol, ToleratesCarriageReturnAndExtraSpaces) {
  std::string line = protocol::format_measurement(sample());
  line.pop_back();
  line.insert(5, "  ");
  line += "  \r\n";
  EXPECT_EQ(protocol::parse_response(line).mean_pressure.size(), 42u);
}

TEST(Protocol, WrongTapCountIsDimensionMismatch) {
  auto m = sample();
  m.mean_pressure.pop_back();
  EXPECT_THROW(protocol::parse_response(protocol::format_measurement(m)), DimensionMismatch);
  m = sample();
  m.mean_pressure.push_back(1.0);
  EXPECT_THROW(protocol::parse_response(protocol::format_measurement(m)), DimensionMismatch);
}

TEST(Protocol, GarbageIsMalformed) {
  EXPECT_THROW(protocol::parse_response("HELLO 1 2 3"), MalformedResponse);
  EXPECT_THROW(protocol::parse_response("MEAS"), MalformedResponse);
  EXPECT_THROW(protocol::parse_response("MEAS 1 2 x 4"), MalformedResponse);
  std::string nan_line = "MEAS";
  for (int i = 0; i < 42; ++i) nan_line += " nan";
  nan_line += " 0";
  EXPECT_THROW(protocol::parse_response(nan_line), MalformedResponse);
}

TEST(Protocol, ErrRecordIsPlantFailure) {
  try {
    protocol::parse_response("ERR valve stuck");
    FAIL();
  } catch (const PlantFailure& e) {
    EXPECT_NE(std::string(e.what()).find("valve stuck"), std::string::npos);
  }
  EXPECT_EQ(protocol::format_error("a\nb"), "ERR a b\n");
}
