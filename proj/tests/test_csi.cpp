#include <functional>
#include <sstream>

#include <gtest/gtest.h>

#include "csiaug/csi.hpp"
#include "csiaug/error.hpp"

using namespace csiaug;

namespace {

CsiRecord record_with_slots(std::size_t slots) {
  CsiRecord r;
  r.seq = 7;
  r.timestamp_ms = 1234;
  r.rssi_dbm = -51;
  for (std::size_t i = 0; i < slots; ++i) {
    r.iq.push_back({static_cast<std::int32_t>(i), -static_cast<std::int32_t>(2 * i)});
  }
  return r;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no csiaug::Error thrown";
  return ErrorKind::runtime;
}

}  // namespace

TEST(CsiParse, ReadsDefaultLayout) {
  const auto r = parse_csi_line("3,100,-60,[1 2 -3 4]", ColumnMapping{});
  EXPECT_EQ(r.seq, 3);
  EXPECT_EQ(r.timestamp_ms, 100);
  ASSERT_TRUE(r.rssi_dbm);
  EXPECT_EQ(*r.rssi_dbm, -60);
  ASSERT_EQ(r.iq.size(), 2u);
  EXPECT_EQ(r.iq[0], (IqPair{1, 2}));
  EXPECT_EQ(r.iq[1], (IqPair{-3, 4}));
}

TEST(CsiParse, RealImagOrderSwapsPairs) {
  ColumnMapping m;
  m.order = IqOrder::real_imag;
  const auto r = parse_csi_line("0,0,,[5 6]", m);
  EXPECT_FALSE(r.rssi_dbm);
  EXPECT_EQ(r.iq[0], (IqPair{6, 5}));
}

TEST(CsiParse, QuotedCommaSeparatedArray) {
  const auto r = parse_csi_line("1,2,-3,\"[1,2,3,4]\"", ColumnMapping{});
  EXPECT_EQ(r.iq.size(), 2u);
}

TEST(CsiParse, FormatRoundTrips) {
  ColumnMapping m;
  m.delimiter = ';';
  m.seq = 3;
  m.csi = 0;
  m.timestamp = 2;
  m.rssi = 1;
  const auto r = record_with_slots(64);
  EXPECT_EQ(parse_csi_line(format_csi_line(r, m), m), r);
}

TEST(CsiParse, ErrorsAreClassified) {
  const ColumnMapping m;
  EXPECT_EQ(kind_of([&] { parse_csi_line("x,1,2,[1 2]", m); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([&] { parse_csi_line("1,1,2,[1 2 q 4]", m); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([&] { parse_csi_line("1,1,2,[1 2 3]", m); }), ErrorKind::structural);
  EXPECT_EQ(kind_of([&] { parse_csi_line("1,1,2", m); }), ErrorKind::structural);
  EXPECT_EQ(kind_of([&] { parse_csi_line("1,1,2,1 2", m); }), ErrorKind::structural);
}

TEST(CsiLog, ReportsSourceAndLine) {
  std::istringstream in("0,0,-1,[1 1]\n\n2,20,-1,[1 oops]\n");
  try {
    read_csi_log(in, ColumnMapping{}, "cap.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parse);
    EXPECT_NE(std::string(e.what()).find("cap.csv:3:"), std::string::npos) << e.what();
  }
}

TEST(CsiLog, HeaderNamesAndNonMonotonicTimestamps) {
  std::istringstream in("type,id,ts,data\nX,0,50,[1 0]\nX,1,40,[0 1]\nX,2,60,[3 4]\n");
  ColumnMapping m;
  m.header = true;
  m.rssi.reset();
  m.column_names.seq = "id";
  m.column_names.timestamp = "ts";
  m.column_names.csi = "data";
  const auto log = read_csi_log(in, m);
  ASSERT_EQ(log.records.size(), 3u);
  EXPECT_EQ(log.records[2].seq, 2);
  EXPECT_EQ(log.nonmonotonic_timestamps, 1u);
}

TEST(CsiLog, MissingHeaderColumnIsStructural) {
  std::istringstream in("a,b\n1,2\n");
  ColumnMapping m;
  m.header = true;
  m.column_names.csi = "data";
  EXPECT_EQ(kind_of([&] { read_csi_log(in, m); }), ErrorKind::structural);
}

TEST(Selection, Lltf52IsFftOrdered) {
  const auto sel = SubcarrierSelection::lltf52();
  ASSERT_EQ(sel.indices.size(), kLltfSubcarriers);
  EXPECT_EQ(sel.indices.front(), 38u);  // subcarrier -26
  EXPECT_EQ(sel.indices[25], 63u);      // subcarrier -1
  EXPECT_EQ(sel.indices[26], 1u);       // subcarrier 1
  EXPECT_EQ(sel.indices.back(), 26u);   // subcarrier 26
  sel.validate(64);
  const auto centered = SubcarrierSelection::lltf52_centered();
  EXPECT_EQ(centered.indices.front(), 6u);
  EXPECT_EQ(centered.indices.back(), 58u);
  EXPECT_TRUE(SubcarrierSelection::preset("lltf52_centered"));
  EXPECT_FALSE(SubcarrierSelection::preset("nope"));
}

TEST(Selection, ValidationRejectsBadLists) {
  auto sel = SubcarrierSelection::lltf52();
  EXPECT_EQ(kind_of([&] { sel.validate(40); }), ErrorKind::bounds);
  sel.indices[1] = sel.indices[0];
  EXPECT_EQ(kind_of([&] { sel.validate(64); }), ErrorKind::parameter);
  sel.indices.pop_back();
  EXPECT_EQ(kind_of([&] { sel.validate(64); }), ErrorKind::parameter);
}

TEST(Amplitudes, MagnitudeOfSelectedSlots) {
  CsiRecord r;
  r.iq = {{3, 4}, {0, 0}, {-5, 12}};
  SubcarrierSelection sel{"t", {2, 0, 1}};
  const auto a = amplitudes(r, sel);
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0], 13.0);
  EXPECT_EQ(a[1], 5.0);
  EXPECT_EQ(a[2], 0.0);
  SubcarrierSelection outside{"t", {3}};
  EXPECT_EQ(kind_of([&] { amplitudes(r, outside); }), ErrorKind::bounds);
}
