#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "error.hpp"
#include "fixtures.hpp"
#include "log_ingest.hpp"

namespace clickseg {
namespace {

TEST(TimestampTest, ParsesClickDataFormat) {
  const auto ts = parse_timestamp("2021-01-25 23:00:00.939");
  ASSERT_TRUE(ts);
  EXPECT_EQ(format_timestamp(*ts), "2021-01-25 23:00:00.939");
  // 2021-01-25 is day 18652 of the Unix epoch
  EXPECT_EQ(ts->time_since_epoch().count(), ((18652LL * 24 + 23) * 3600) * 1000 + 939);
}

TEST(TimestampTest, ParsesIsoVariants) {
  const auto base = parse_timestamp("2021-01-25 23:00:00.939");
  EXPECT_EQ(parse_timestamp("2021-01-25T23:00:00.939Z"), base);
  EXPECT_EQ(parse_timestamp("2021-01-26T00:00:00.939+01:00"), base);
  EXPECT_EQ(parse_timestamp("2021-01-25T22:30:00.939-0030"), base);
  EXPECT_EQ(parse_timestamp("2021-01-25T23:00:00.939000Z"), base);
  EXPECT_EQ(parse_timestamp("2021-01-25 23:00:00.9"), parse_timestamp("2021-01-25 23:00:00.900"));
  EXPECT_TRUE(parse_timestamp("2021-01-25 23:00:00"));
}

TEST(TimestampTest, RejectsMalformedOrTruncating) {
  for (const char* bad : {"", "2021-01-25", "2021-13-01 00:00:00", "2021-02-30 00:00:00", "2021-01-25 24:00:00",
                          "2021-01-25 23:00:00.", "2021-01-25 23:00:00.9391", "2021-01-25 23:00:00Zx",
                          "21-01-25 23:00:00", "2021-01-25 23:00:00 "}) {
    EXPECT_FALSE(parse_timestamp(bad)) << bad;
  }
}

TEST(ParseEventLogTest, ReadsClickDataSample) {
  const auto log = parse_event_log(testing::kSampleClicksCsv, ColumnSchema{});
  ASSERT_EQ(log.events.size(), 4u);
  EXPECT_EQ(log.columns, (std::vector<std::string>{"timestamp", "screen", "user", "team", "os"}));
  EXPECT_EQ(log.extra_columns, (std::vector<std::string>{"team", "os"}));
  const auto& first = log.events.front();
  EXPECT_EQ(first.activity, "pre_booking");
  EXPECT_EQ(first.user, "b0b00");
  EXPECT_EQ(first.timestamp, *parse_timestamp("2021-01-25 23:00:00.939"));
  EXPECT_EQ(first.extra, (std::vector<std::string>{"2070b", "iOS"}));
  EXPECT_EQ(log.events.back().activity, "my_bookings");
}

TEST(ParseEventLogTest, EmptyBodyGivesEmptyLog) {
  const auto log = parse_event_log("timestamp,screen,user\n", ColumnSchema{});
  EXPECT_TRUE(log.events.empty());
  EXPECT_EQ(log.columns.size(), 3u);
}

TEST(ParseEventLogTest, CustomColumnNamesAndDelimiter) {
  ColumnSchema schema{"time", "page", "uid", ';'};
  const auto log = parse_event_log("uid;page;time\nu1;home;2021-01-01 00:00:00\n", schema);
  ASSERT_EQ(log.events.size(), 1u);
  EXPECT_EQ(log.events[0].activity, "home");
  EXPECT_EQ(log.events[0].user, "u1");
}

TEST(ParseEventLogTest, MissingColumnIsSchemaError) {
  try {
    parse_event_log("timestamp,page,user\n", ColumnSchema{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::schema);
    EXPECT_NE(std::string(e.what()).find("screen"), std::string::npos);
  }
}

TEST(ParseEventLogTest, MalformedTimestampReportsLine) {
  const std::string csv =
      "timestamp,screen,user\n"
      "2021-01-25 23:00:00.939,menu,u1\n"
      "\n"
      "2021-01-25 25:00:00.000,menu,u1\n";
  try {
    parse_event_log(csv, ColumnSchema{});
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_EQ(e.kind(), ErrorKind::parse);
  }
}

TEST(ParseEventLogTest, WrongFieldCountAndEmptyActivityAreErrors) {
  EXPECT_THROW(parse_event_log("timestamp,screen,user\n2021-01-01 00:00:00,menu\n", ColumnSchema{}), ParseError);
  EXPECT_THROW(parse_event_log("timestamp,screen,user\n2021-01-01 00:00:00,,u\n", ColumnSchema{}), ParseError);
}

TEST(ParseEventLogTest, DropsPreLoginRows) {
  Diagnostics diag;
  const auto log = parse_event_log(
      "timestamp,screen,user\n2021-01-01 00:00:00,splash,\n2021-01-01 00:00:01,login,\n2021-01-01 00:00:02,menu,u\n",
      ColumnSchema{}, &diag);
  EXPECT_EQ(log.events.size(), 1u);
  EXPECT_EQ(diag.dropped_prelogin, 2u);
  EXPECT_EQ(diag.messages.size(), 1u);
}

TEST(ParseEventLogTest, QuotedFields) {
  const auto log = parse_event_log(
      "timestamp,screen,user,note\n2021-01-01 00:00:00,\"a,b\",u,\"say \"\"hi\"\"\"\n", ColumnSchema{});
  ASSERT_EQ(log.events.size(), 1u);
  EXPECT_EQ(log.events[0].activity, "a,b");
  EXPECT_EQ(log.events[0].extra[0], "say \"hi\"");
}

// Oracle: insertion sort over input order, moving an element only past
// strictly later timestamps.
std::vector<std::size_t> brute_force_stable_order(const std::vector<std::int64_t>& ts) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::size_t pos = order.size();
    while (pos > 0 && ts[order[pos - 1]] > ts[i]) --pos;
    order.insert(order.begin() + static_cast<std::ptrdiff_t>(pos), i);
  }
  return order;
}

TEST(ParseEventLogTest, TiesKeepFileOrder) {
  std::mt19937 gen(7);
  for (int round = 0; round < 20; ++round) {
    std::vector<std::int64_t> seconds;
    std::ostringstream csv;
    csv << "timestamp,screen,user,row\n";
    for (int r = 0; r < 60; ++r) {
      seconds.push_back(gen() % 5);  // many ties
      csv << "2021-01-01 00:00:0" << seconds.back() << ",s,u" << gen() % 3 << "," << r << "\n";
    }
    const auto log = parse_event_log(csv.str(), ColumnSchema{});
    const auto expected = brute_force_stable_order(seconds);
    ASSERT_EQ(log.events.size(), expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
      EXPECT_EQ(log.events[k].extra[0], std::to_string(expected[k]));
    }
  }
}

TEST(ParseEventLogTest, RoundTripsThroughWriter) {
  std::mt19937 gen(11);
  for (int round = 0; round < 10; ++round) {
    std::ostringstream csv;
    csv << "os,user,timestamp,screen,team\n";
    for (int r = 0; r < 40; ++r) {
      csv << (gen() % 2 ? "iOS" : "\"An, droid\"") << ",u" << gen() % 4 << ",2021-03-0" << 1 + gen() % 3 << "T1"
          << gen() % 10 << ":0" << gen() % 10 << ":00." << 100 + gen() % 900 << "Z,screen" << gen() % 6 << ",t"
          << gen() % 2 << "\n";
    }
    const auto first = parse_event_log(csv.str(), ColumnSchema{});
    std::ostringstream out;
    write_event_log(out, first);
    const auto second = parse_event_log(out.str(), ColumnSchema{});
    EXPECT_EQ(first, second);
  }
}

TEST(SplitByUserTest, ClickDataSampleHasTwoStreams) {
  const auto streams = split_by_user(parse_event_log(testing::kSampleClicksCsv, ColumnSchema{}));
  ASSERT_EQ(streams.size(), 2u);
  EXPECT_EQ(streams[0].user, "3fc0c");
  EXPECT_EQ(streams[1].user, "b0b00");
  EXPECT_EQ(streams[1].events[0].activity, "pre_booking");
  EXPECT_EQ(streams[1].events[1].activity, "tariffs");
}

TEST(SplitByUserTest, SingleUserStreamEqualsLog) {
  const auto log = parse_event_log(
      "timestamp,screen,user\n2021-01-01 00:00:02,b,u\n2021-01-01 00:00:01,a,u\n2021-01-01 00:00:03,c,u\n",
      ColumnSchema{});
  const auto streams = split_by_user(log);
  ASSERT_EQ(streams.size(), 1u);
  EXPECT_EQ(streams[0].events, log.events);
}

TEST(SplitByUserTest, EmptyLogGivesNoStreams) { EXPECT_TRUE(split_by_user(EventLog{}).empty()); }

TEST(SplitByUserTest, IsAPartition) {
  std::mt19937 gen(3);
  std::ostringstream csv;
  csv << "timestamp,screen,user,id\n";
  for (int r = 0; r < 1000; ++r) {
    csv << "2021-01-01 0" << gen() % 10 << ":00:00,s" << gen() % 7 << ",user" << gen() % 10 << "," << r << "\n";
  }
  const auto log = parse_event_log(csv.str(), ColumnSchema{});
  const auto streams = split_by_user(log);
  EXPECT_EQ(streams.size(), 10u);

  std::multiset<std::string> from_log;
  std::multiset<std::string> from_streams;
  for (const auto& e : log.events) from_log.insert(e.extra[0]);
  std::size_t total = 0;
  for (const auto& s : streams) {
    total += s.events.size();
    for (std::size_t k = 0; k < s.events.size(); ++k) {
      EXPECT_EQ(s.events[k].user, s.user);
      if (k > 0) EXPECT_LE(s.events[k - 1].timestamp, s.events[k].timestamp);
      from_streams.insert(s.events[k].extra[0]);
    }
  }
  EXPECT_EQ(total, 1000u);
  EXPECT_EQ(from_log, from_streams);
}

TEST(LinkGraphTest, RunningExample) {
  const auto g = testing::running_example_graph();
  EXPECT_EQ(g.vertices.size(), 4u);
  EXPECT_EQ(g.edges.size(), 5u);
  EXPECT_TRUE(g.has_edge("C", "M"));
  EXPECT_FALSE(g.has_edge("A", "M"));
}

TEST(LinkGraphTest, DeduplicatesAndSkipsComments) {
  const auto g = parse_link_graph("# screens\nM -> A\n  M->A   # again\n\nA -> A\n");
  EXPECT_EQ(g.edges.size(), 2u);
  EXPECT_TRUE(g.has_edge("A", "A"));  // self-loops allowed
}

TEST(LinkGraphTest, EmptyGraphWarns) {
  Diagnostics diag;
  const auto g = parse_link_graph("# nothing\n", &diag);
  EXPECT_TRUE(g.edges.empty());
  EXPECT_EQ(diag.messages.size(), 1u);
}

TEST(LinkGraphTest, InvalidLineReportsLineNumber) {
  for (const char* text : {"M -> A\nM A\n", "M -> A\n -> A\n", "M -> A\nA -> B -> C\n"}) {
    try {
      parse_link_graph(text);
      FAIL() << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 2u);
    }
  }
}

TEST(LinkGraphTest, JsonForm) {
  const auto g = parse_link_graph(R"({"vertices": ["X"], "edges": [["M","A"],["M","A"],["A","B"]]})");
  EXPECT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.vertices, (std::set<std::string>{"A", "B", "M", "X"}));
  EXPECT_THROW(parse_link_graph(R"({"edges": [["M"]]})"), Error);
  EXPECT_THROW(parse_link_graph(R"({"edges": )"), Error);
}

}  // namespace
}  // namespace clickseg
