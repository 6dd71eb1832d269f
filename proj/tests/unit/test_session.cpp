/*
 * Copyright 2026 The Intentir Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "intentir/error.hpp"
#include "intentir/session_log.hpp"

using namespace intentir;
using logs::EventKind;
using logs::RawEvent;

namespace {

RawEvent query(const std::string& user, std::int64_t t, const std::string& text) {
  RawEvent e;
  e.user_id = user;
  e.timestamp = t;
  e.kind = EventKind::kQueryIssued;
  e.query_text = text;
  return e;
}

RawEvent ranked(const std::string& user, std::int64_t t, EventKind kind, int rank) {
  RawEvent e;
  e.user_id = user;
  e.timestamp = t;
  e.kind = kind;
  e.result_rank = rank;
  return e;
}

RawEvent page(const std::string& user, std::int64_t t, int serp_page,
              nlohmann::json payload = nullptr) {
  RawEvent e;
  e.user_id = user;
  e.timestamp = t;
  e.kind = EventKind::kSerpPageView;
  e.serp_page = serp_page;
  e.payload = std::move(payload);
  return e;
}

RawEvent feedback(const std::string& user, std::int64_t t, nlohmann::json payload) {
  RawEvent e;
  e.user_id = user;
  e.timestamp = t;
  e.kind = EventKind::kExplicitFeedback;
  e.payload = std::move(payload);
  return e;
}

RawEvent leave(const std::string& user, std::int64_t t) {
  RawEvent e;
  e.user_id = user;
  e.timestamp = t;
  e.kind = EventKind::kPageLeave;
  return e;
}

std::vector<RawEvent> two_user_log() {
  std::vector<RawEvent> events;
  events.push_back(ranked("u1", 500, EventKind::kResultClick, 1));  // orphan
  events.push_back(query("u1", 1000, "alpha beta"));
  events.push_back(ranked("u1", 2000, EventKind::kResultHoverEnter, 1));
  events.push_back(ranked("u1", 3000, EventKind::kResultHoverExit, 1));
  events.push_back(ranked("u1", 4000, EventKind::kResultClick, 2));
  events.push_back(page("u1", 10000, 2));
  events.push_back(feedback("u1", 20000,
                            {{"intent", "PC"},
                             {"satisfaction", 4},
                             {"click_reasons", {"Relevance"}}}));
  // Exactly the 30-minute gap: a new session starts here.
  events.push_back(query("u1", 1820000, "gamma"));
  events.push_back(ranked("u1", 1821000, EventKind::kResultClick, 1));
  events.push_back(query("u2", 1500, "delta epsilon"));
  events.push_back(ranked("u2", 2500, EventKind::kResultClick, 3));
  events.push_back(leave("u2", 2600));
  return events;
}

}  // namespace

TEST_SUITE_BEGIN("session");

TEST_CASE("names and parsers") {
  CHECK(logs::kind_name(EventKind::kSerpPageView) == "serp_page_view");
  CHECK(logs::parse_kind("result_hover_exit") == EventKind::kResultHoverExit);
  CHECK_THROWS_AS(logs::parse_kind("nope"), ValidationError);
  CHECK(logs::reason_name(logs::ClickReason::kAuthority) == "Authority");
  CHECK(logs::parse_reason("Others") == logs::ClickReason::kOthers);
  CHECK_THROWS_AS(logs::parse_reason("relevance"), ValidationError);
}

TEST_CASE("event validation") {
  RawEvent no_text;
  no_text.user_id = "u";
  no_text.kind = EventKind::kQueryIssued;
  CHECK_THROWS_AS(logs::validate(no_text), ValidationError);

  RawEvent no_rank;
  no_rank.user_id = "u";
  no_rank.kind = EventKind::kResultClick;
  CHECK_THROWS_AS(logs::validate(no_rank), ValidationError);

  RawEvent bad_satisfaction;
  bad_satisfaction.user_id = "u";
  bad_satisfaction.kind = EventKind::kExplicitFeedback;
  bad_satisfaction.payload = {{"satisfaction", 9}};
  CHECK_THROWS_AS(logs::validate(bad_satisfaction), ValidationError);
}

TEST_CASE("split builds per-user sessions with dwell and serp bookkeeping") {
  logs::SplitReport report;
  const std::vector<logs::Session> sessions =
      logs::split_sessions(two_user_log(), {}, &report);

  CHECK(report.n_events == 12);
  CHECK(report.n_sessions == 3);
  CHECK(report.orphan_events == 1);
  CHECK(report.unmatched_hover_exits == 0);
  REQUIRE(sessions.size() == 3);

  const logs::Session& s1 = sessions[0];
  CHECK(s1.session_id == "u1-s1");
  CHECK(s1.user_id == "u1");
  REQUIRE(s1.intent.has_value());
  CHECK(s1.intent->value == taxonomy::Label::kParticularCase);
  REQUIRE(s1.queries.size() == 1);
  const logs::QueryUnit& unit = s1.queries[0];
  CHECK(unit.query_text == "alpha beta");
  CHECK(unit.start_timestamp == 1000);
  CHECK(unit.end_timestamp == 20000);
  CHECK(unit.duration_seconds() == doctest::Approx(19.0));
  REQUIRE(unit.clicks.size() == 1);
  CHECK(unit.clicks[0].rank == 2);
  // Dwell runs to the next event of any kind (the page view 6 s later).
  CHECK(unit.clicks[0].dwell_seconds == doctest::Approx(6.0));
  CHECK(unit.serp_time_seconds == doctest::Approx(13.0));
  CHECK(unit.pages_viewed == 2);
  REQUIRE(unit.hovers.size() == 1);
  CHECK(unit.hovers[0].rank == 1);
  CHECK(unit.hovers[0].duration_seconds() == doctest::Approx(1.0));
  CHECK(unit.satisfaction == 4);
  CHECK(unit.click_reasons ==
        std::vector<logs::ClickReason>{logs::ClickReason::kRelevance});
  CHECK(s1.task_time_seconds() == doctest::Approx(19.0));

  const logs::Session& s2 = sessions[1];
  CHECK(s2.session_id == "u1-s2");
  REQUIRE(s2.queries.size() == 1);
  CHECK(s2.queries[0].pages_viewed == 1);
  REQUIRE(s2.queries[0].clicks.size() == 1);
  // The session's final event has nothing after it: dwell 0.
  CHECK(s2.queries[0].clicks[0].dwell_seconds == doctest::Approx(0.0));
  CHECK(s2.queries[0].serp_time_seconds == doctest::Approx(1.0));

  const logs::Session& s3 = sessions[2];
  CHECK(s3.session_id == "u2-s1");
  CHECK(s3.queries[0].clicks[0].dwell_seconds == doctest::Approx(0.1));
  CHECK(s3.queries[0].serp_time_seconds == doctest::Approx(1.0));
}

TEST_CASE("a session of nothing but orphans is dropped entirely") {
  std::vector<RawEvent> events;
  events.push_back(ranked("u1", 0, EventKind::kResultClick, 1));
  events.push_back(leave("u1", 100));
  logs::SplitReport report;
  const std::vector<logs::Session> sessions =
      logs::split_sessions(std::move(events), {}, &report);
  CHECK(sessions.empty());
  CHECK(report.orphan_events == 2);
  CHECK(report.n_sessions == 0);
}

TEST_CASE("hover pairing is LIFO per rank") {
  std::vector<RawEvent> events;
  events.push_back(ranked("u", 10, EventKind::kResultHoverEnter, 1));
  events.push_back(ranked("u", 20, EventKind::kResultHoverEnter, 1));
  events.push_back(ranked("u", 30, EventKind::kResultHoverExit, 1));
  events.push_back(ranked("u", 40, EventKind::kResultHoverExit, 1));
  events.push_back(ranked("u", 50, EventKind::kResultHoverExit, 2));  // unmatched
  events.push_back(ranked("u", 60, EventKind::kResultHoverEnter, 3));  // unclosed

  std::size_t unmatched = 0;
  const std::vector<logs::Hover> hovers = logs::pair_hovers(events, 100, &unmatched);
  CHECK(unmatched == 1);
  REQUIRE(hovers.size() == 3);
  CHECK(hovers[0].rank == 1);
  CHECK(hovers[0].enter_timestamp == 10);
  CHECK(hovers[0].exit_timestamp == 40);
  CHECK(hovers[1].enter_timestamp == 20);
  CHECK(hovers[1].exit_timestamp == 30);
  CHECK(hovers[2].rank == 3);
  CHECK(hovers[2].exit_timestamp == 100);  // closed at the unit end
}

TEST_CASE("serp page views record impressions with their ranks") {
  std::vector<RawEvent> events;
  events.push_back(query("u1", 0, "alpha beta"));
  events.push_back(page("u1", 100, 1, {{"doc_ids", {"dA", "dB"}}}));
  events.push_back(page("u1", 200, 2, {{"doc_ids", {"dC"}}, {"first_rank", 11}}));
  const std::vector<logs::Session> sessions = logs::split_sessions(std::move(events));
  REQUIRE(sessions.size() == 1);
  const logs::QueryUnit& unit = sessions[0].queries[0];
  CHECK(unit.pages_viewed == 2);
  REQUIRE(unit.impressions.size() == 3);
  CHECK(unit.impressions[0] == std::pair<int, std::string>{1, "dA"});
  CHECK(unit.impressions[1] == std::pair<int, std::string>{2, "dB"});
  CHECK(unit.impressions[2] == std::pair<int, std::string>{11, "dC"});
}

TEST_CASE("query length filter keeps sessions by their longest query") {
  logs::SplitReport report;
  std::vector<logs::Session> sessions =
      logs::split_sessions(two_user_log(), {}, &report);
  const std::vector<logs::Session> kept = logs::filter_sessions(sessions);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].session_id == "u1-s1");
  CHECK(kept[1].session_id == "u2-s1");

  logs::FilterOptions lax;
  lax.min_max_query_terms = 1;
  CHECK(logs::filter_sessions(sessions, lax).size() == 3);
}

TEST_CASE("split options are validated") {
  logs::SplitOptions bad;
  bad.gap_minutes = 0.0;
  CHECK_THROWS_AS(logs::split_sessions({}, bad), ValidationError);
}

TEST_CASE("events JSONL round-trips") {
  std::vector<RawEvent> events = two_user_log();
  std::stringstream buffer;
  logs::write_events_jsonl(buffer, events);
  const std::vector<RawEvent> readback = logs::read_events_jsonl(buffer);
  REQUIRE(readback.size() == events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    CHECK(readback[i].user_id == events[i].user_id);
    CHECK(readback[i].timestamp == events[i].timestamp);
    CHECK(readback[i].kind == events[i].kind);
    CHECK(readback[i].query_text == events[i].query_text);
    CHECK(readback[i].result_rank == events[i].result_rank);
    CHECK(readback[i].payload == events[i].payload);
  }
}

TEST_CASE("events JSONL rejects malformed lines with line numbers") {
  std::stringstream bad(
      "{\"user_id\": \"u\", \"timestamp\": 0, \"kind\": \"query_issued\"}\n");
  CHECK_THROWS_WITH_AS(logs::read_events_jsonl(bad), doctest::Contains("line 1"),
                       ValidationError);
}

TEST_CASE("sessions JSONL round-trips") {
  const std::vector<logs::Session> sessions = logs::split_sessions(two_user_log());
  std::stringstream buffer;
  logs::write_sessions_jsonl(buffer, sessions);
  const std::vector<logs::Session> readback = logs::read_sessions_jsonl(buffer);
  REQUIRE(readback.size() == sessions.size());
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    CHECK(readback[i].session_id == sessions[i].session_id);
    CHECK(readback[i].user_id == sessions[i].user_id);
    CHECK(readback[i].intent.has_value() == sessions[i].intent.has_value());
    REQUIRE(readback[i].queries.size() == sessions[i].queries.size());
    for (std::size_t q = 0; q < sessions[i].queries.size(); ++q) {
      const logs::QueryUnit& a = readback[i].queries[q];
      const logs::QueryUnit& b = sessions[i].queries[q];
      CHECK(a.query_text == b.query_text);
      CHECK(a.start_timestamp == b.start_timestamp);
      CHECK(a.end_timestamp == b.end_timestamp);
      CHECK(a.pages_viewed == b.pages_viewed);
      CHECK(a.serp_time_seconds == doctest::Approx(b.serp_time_seconds));
      CHECK(a.satisfaction == b.satisfaction);
      CHECK(a.clicks.size() == b.clicks.size());
      CHECK(a.hovers.size() == b.hovers.size());
    }
  }

  // A second serialization of the readback is byte-identical.
  std::stringstream again;
  logs::write_sessions_jsonl(again, readback);
  CHECK(again.str() == buffer.str());
}

TEST_SUITE_END();
