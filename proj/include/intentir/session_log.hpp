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

#ifndef INTENTIR_SESSION_LOG_HPP_
#define INTENTIR_SESSION_LOG_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "intentir/taxonomy.hpp"
#include "intentir/text_features.hpp"

namespace intentir::logs {

enum class EventKind : int {
  kQueryIssued = 0,
  kResultClick = 1,
  kResultHoverEnter = 2,
  kResultHoverExit = 3,
  kSerpPageView = 4,
  kPageLeave = 5,
  kExplicitFeedback = 6,
};

std::string_view kind_name(EventKind kind);
EventKind parse_kind(std::string_view text);  // throws ValidationError

// One line of the interaction log. Timestamps are integral milliseconds.
// result_rank is 1-based and applies to clicks and hovers; serp_page is
// 1-based and applies to SERP page views. payload carries the extras of
// SERP views ({"doc_ids": [...], "first_rank": r}) and explicit feedback
// ({"intent": ..., "satisfaction": ..., "click_reasons": [...]}).
struct RawEvent {
  std::string user_id;
  std::int64_t timestamp = 0;
  EventKind kind = EventKind::kQueryIssued;
  std::optional<std::string> query_text;
  std::optional<int> result_rank;
  std::optional<int> serp_page;
  nlohmann::json payload;
};

void validate(const RawEvent& event);

struct Click {
  int rank = 0;
  std::int64_t timestamp = 0;
  double dwell_seconds = 0.0;
};

struct Hover {
  int rank = 0;
  std::int64_t enter_timestamp = 0;
  std::int64_t exit_timestamp = 0;
  double duration_seconds() const {
    return static_cast<double>(exit_timestamp - enter_timestamp) / 1000.0;
  }
};

// Why a user said they clicked a result, from the post-query questionnaire.
enum class ClickReason : int {
  kRelevance = 0,
  kDiversity = 1,
  kAuthority = 2,
  kTimeliness = 3,
  kRegion = 4,
  kInspiration = 5,
  kRanking = 6,
  kOthers = 7,
};

inline constexpr std::array<ClickReason, 8> kAllClickReasons = {
    ClickReason::kRelevance,  ClickReason::kDiversity,   ClickReason::kAuthority,
    ClickReason::kTimeliness, ClickReason::kRegion,      ClickReason::kInspiration,
    ClickReason::kRanking,    ClickReason::kOthers};

std::string_view reason_name(ClickReason reason);
ClickReason parse_reason(std::string_view text);  // throws ValidationError

// One query and everything that happened until the next query (or the end of
// the session). serp_time_seconds is the unit duration minus the time spent
// on clicked results. impressions map ranks to document ids when the log
// recorded what the result pages showed.
struct QueryUnit {
  std::string query_text;
  std::int64_t start_timestamp = 0;
  std::int64_t end_timestamp = 0;
  std::vector<Click> clicks;
  std::vector<Hover> hovers;
  int pages_viewed = 1;
  double serp_time_seconds = 0.0;
  std::optional<int> satisfaction;  // 1..5
  std::vector<ClickReason> click_reasons;
  std::vector<std::pair<int, std::string>> impressions;

  double duration_seconds() const {
    return static_cast<double>(end_timestamp - start_timestamp) / 1000.0;
  }
};

struct Session {
  std::string session_id;
  std::string user_id;
  std::optional<taxonomy::AnnotatorLabel> intent;
  std::vector<QueryUnit> queries;

  std::int64_t start_timestamp() const;
  std::int64_t end_timestamp() const;
  double task_time_seconds() const {
    return static_cast<double>(end_timestamp() - start_timestamp()) / 1000.0;
  }
};

struct SplitOptions {
  // A pause of at least this long between consecutive events of one user
  // starts a new session.
  double gap_minutes = 30.0;
};

struct SplitReport {
  std::size_t n_events = 0;
  std::size_t n_sessions = 0;
  std::size_t orphan_events = 0;           // events before the first query
  std::size_t unmatched_hover_exits = 0;
};

// Groups events per user, orders them by time (stable for ties), cuts
// sessions at inactivity gaps, and assembles query units. Click dwell is the
// time to the next event of any kind, zero for the final event of a session.
// Hover enters and exits pair up LIFO per rank; enters still open at the end
// of a query unit close at the unit end.
std::vector<Session> split_sessions(std::vector<RawEvent> events,
                                    const SplitOptions& options = {},
                                    SplitReport* report = nullptr);

// Hover pairing on its own: consumes the hover events of one query unit (all
// other kinds are ignored) and closes open enters at unit_end. Unmatched
// exits are dropped and counted.
std::vector<Hover> pair_hovers(const std::vector<RawEvent>& events,
                               std::int64_t unit_end,
                               std::size_t* unmatched_exits = nullptr);

struct FilterOptions {
  // Keep a session only if at least one of its queries has this many terms.
  int min_max_query_terms = 2;
  text::TokenizerOptions tokenizer;
};

std::vector<Session> filter_sessions(const std::vector<Session>& sessions,
                                     const FilterOptions& options = {});

std::vector<RawEvent> read_events_jsonl(std::istream& in);
void write_events_jsonl(std::ostream& out, const std::vector<RawEvent>& events);
std::vector<Session> read_sessions_jsonl(std::istream& in);
void write_sessions_jsonl(std::ostream& out, const std::vector<Session>& sessions);

}  // namespace intentir::logs

#endif  // INTENTIR_SESSION_LOG_HPP_
