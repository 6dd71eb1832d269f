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

#include "intentir/session_log.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "intentir/error.hpp"
#include "intentir/jsonl.hpp"

namespace intentir::logs {

namespace {

constexpr std::array<std::string_view, 7> kKindNames = {
    "query_issued", "result_click",   "result_hover_enter", "result_hover_exit",
    "serp_page_view", "page_leave",   "explicit_feedback"};

constexpr std::array<std::string_view, 8> kReasonNames = {
    "Relevance", "Diversity", "Authority", "Timeliness",
    "Region",    "Inspiration", "Ranking", "Others"};

}  // namespace

std::string_view kind_name(EventKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

EventKind parse_kind(std::string_view text) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == text) return static_cast<EventKind>(i);
  }
  throw ValidationError("unknown event kind: " + std::string(text));
}

std::string_view reason_name(ClickReason reason) {
  return kReasonNames[static_cast<std::size_t>(reason)];
}

ClickReason parse_reason(std::string_view text) {
  for (std::size_t i = 0; i < kReasonNames.size(); ++i) {
    if (kReasonNames[i] == text) return static_cast<ClickReason>(i);
  }
  throw ValidationError("unknown click reason: " + std::string(text));
}

namespace {

taxonomy::AnnotatorLabel intent_label_from_json(const nlohmann::json& value) {
  taxonomy::AnnotatorLabel label;
  if (value.is_string()) {
    label.value = taxonomy::parse_label(value.get<std::string>());
  } else if (value.is_object()) {
    require(value.contains("value") && value["value"].is_string(),
            "intent object needs a string 'value'");
    label.value = taxonomy::parse_label(value["value"].get<std::string>());
    if (value.contains("potential_intents")) {
      require(value["potential_intents"].is_array(),
              "'potential_intents' must be an array");
      for (const auto& entry : value["potential_intents"]) {
        require(entry.is_string(), "potential intent codes must be strings");
        label.potential_intents.push_back(taxonomy::parse_intent(entry.get<std::string>()));
      }
      std::sort(label.potential_intents.begin(), label.potential_intents.end());
    }
  } else {
    throw ValidationError("intent must be a label code or an object");
  }
  taxonomy::validate(label);
  return label;
}

nlohmann::json intent_label_to_json(const taxonomy::AnnotatorLabel& label) {
  nlohmann::json value;
  value["value"] = std::string(taxonomy::code(label.value));
  if (!label.potential_intents.empty()) {
    nlohmann::json intents = nlohmann::json::array();
    for (taxonomy::Intent intent : label.potential_intents) {
      intents.push_back(std::string(taxonomy::code(intent)));
    }
    value["potential_intents"] = std::move(intents);
  }
  return value;
}

void validate_feedback_payload(const nlohmann::json& payload) {
  require(payload.is_object(), "explicit_feedback needs an object payload");
  if (payload.contains("satisfaction")) {
    require(payload["satisfaction"].is_number_integer(),
            "satisfaction must be an integer");
    const int value = payload["satisfaction"].get<int>();
    require(value >= 1 && value <= 5, "satisfaction must lie in 1..5");
  }
  if (payload.contains("intent")) {
    intent_label_from_json(payload["intent"]);
  }
  if (payload.contains("click_reasons")) {
    require(payload["click_reasons"].is_array(), "click_reasons must be an array");
    for (const auto& entry : payload["click_reasons"]) {
      require(entry.is_string(), "click reasons must be strings");
      parse_reason(entry.get<std::string>());
    }
  }
}

void validate_serp_payload(const nlohmann::json& payload) {
  if (payload.is_null()) return;
  require(payload.is_object(), "serp_page_view payload must be an object");
  if (payload.contains("doc_ids")) {
    require(payload["doc_ids"].is_array(), "doc_ids must be an array");
    for (const auto& entry : payload["doc_ids"]) {
      require(entry.is_string() && !entry.get<std::string>().empty(),
              "doc_ids must be non-empty strings");
    }
  }
  if (payload.contains("first_rank")) {
    require(payload["first_rank"].is_number_integer() &&
                payload["first_rank"].get<int>() >= 1,
            "first_rank must be a positive integer");
  }
}

}  // namespace

void validate(const RawEvent& event) {
  require(!event.user_id.empty(), "event needs a user_id");
  require(event.timestamp >= 0, "event timestamps must be non-negative");
  switch (event.kind) {
    case EventKind::kQueryIssued:
      require(event.query_text.has_value() && !event.query_text->empty(),
              "query_issued needs non-empty query_text");
      break;
    case EventKind::kResultClick:
    case EventKind::kResultHoverEnter:
    case EventKind::kResultHoverExit:
      require(event.result_rank.has_value() && *event.result_rank >= 1,
              std::string(kind_name(event.kind)) + " needs result_rank >= 1");
      break;
    case EventKind::kSerpPageView:
      require(event.serp_page.has_value() && *event.serp_page >= 1,
              "serp_page_view needs serp_page >= 1");
      validate_serp_payload(event.payload);
      break;
    case EventKind::kPageLeave:
      break;
    case EventKind::kExplicitFeedback:
      validate_feedback_payload(event.payload);
      break;
  }
}

std::int64_t Session::start_timestamp() const {
  ensure(!queries.empty(), "session without queries");
  return queries.front().start_timestamp;
}

std::int64_t Session::end_timestamp() const {
  ensure(!queries.empty(), "session without queries");
  return queries.back().end_timestamp;
}

std::vector<Hover> pair_hovers(const std::vector<RawEvent>& events,
                               std::int64_t unit_end, std::size_t* unmatched_exits) {
  std::map<int, std::vector<std::int64_t>> open;  // rank -> enter-time stack
  std::vector<Hover> hovers;
  std::size_t dropped = 0;
  for (const RawEvent& event : events) {
    if (event.kind == EventKind::kResultHoverEnter) {
      open[*event.result_rank].push_back(event.timestamp);
    } else if (event.kind == EventKind::kResultHoverExit) {
      auto& stack = open[*event.result_rank];
      if (stack.empty()) {
        ++dropped;
        continue;
      }
      hovers.push_back(Hover{*event.result_rank, stack.back(), event.timestamp});
      stack.pop_back();
    }
  }
  for (const auto& [rank, stack] : open) {
    for (std::int64_t enter : stack) {
      hovers.push_back(Hover{rank, enter, std::max(enter, unit_end)});
    }
  }
  std::stable_sort(hovers.begin(), hovers.end(), [](const Hover& a, const Hover& b) {
    if (a.enter_timestamp != b.enter_timestamp) return a.enter_timestamp < b.enter_timestamp;
    return a.rank < b.rank;
  });
  if (unmatched_exits) *unmatched_exits = dropped;
  return hovers;
}

namespace {

// Assembles one session from a user's contiguous event run. Returns nothing
// when the run contains no query at all (every event is then an orphan).
std::optional<Session> build_session(const std::string& user_id, int session_index,
                                     const std::vector<RawEvent>& events,
                                     std::size_t begin, std::size_t end,
                                     SplitReport& report) {
  std::vector<std::size_t> query_positions;
  for (std::size_t i = begin; i < end; ++i) {
    if (events[i].kind == EventKind::kQueryIssued) query_positions.push_back(i);
  }
  if (query_positions.empty()) {
    report.orphan_events += end - begin;
    return std::nullopt;
  }
  report.orphan_events += query_positions.front() - begin;

  Session session;
  session.user_id = user_id;
  session.session_id = user_id + "-s" + std::to_string(session_index);

  for (std::size_t q = 0; q < query_positions.size(); ++q) {
    const std::size_t unit_begin = query_positions[q];
    const std::size_t unit_end =
        q + 1 < query_positions.size() ? query_positions[q + 1] : end;

    QueryUnit unit;
    unit.query_text = *events[unit_begin].query_text;
    unit.start_timestamp = events[unit_begin].timestamp;
    unit.end_timestamp = unit_end < end ? events[unit_end].timestamp
                                        : events[end - 1].timestamp;

    std::map<int, std::string> impressions;
    std::vector<RawEvent> hover_events;
    double total_dwell = 0.0;

    for (std::size_t i = unit_begin + 1; i < unit_end; ++i) {
      const RawEvent& event = events[i];
      switch (event.kind) {
        case EventKind::kResultClick: {
          Click click;
          click.rank = *event.result_rank;
          click.timestamp = event.timestamp;
          // Dwell runs to the next event of any kind in the session; the very
          // last event of a session has nothing after it, so dwell is 0.
          click.dwell_seconds =
              i + 1 < end
                  ? static_cast<double>(events[i + 1].timestamp - event.timestamp) / 1000.0
                  : 0.0;
          total_dwell += click.dwell_seconds;
          unit.clicks.push_back(click);
          break;
        }
        case EventKind::kResultHoverEnter:
        case EventKind::kResultHoverExit:
          hover_events.push_back(event);
          break;
        case EventKind::kSerpPageView: {
          unit.pages_viewed = std::max(unit.pages_viewed, *event.serp_page);
          if (event.payload.is_object() && event.payload.contains("doc_ids")) {
            const int first_rank = event.payload.value("first_rank", 1);
            int rank = first_rank;
            for (const auto& doc : event.payload["doc_ids"]) {
              impressions.emplace(rank, doc.get<std::string>());
              ++rank;
            }
          }
          break;
        }
        case EventKind::kExplicitFeedback: {
          const nlohmann::json& payload = event.payload;
          if (payload.contains("satisfaction")) {
            unit.satisfaction = payload["satisfaction"].get<int>();
          }
          if (payload.contains("intent")) {
            session.intent = intent_label_from_json(payload["intent"]);
          }
          if (payload.contains("click_reasons")) {
            std::set<ClickReason> reasons;
            for (const auto& entry : payload["click_reasons"]) {
              reasons.insert(parse_reason(entry.get<std::string>()));
            }
            unit.click_reasons.assign(reasons.begin(), reasons.end());
          }
          break;
        }
        case EventKind::kQueryIssued:
        case EventKind::kPageLeave:
          break;
      }
    }

    std::size_t dropped = 0;
    unit.hovers = pair_hovers(hover_events, unit.end_timestamp, &dropped);
    report.unmatched_hover_exits += dropped;

    for (const auto& [rank, doc_id] : impressions) {
      unit.impressions.emplace_back(rank, doc_id);
    }
    unit.serp_time_seconds = std::max(0.0, unit.duration_seconds() - total_dwell);
    session.queries.push_back(std::move(unit));
  }
  return session;
}

}  // namespace

std::vector<Session> split_sessions(std::vector<RawEvent> events,
                                    const SplitOptions& options, SplitReport* report) {
  require(options.gap_minutes > 0.0, "split_sessions: gap must be positive");
  for (const RawEvent& event : events) validate(event);

  SplitReport local;
  local.n_events = events.size();

  std::map<std::string, std::vector<RawEvent>> by_user;
  for (RawEvent& event : events) {
    by_user[event.user_id].push_back(std::move(event));
  }

  const std::int64_t gap_ms =
      static_cast<std::int64_t>(std::llround(options.gap_minutes * 60.0 * 1000.0));
  std::vector<Session> sessions;
  for (auto& [user_id, stream] : by_user) {
    std::stable_sort(stream.begin(), stream.end(),
                     [](const RawEvent& a, const RawEvent& b) {
                       return a.timestamp < b.timestamp;
                     });
    int session_index = 0;
    std::size_t chunk_begin = 0;
    for (std::size_t i = 1; i <= stream.size(); ++i) {
      const bool boundary =
          i == stream.size() ||
          stream[i].timestamp - stream[i - 1].timestamp >= gap_ms;
      if (!boundary) continue;
      ++session_index;
      if (auto session =
              build_session(user_id, session_index, stream, chunk_begin, i, local)) {
        sessions.push_back(std::move(*session));
      }
      chunk_begin = i;
    }
  }
  local.n_sessions = sessions.size();
  if (report) *report = local;
  return sessions;
}

std::vector<Session> filter_sessions(const std::vector<Session>& sessions,
                                     const FilterOptions& options) {
  require(options.min_max_query_terms >= 0, "filter_sessions: negative threshold");
  std::vector<Session> kept;
  for (const Session& session : sessions) {
    std::size_t longest = 0;
    for (const QueryUnit& unit : session.queries) {
      longest = std::max(longest, text::tokenize(unit.query_text, options.tokenizer).size());
    }
    if (longest >= static_cast<std::size_t>(options.min_max_query_terms)) {
      kept.push_back(session);
    }
  }
  return kept;
}

std::vector<RawEvent> read_events_jsonl(std::istream& in) {
  std::vector<RawEvent> events;
  jsonl::for_each_record(in, [&](const nlohmann::json& record, std::size_t line_no) {
    const std::string where = "line " + std::to_string(line_no) + ": ";
    require(record.contains("user_id") && record["user_id"].is_string(),
            where + "event needs a string 'user_id'");
    require(record.contains("timestamp") && record["timestamp"].is_number_integer(),
            where + "event needs an integral 'timestamp'");
    require(record.contains("kind") && record["kind"].is_string(),
            where + "event needs a string 'kind'");
    RawEvent event;
    event.user_id = record["user_id"].get<std::string>();
    event.timestamp = record["timestamp"].get<std::int64_t>();
    event.kind = parse_kind(record["kind"].get<std::string>());
    if (record.contains("query_text")) {
      require(record["query_text"].is_string(), where + "'query_text' must be a string");
      event.query_text = record["query_text"].get<std::string>();
    }
    if (record.contains("result_rank")) {
      require(record["result_rank"].is_number_integer(),
              where + "'result_rank' must be an integer");
      event.result_rank = record["result_rank"].get<int>();
    }
    if (record.contains("serp_page")) {
      require(record["serp_page"].is_number_integer(),
              where + "'serp_page' must be an integer");
      event.serp_page = record["serp_page"].get<int>();
    }
    if (record.contains("payload")) event.payload = record["payload"];
    try {
      validate(event);
    } catch (const ValidationError& error) {
      throw ValidationError(where + error.what());
    }
    events.push_back(std::move(event));
  });
  return events;
}

void write_events_jsonl(std::ostream& out, const std::vector<RawEvent>& events) {
  for (const RawEvent& event : events) {
    nlohmann::json record;
    record["user_id"] = event.user_id;
    record["timestamp"] = event.timestamp;
    record["kind"] = std::string(kind_name(event.kind));
    if (event.query_text) record["query_text"] = *event.query_text;
    if (event.result_rank) record["result_rank"] = *event.result_rank;
    if (event.serp_page) record["serp_page"] = *event.serp_page;
    if (!event.payload.is_null()) record["payload"] = event.payload;
    out << record.dump() << "\n";
  }
}

namespace {

QueryUnit query_unit_from_json(const nlohmann::json& record, const std::string& where) {
  QueryUnit unit;
  require(record.contains("query_text") && record["query_text"].is_string(),
          where + "query needs 'query_text'");
  unit.query_text = record["query_text"].get<std::string>();
  unit.start_timestamp = record.value("start_timestamp", std::int64_t{0});
  unit.end_timestamp = record.value("end_timestamp", std::int64_t{0});
  require(unit.end_timestamp >= unit.start_timestamp,
          where + "query unit must not end before it starts");
  unit.pages_viewed = record.value("pages_viewed", 1);
  require(unit.pages_viewed >= 1, where + "pages_viewed must be >= 1");
  unit.serp_time_seconds = record.value("serp_time_seconds", 0.0);
  if (record.contains("satisfaction")) {
    const int value = record["satisfaction"].get<int>();
    require(value >= 1 && value <= 5, where + "satisfaction must lie in 1..5");
    unit.satisfaction = value;
  }
  if (record.contains("click_reasons")) {
    for (const auto& entry : record["click_reasons"]) {
      unit.click_reasons.push_back(parse_reason(entry.get<std::string>()));
    }
  }
  if (record.contains("clicks")) {
    for (const auto& entry : record["clicks"]) {
      Click click;
      click.rank = entry.at("rank").get<int>();
      require(click.rank >= 1, where + "click ranks must be >= 1");
      click.timestamp = entry.at("timestamp").get<std::int64_t>();
      click.dwell_seconds = entry.at("dwell_seconds").get<double>();
      require(click.dwell_seconds >= 0.0, where + "click dwell must be >= 0");
      unit.clicks.push_back(click);
    }
  }
  if (record.contains("hovers")) {
    for (const auto& entry : record["hovers"]) {
      Hover hover;
      hover.rank = entry.at("rank").get<int>();
      require(hover.rank >= 1, where + "hover ranks must be >= 1");
      hover.enter_timestamp = entry.at("enter_timestamp").get<std::int64_t>();
      hover.exit_timestamp = entry.at("exit_timestamp").get<std::int64_t>();
      require(hover.exit_timestamp >= hover.enter_timestamp,
              where + "hover must not exit before it enters");
      unit.hovers.push_back(hover);
    }
  }
  if (record.contains("impressions")) {
    for (const auto& entry : record["impressions"]) {
      const int rank = entry.at("rank").get<int>();
      require(rank >= 1, where + "impression ranks must be >= 1");
      unit.impressions.emplace_back(rank, entry.at("doc_id").get<std::string>());
    }
  }
  return unit;
}

nlohmann::json query_unit_to_json(const QueryUnit& unit) {
  nlohmann::json record;
  record["query_text"] = unit.query_text;
  record["start_timestamp"] = unit.start_timestamp;
  record["end_timestamp"] = unit.end_timestamp;
  record["pages_viewed"] = unit.pages_viewed;
  record["serp_time_seconds"] = unit.serp_time_seconds;
  if (unit.satisfaction) record["satisfaction"] = *unit.satisfaction;
  if (!unit.click_reasons.empty()) {
    nlohmann::json reasons = nlohmann::json::array();
    for (ClickReason reason : unit.click_reasons) {
      reasons.push_back(std::string(reason_name(reason)));
    }
    record["click_reasons"] = std::move(reasons);
  }
  record["clicks"] = nlohmann::json::array();
  for (const Click& click : unit.clicks) {
    record["clicks"].push_back({{"rank", click.rank},
                                {"timestamp", click.timestamp},
                                {"dwell_seconds", click.dwell_seconds}});
  }
  record["hovers"] = nlohmann::json::array();
  for (const Hover& hover : unit.hovers) {
    record["hovers"].push_back({{"rank", hover.rank},
                               {"enter_timestamp", hover.enter_timestamp},
                               {"exit_timestamp", hover.exit_timestamp}});
  }
  if (!unit.impressions.empty()) {
    record["impressions"] = nlohmann::json::array();
    for (const auto& [rank, doc_id] : unit.impressions) {
      record["impressions"].push_back({{"rank", rank}, {"doc_id", doc_id}});
    }
  }
  return record;
}

}  // namespace

std::vector<Session> read_sessions_jsonl(std::istream& in) {
  std::vector<Session> sessions;
  jsonl::for_each_record(in, [&](const nlohmann::json& record, std::size_t line_no) {
    const std::string where = "line " + std::to_string(line_no) + ": ";
    require(record.contains("session_id") && record["session_id"].is_string(),
            where + "session needs 'session_id'");
    require(record.contains("user_id") && record["user_id"].is_string(),
            where + "session needs 'user_id'");
    require(record.contains("queries") && record["queries"].is_array() &&
                !record["queries"].empty(),
            where + "session needs a non-empty 'queries' array");
    Session session;
    session.session_id = record["session_id"].get<std::string>();
    session.user_id = record["user_id"].get<std::string>();
    if (record.contains("intent")) {
      session.intent = intent_label_from_json(record["intent"]);
    }
    for (const auto& entry : record["queries"]) {
      session.queries.push_back(query_unit_from_json(entry, where));
    }
    sessions.push_back(std::move(session));
  });
  return sessions;
}

void write_sessions_jsonl(std::ostream& out, const std::vector<Session>& sessions) {
  for (const Session& session : sessions) {
    nlohmann::json record;
    record["session_id"] = session.session_id;
    record["user_id"] = session.user_id;
    if (session.intent) record["intent"] = intent_label_to_json(*session.intent);
    record["queries"] = nlohmann::json::array();
    for (const QueryUnit& unit : session.queries) {
      record["queries"].push_back(query_unit_to_json(unit));
    }
    out << record.dump() << "\n";
  }
}

}  // namespace intentir::logs
