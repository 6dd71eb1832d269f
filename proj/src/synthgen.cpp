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

#include "intentir/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "intentir/error.hpp"
#include "intentir/rng.hpp"

namespace intentir::synth {

namespace {

// 2026-01-01T00:00:00Z; sessions occupy 6-hour slots so consecutive sessions
// of one user sit days apart and never merge at the 30-minute gap.
constexpr std::int64_t kBaseTimestampMs = 1767225600000ll;
constexpr std::int64_t kSessionSlotMs = 6ll * 3600 * 1000;

constexpr std::array<std::string_view, 10> kVocabulary = {
    "injury", "contract", "theft",  "divorce",     "lease",
    "fraud",  "appeal",   "custody", "damages",    "license"};

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::string format_id(const char* prefix, std::size_t index, int width) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%s%0*zu", prefix, width, index);
  return buffer;
}

}  // namespace

void IntentProfile::validate() const {
  require(max_rank >= 2, "profile: max_rank must be at least 2");
  require(queries_per_session >= 1.0, "profile: queries_per_session must be >= 1");
  require(search_depth >= 1.0, "profile: search_depth must be >= 1");
  require(clicks_per_session > 0.0, "profile: clicks_per_session must be positive");
  require(hovers_per_session > 0.0, "profile: hovers_per_session must be positive");
  const double rank_cap = (static_cast<double>(max_rank) + 1.0) / 2.0;
  require(avg_click_rank > 1.0 && avg_click_rank < rank_cap,
          "profile: avg_click_rank outside the truncated-geometric range");
  require(avg_hover_rank > 1.0 && avg_hover_rank < rank_cap,
          "profile: avg_hover_rank outside the truncated-geometric range");
  require(pct_satisfied_clicks > 0.0 && pct_satisfied_clicks < 1.0,
          "profile: pct_satisfied_clicks must lie strictly between 0 and 1");
  require(avg_click_dwell > 0.0, "profile: avg_click_dwell must be positive");
  require(avg_hover_time > 0.0, "profile: avg_hover_time must be positive");
  require(task_time > 0.0, "profile: task_time must be positive");
  require(task_time > clicks_per_session * avg_click_dwell,
          "profile: task_time must exceed the expected total click dwell");
  require(satisfaction_mean >= 1.0 && satisfaction_mean <= 5.0,
          "profile: satisfaction_mean must lie in [1, 5]");
  for (double p : click_reason_probs) {
    require(p >= 0.0 && p <= 1.0, "profile: click reason probability outside [0, 1]");
  }
  require(hover_time_sigma > 0.0 && serp_sigma > 0.0,
          "profile: log-normal sigmas must be positive");
  require(satisfied_dwell_seconds > 0.0,
          "profile: satisfied_dwell_seconds must be positive");
}

double truncated_geometric_mean(double q, int max_rank) {
  require(q > 0.0 && q < 1.0 && max_rank >= 1, "truncated_geometric_mean: bad inputs");
  double weight = 1.0, total = 0.0, moment = 0.0;
  for (int k = 1; k <= max_rank; ++k) {
    total += weight;
    moment += static_cast<double>(k) * weight;
    weight *= q;
  }
  return moment / total;
}

double solve_truncated_geometric(double target_mean, int max_rank) {
  const double cap = (static_cast<double>(max_rank) + 1.0) / 2.0;
  require(target_mean > 1.0 && target_mean < cap,
          "solve_truncated_geometric: mean unreachable on {1..max_rank}");
  double lo = 1e-12, hi = 1.0 - 1e-12;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (truncated_geometric_mean(mid, max_rank) < target_mean) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

// P(rank >= r) under weight q^(k-1) on {1..R}.
double geometric_survival(double q, int max_rank, int r) {
  const double total = 1.0 - std::pow(q, max_rank);
  return (std::pow(q, r - 1) - std::pow(q, max_rank)) / total;
}

double geometric_pmf(double q, int max_rank, int r) {
  const double total = 1.0 - std::pow(q, max_rank);
  return std::pow(q, r - 1) * (1.0 - q) / total;
}

// PGF of the per-session count: one Poisson(rate) per query unit with
// 1 + Poisson(queries - 1) units. E[z^M] = u * exp(lambda * (u - 1)) with
// u = exp(rate * (z - 1)).
double session_count_pgf(double z, double rate, double queries_mean) {
  const double u = std::exp(rate * (z - 1.0));
  return u * std::exp((queries_mean - 1.0) * (u - 1.0));
}

// E[min rank | at least one event], in closed form via E[min] =
// sum_r P(min >= r) and P(min >= r | M = m) = survival(r)^m.
double expected_min_rank(double rate, double queries_mean, double q, int max_rank) {
  const double none = session_count_pgf(0.0, rate, queries_mean);
  double sum = 0.0;
  for (int r = 1; r <= max_rank; ++r) {
    sum += session_count_pgf(geometric_survival(q, max_rank, r), rate, queries_mean) -
           none;
  }
  return sum / (1.0 - none);
}

// Log-normal with the given mean whose mass at or above the threshold hits
// the tail target. For means below the threshold the attainable tail tops
// out at Phi(-sqrt(2 ln(threshold/mean))); we pick the wider-spread root.
std::pair<double, double> solve_dwell_lognormal(double mean, double tail,
                                                double threshold) {
  const auto tail_at = [&](double sigma) {
    const double mu = std::log(mean) - 0.5 * sigma * sigma;
    return normal_cdf((mu - std::log(threshold)) / sigma);
  };
  double lo = 1e-9, hi = 12.0;
  if (mean < threshold) {
    lo = std::sqrt(2.0 * std::log(threshold / mean));
  }
  // tail_at(lo) is the largest attainable tail; below lo a second, narrower
  // root exists for means under the threshold, and we prefer the wider one.
  require(tail < tail_at(lo) - 1e-9,
          "profile: satisfied-click share unreachable for this dwell mean");
  // On [lo, hi] the tail is strictly decreasing in sigma.
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (tail_at(mid) > tail) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double sigma = 0.5 * (lo + hi);
  return {std::log(mean) - 0.5 * sigma * sigma, sigma};
}

// Laplace transforms E[exp(-t X)] and E[X exp(-t X)] of a log-normal X by
// Simpson quadrature over the normal quantile axis. The decay factor turns
// over within a z-window of width ln(100)/sigma, so the mesh resolves it
// for any spread that can arise here.
struct LaplacePair {
  double plain = 0.0;
  double weighted = 0.0;
};

LaplacePair lognormal_laplace(double t, double mu, double sigma) {
  constexpr int kIntervals = 800;
  constexpr double kZmax = 10.0;
  constexpr double kInvSqrtTwoPi = 0.39894228040143268;
  const double step = 2.0 * kZmax / kIntervals;
  LaplacePair sums;
  for (int i = 0; i <= kIntervals; ++i) {
    const double z = -kZmax + step * static_cast<double>(i);
    const double x = std::exp(mu + sigma * z);
    const double kernel = std::exp(-0.5 * z * z - t * x);
    const double weight = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sums.plain += weight * kernel;
    sums.weighted += weight * kernel * x;
  }
  const double scale = kInvSqrtTwoPi * step / 3.0;
  sums.plain *= scale;
  sums.weighted *= scale;
  return sums;
}

}  // namespace

double expected_serp_share(double serp_mu, double serp_sigma, double dwell_mu,
                           double dwell_sigma, double clicks_per_query,
                           double queries_per_session) {
  require(std::isfinite(serp_mu) && serp_sigma > 0.0,
          "serp share: SERP log-normal parameters out of range");
  require(std::isfinite(dwell_mu) && dwell_sigma > 0.0,
          "serp share: dwell log-normal parameters out of range");
  require(clicks_per_query >= 0.0, "serp share: clicks per query must be >= 0");
  require(queries_per_session >= 1.0, "serp share: sessions have at least one query");
  const double extra_queries = queries_per_session - 1.0;

  // E[S exp(-t (S + D))] factorizes per query; the expectation over the query
  // count has a closed form because the count is 1 + Poisson.
  const auto damped_serp_mass = [&](double t) {
    const LaplacePair serp = lognormal_laplace(t, serp_mu, serp_sigma);
    const LaplacePair dwell = lognormal_laplace(t, dwell_mu, dwell_sigma);
    const double unit_dwell = std::exp(clicks_per_query * (dwell.plain - 1.0));
    const double both = serp.plain * unit_dwell;
    return serp.weighted * unit_dwell * std::exp(extra_queries * (both - 1.0)) *
           (1.0 + extra_queries * both);
  };

  // Integrate over t with u = ln t; the integrand then decays on both sides,
  // exponentially on the left and normally on the right.
  constexpr double kLogLo = -28.0;
  constexpr double kLogHi = 30.0;
  constexpr int kIntervals = 1160;
  const double step = (kLogHi - kLogLo) / kIntervals;
  double total = 0.0;
  for (int i = 0; i <= kIntervals; ++i) {
    const double u = kLogLo + step * static_cast<double>(i);
    const double t = std::exp(u);
    const double weight = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    total += weight * t * damped_serp_mass(t);
  }
  return total * step / 3.0;
}

CalibratedProfile calibrate(const IntentProfile& profile) {
  profile.validate();
  CalibratedProfile out;
  out.anchors = profile;
  const int rank_cap = profile.max_rank;

  out.clicks_per_query = profile.clicks_per_session / profile.queries_per_session;
  out.hovers_per_query = profile.hovers_per_session / profile.queries_per_session;
  out.click_rank_q = solve_truncated_geometric(profile.avg_click_rank, rank_cap);
  out.hover_rank_q = solve_truncated_geometric(profile.avg_hover_rank, rank_cap);

  const auto [dwell_mu, dwell_sigma] =
      solve_dwell_lognormal(profile.avg_click_dwell, profile.pct_satisfied_clicks,
                            profile.satisfied_dwell_seconds);
  out.dwell_mu = dwell_mu;
  out.dwell_sigma = dwell_sigma;
  out.hover_mu = std::log(profile.avg_hover_time) -
                 0.5 * profile.hover_time_sigma * profile.hover_time_sigma;

  out.serp_per_query = (profile.task_time -
                        profile.clicks_per_session * profile.avg_click_dwell) /
                       profile.queries_per_session;
  ensure(out.serp_per_query > 0.0, "calibrate: SERP budget not positive");
  out.serp_mu = std::log(out.serp_per_query) - 0.5 * profile.serp_sigma * profile.serp_sigma;

  out.pages_per_session = profile.queries_per_session * profile.search_depth;
  out.min_click_rank = expected_min_rank(out.clicks_per_query,
                                         profile.queries_per_session, out.click_rank_q,
                                         rank_cap);
  out.min_hover_rank = expected_min_rank(out.hovers_per_query,
                                         profile.queries_per_session, out.hover_rank_q,
                                         rank_cap);
  double hover_clicked = 0.0;
  for (int r = 1; r <= rank_cap; ++r) {
    hover_clicked += geometric_pmf(out.hover_rank_q, rank_cap, r) *
                     (1.0 - std::exp(-out.clicks_per_query *
                                     geometric_pmf(out.click_rank_q, rank_cap, r)));
  }
  out.p_click_given_hover = hover_clicked;
  // Sessions are graded by their own SERP share, so the target is the mean
  // of per-session ratios, not the ratio of expected times.
  out.pct_serp_time =
      expected_serp_share(out.serp_mu, profile.serp_sigma, out.dwell_mu,
                          out.dwell_sigma, out.clicks_per_query,
                          profile.queries_per_session);
  return out;
}

double CalibratedProfile::measure_target(std::string_view measure) const {
  if (measure == "queries_per_session") return anchors.queries_per_session;
  if (measure == "pages_per_session") return pages_per_session;
  if (measure == "search_depth") return anchors.search_depth;
  if (measure == "clicks_per_session") return anchors.clicks_per_session;
  if (measure == "min_click_rank") return min_click_rank;
  if (measure == "avg_click_rank") return anchors.avg_click_rank;
  if (measure == "pct_satisfied_clicks") return anchors.pct_satisfied_clicks;
  if (measure == "hovers_per_session") return anchors.hovers_per_session;
  if (measure == "min_hover_rank") return min_hover_rank;
  if (measure == "avg_hover_rank") return anchors.avg_hover_rank;
  if (measure == "avg_hover_time") return anchors.avg_hover_time;
  if (measure == "p_click_given_hover") return p_click_given_hover;
  if (measure == "task_time") return anchors.task_time;
  if (measure == "pct_serp_time") return pct_serp_time;
  if (measure == "avg_click_dwell") return anchors.avg_click_dwell;
  throw ValidationError("unknown measure: " + std::string(measure));
}

std::map<taxonomy::Intent, CalibratedProfile> load_profiles_json(
    const nlohmann::json& value) {
  require(value.is_object(), "profiles: document must be an object");
  require(value.value("format_version", -1) == 1,
          "profiles: unsupported format version");
  require(value.contains("intents") && value["intents"].is_object() &&
              !value["intents"].empty(),
          "profiles: missing intents table");

  std::map<taxonomy::Intent, CalibratedProfile> profiles;
  for (const auto& [code, body] : value["intents"].items()) {
    const taxonomy::Intent intent = taxonomy::parse_intent(code);
    require(body.is_object(), "profiles: intent " + code + " must be an object");
    IntentProfile profile;
    const auto number = [&](const char* field, double fallback,
                            bool required) -> double {
      if (!body.contains(field)) {
        require(!required, "profiles: intent " + code + " lacks '" + field + "'");
        return fallback;
      }
      require(body[field].is_number(),
              "profiles: field '" + std::string(field) + "' must be a number");
      return body[field].get<double>();
    };
    profile.queries_per_session = number("queries_per_session", 0, true);
    profile.search_depth = number("search_depth", 0, true);
    profile.clicks_per_session = number("clicks_per_session", 0, true);
    profile.avg_click_rank = number("avg_click_rank", 0, true);
    profile.pct_satisfied_clicks = number("pct_satisfied_clicks", 0, true);
    profile.hovers_per_session = number("hovers_per_session", 0, true);
    profile.avg_hover_rank = number("avg_hover_rank", 0, true);
    profile.avg_hover_time = number("avg_hover_time", 0, true);
    profile.task_time = number("task_time", 0, true);
    profile.avg_click_dwell = number("avg_click_dwell", 0, true);
    profile.satisfaction_mean = number("satisfaction_mean", 3.0, false);
    profile.hover_time_sigma = number("hover_time_sigma", 0.6, false);
    profile.serp_sigma = number("serp_sigma", 0.6, false);
    profile.satisfied_dwell_seconds = number("satisfied_dwell_seconds", 30.0, false);
    profile.max_rank = static_cast<int>(number("max_rank", 10, false));
    if (body.contains("click_reason_probs")) {
      const auto& probs = body["click_reason_probs"];
      require(probs.is_array() && probs.size() == profile.click_reason_probs.size(),
              "profiles: click_reason_probs must list 8 numbers");
      for (std::size_t i = 0; i < profile.click_reason_probs.size(); ++i) {
        profile.click_reason_probs[i] = probs[i].get<double>();
      }
    }
    profiles.emplace(intent, calibrate(profile));
  }
  return profiles;
}

std::map<taxonomy::Intent, CalibratedProfile> load_profiles_file(
    const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "profiles: cannot open " + path);
  nlohmann::json value;
  try {
    in >> value;
  } catch (const nlohmann::json::exception& error) {
    throw ValidationError("profiles: " + path + ": " + error.what());
  }
  return load_profiles_json(value);
}

namespace {

struct MixTable {
  std::vector<taxonomy::Intent> intents;
  std::vector<double> weights;
};

MixTable check_mix(const std::map<taxonomy::Intent, double>& mix) {
  require(!mix.empty(), "generator: empty intent mix");
  MixTable table;
  double total = 0.0;
  for (const auto& [intent, weight] : mix) {
    require(weight >= 0.0, "generator: negative mix weight");
    table.intents.push_back(intent);
    table.weights.push_back(weight);
    total += weight;
  }
  require(std::fabs(total - 1.0) <= 1e-9, "generator: intent mix must sum to 1");
  return table;
}

struct UnitPlan {
  std::string query_text;
  int pages = 1;
  std::vector<int> click_ranks;
  std::vector<std::int64_t> click_dwells_ms;
  std::vector<int> hover_ranks;
  std::vector<std::int64_t> hover_durations_ms;
  std::int64_t serp_ms = 0;
  int satisfaction = 3;
  std::vector<logs::ClickReason> reasons;
};

void emit_unit(std::vector<logs::RawEvent>& events, const std::string& user_id,
               std::string_view intent_code, const UnitPlan& plan, bool last_unit,
               std::int64_t& clock_ms) {
  const std::int64_t t0 = clock_ms;
  logs::RawEvent query;
  query.user_id = user_id;
  query.timestamp = t0;
  query.kind = logs::EventKind::kQueryIssued;
  query.query_text = plan.query_text;
  events.push_back(std::move(query));

  // SERP phase: page views evenly spread, hovers laid out sequentially per
  // rank with a small per-rank stagger. Everything stays strictly before the
  // first click so click dwell times survive the next-event reconstruction.
  for (int page = 1; page <= plan.pages; ++page) {
    logs::RawEvent view;
    view.user_id = user_id;
    view.timestamp = t0 + plan.serp_ms * page / (plan.pages + 1);
    view.kind = logs::EventKind::kSerpPageView;
    view.serp_page = page;
    events.push_back(std::move(view));
  }
  std::map<int, std::int64_t> rank_cursor;
  for (std::size_t h = 0; h < plan.hover_ranks.size(); ++h) {
    const int rank = plan.hover_ranks[h];
    auto [it, inserted] = rank_cursor.try_emplace(
        rank, t0 + 1 + (static_cast<std::int64_t>(rank) - 1) * 137);
    (void)inserted;
    logs::RawEvent enter;
    enter.user_id = user_id;
    enter.timestamp = it->second;
    enter.kind = logs::EventKind::kResultHoverEnter;
    enter.result_rank = rank;
    logs::RawEvent exit = enter;
    exit.timestamp = enter.timestamp + plan.hover_durations_ms[h];
    exit.kind = logs::EventKind::kResultHoverExit;
    it->second = exit.timestamp + 1;
    events.push_back(std::move(enter));
    events.push_back(std::move(exit));
  }

  std::int64_t cursor = t0 + plan.serp_ms;
  for (std::size_t c = 0; c < plan.click_ranks.size(); ++c) {
    logs::RawEvent click;
    click.user_id = user_id;
    click.timestamp = cursor;
    click.kind = logs::EventKind::kResultClick;
    click.result_rank = plan.click_ranks[c];
    events.push_back(std::move(click));
    cursor += plan.click_dwells_ms[c];
  }

  // The feedback event terminates the unit, which also closes the dwell
  // window of the final click.
  logs::RawEvent feedback;
  feedback.user_id = user_id;
  feedback.timestamp = cursor;
  feedback.kind = logs::EventKind::kExplicitFeedback;
  feedback.payload["intent"] = std::string(intent_code);
  feedback.payload["satisfaction"] = plan.satisfaction;
  nlohmann::json reasons = nlohmann::json::array();
  for (logs::ClickReason reason : plan.reasons) {
    reasons.push_back(std::string(logs::reason_name(reason)));
  }
  feedback.payload["click_reasons"] = std::move(reasons);
  events.push_back(std::move(feedback));
  (void)last_unit;
  clock_ms = cursor;
}

}  // namespace

std::vector<logs::RawEvent> generate_sessions(
    const std::map<taxonomy::Intent, CalibratedProfile>& profiles,
    const SessionGenOptions& options) {
  require(options.n_sessions >= 1, "generator: n_sessions must be at least 1");
  require(options.n_users >= 1, "generator: n_users must be at least 1");
  const MixTable mix = check_mix(options.intent_mix);
  for (taxonomy::Intent intent : mix.intents) {
    require(profiles.count(intent) > 0,
            "generator: no profile for intent " + std::string(taxonomy::code(intent)));
  }

  std::vector<logs::RawEvent> events;
  for (std::size_t index = 0; index < options.n_sessions; ++index) {
    Rng rng(Rng::mix(options.seed, index));
    const taxonomy::Intent intent = mix.intents[rng.categorical(mix.weights)];
    const CalibratedProfile& cal = profiles.at(intent);
    const IntentProfile& anchors = cal.anchors;
    const std::string user_id = format_id(
        "u", index % static_cast<std::size_t>(options.n_users), 3);
    std::int64_t clock_ms =
        kBaseTimestampMs + static_cast<std::int64_t>(index) * kSessionSlotMs;

    const int n_queries = 1 + rng.poisson(anchors.queries_per_session - 1.0);
    for (int unit_index = 0; unit_index < n_queries; ++unit_index) {
      UnitPlan plan;
      plan.query_text =
          std::string(kVocabulary[rng.uniform_int(0, 9)]) + " " +
          std::string(kVocabulary[rng.uniform_int(0, 9)]) + " case";
      plan.pages = 1 + rng.poisson(anchors.search_depth - 1.0);

      const int n_clicks = rng.poisson(cal.clicks_per_query);
      for (int c = 0; c < n_clicks; ++c) {
        plan.click_ranks.push_back(
            rng.truncated_geometric(1.0 - cal.click_rank_q, anchors.max_rank));
        plan.click_dwells_ms.push_back(std::llround(
            rng.lognormal(cal.dwell_mu, cal.dwell_sigma) * 1000.0));
      }
      const int n_hovers = rng.poisson(cal.hovers_per_query);
      for (int h = 0; h < n_hovers; ++h) {
        plan.hover_ranks.push_back(
            rng.truncated_geometric(1.0 - cal.hover_rank_q, anchors.max_rank));
        plan.hover_durations_ms.push_back(std::max<std::int64_t>(
            1, std::llround(rng.lognormal(cal.hover_mu, anchors.hover_time_sigma) *
                            1000.0)));
      }

      // SERP time as sampled, stretched when the hover layout or page views
      // would not fit (rare; keeps every serp event before the first click).
      std::int64_t serp_ms =
          std::llround(rng.lognormal(cal.serp_mu, anchors.serp_sigma) * 1000.0);
      std::map<int, std::int64_t> rank_load;
      for (std::size_t h = 0; h < plan.hover_ranks.size(); ++h) {
        rank_load[plan.hover_ranks[h]] += plan.hover_durations_ms[h] + 1;
      }
      std::int64_t needed = static_cast<std::int64_t>(plan.pages) + 2;
      for (const auto& [rank, load] : rank_load) {
        needed = std::max(needed,
                          1 + (static_cast<std::int64_t>(rank) - 1) * 137 + load + 1);
      }
      plan.serp_ms = std::max(serp_ms, needed);

      plan.satisfaction =
          1 + rng.binomial(4, (anchors.satisfaction_mean - 1.0) / 4.0);
      for (std::size_t reason = 0; reason < anchors.click_reason_probs.size();
           ++reason) {
        if (rng.uniform() < anchors.click_reason_probs[reason]) {
          plan.reasons.push_back(static_cast<logs::ClickReason>(reason));
        }
      }

      emit_unit(events, user_id, taxonomy::code(intent), plan,
                unit_index + 1 == n_queries, clock_ms);
    }
  }
  return events;
}

RankingData generate_ranking_data(
    const std::map<taxonomy::Intent, RelevanceFn>& functions,
    const RankingGenOptions& options) {
  require(!functions.empty(), "ranking generator: no relevance functions");
  require(options.n_queries >= 1, "ranking generator: n_queries must be at least 1");
  require(options.docs_per_query >= 1 && options.docs_per_query <= 1000,
          "ranking generator: docs_per_query must lie in [1, 1000]");
  require(options.noise >= 0.0 && options.noise < 0.5,
          "ranking generator: noise must lie in [0, 0.5)");

  std::map<taxonomy::Intent, double> mix = options.intent_mix;
  if (mix.empty()) {
    for (const auto& [intent, fn] : functions) {
      (void)fn;
      mix[intent] = 1.0 / static_cast<double>(functions.size());
    }
  }
  const MixTable table = check_mix(mix);
  for (taxonomy::Intent intent : table.intents) {
    require(functions.count(intent) > 0,
            "ranking generator: mix names intent without a relevance function");
  }

  RankingData data;
  std::map<taxonomy::Intent, double> max_probability;
  for (std::size_t q = 0; q < options.n_queries; ++q) {
    Rng rng(Rng::mix(options.seed, 0x9a4b0000ull + q));
    const taxonomy::Intent intent = table.intents[rng.categorical(table.weights)];
    const RelevanceFn& fn = functions.at(intent);
    const std::string query_id = format_id("q", q, 5);
    const std::string session_id = format_id("rs", q, 5);
    for (int d = 0; d < options.docs_per_query; ++d) {
      ltr::RankingInstance instance;
      instance.query_id = query_id;
      instance.session_id = session_id;
      instance.doc_id = query_id + "-d" + std::to_string(d + 1);
      for (double& feature : instance.features) feature = rng.uniform();
      const double p = std::clamp(fn(instance.features), 0.0, 1.0);
      auto [it, inserted] = max_probability.try_emplace(intent, p);
      if (!inserted) it->second = std::max(it->second, p);
      bool relevant = rng.uniform() < p;
      if (options.noise > 0.0 && rng.uniform() < options.noise) relevant = !relevant;
      instance.relevance = relevant ? 1 : 0;
      instance.intent = intent;

      std::string text = "case";
      for (int w = 0; w < 3; ++w) {
        text += " ";
        text += kVocabulary[(q * 7 + static_cast<std::size_t>(d) * 3 +
                             static_cast<std::size_t>(w) * 11) %
                            kVocabulary.size()];
      }
      data.corpus.add_document(instance.doc_id, text);
      data.instances.push_back(std::move(instance));
    }
  }
  for (const auto& [intent, max_p] : max_probability) {
    require(max_p > 0.0, "ranking generator: relevance function for " +
                             std::string(taxonomy::code(intent)) +
                             " assigns zero probability everywhere");
  }
  return data;
}

std::map<taxonomy::Intent, RelevanceFn> conflicting_relevance_functions() {
  std::map<taxonomy::Intent, RelevanceFn> functions;
  functions[taxonomy::Intent::kParticularCase] =
      [](const std::array<double, 5>& x) { return x[0] > 0.5 ? 1.0 : 0.0; };
  functions[taxonomy::Intent::kCharacterization] =
      [](const std::array<double, 5>& x) { return x[0] <= 0.5 ? 1.0 : 0.0; };
  functions[taxonomy::Intent::kPenalty] =
      [](const std::array<double, 5>& x) { return x[4] > 0.5 ? 1.0 : 0.0; };
  functions[taxonomy::Intent::kProcedure] =
      [](const std::array<double, 5>& x) { return x[4] <= 0.5 ? 1.0 : 0.0; };
  return functions;
}

}  // namespace intentir::synth
