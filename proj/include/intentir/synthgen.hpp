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

#ifndef INTENTIR_SYNTHGEN_HPP_
#define INTENTIR_SYNTHGEN_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "intentir/ltr.hpp"
#include "intentir/session_log.hpp"
#include "intentir/taxonomy.hpp"
#include "intentir/text_features.hpp"

namespace intentir::synth {

// Behavior anchors of one intent: the session-measure means the generated
// logs reproduce in expectation, plus the distribution-shape choices the
// anchors leave open. Count distributions are shifted Poisson, ranks are
// truncated geometric, and durations are log-normal.
struct IntentProfile {
  double queries_per_session = 5.0;  // >= 1
  double search_depth = 1.2;         // mean SERP pages per query, >= 1
  double clicks_per_session = 4.0;
  double avg_click_rank = 3.0;       // in (1, (max_rank + 1) / 2)
  double pct_satisfied_clicks = 0.5;
  double hovers_per_session = 30.0;
  double avg_hover_rank = 3.0;
  double avg_hover_time = 2.5;       // seconds
  double task_time = 400.0;          // seconds; must exceed total click dwell
  double avg_click_dwell = 35.0;     // seconds
  double satisfaction_mean = 3.0;    // in [1, 5]
  std::array<double, 8> click_reason_probs = {0.9, 0.2, 0.3, 0.2, 0.2, 0.1, 0.2, 0.05};
  double hover_time_sigma = 0.6;     // log-scale spread of hover durations
  double serp_sigma = 0.6;           // log-scale spread of per-query SERP time
  double satisfied_dwell_seconds = 30.0;
  int max_rank = 10;

  void validate() const;
};

// Anchors plus everything solved from them: sampler parameters and the
// closed-form means of the structurally dependent measures (pages, minimum
// ranks, click-through rate of hovered results, SERP-time share).
struct CalibratedProfile {
  IntentProfile anchors;

  // Induced measure means; all other measure targets equal the anchors.
  double pages_per_session = 0.0;
  double min_click_rank = 0.0;
  double min_hover_rank = 0.0;
  double p_click_given_hover = 0.0;
  double pct_serp_time = 0.0;

  // Sampler parameters.
  double clicks_per_query = 0.0;   // Poisson rate per query unit
  double hovers_per_query = 0.0;   // Poisson rate per query unit
  double click_rank_q = 0.0;       // geometric decay of click ranks
  double hover_rank_q = 0.0;       // geometric decay of hover ranks
  double dwell_mu = 0.0;           // log-normal click dwell
  double dwell_sigma = 0.0;
  double hover_mu = 0.0;           // log-normal hover duration
  double serp_per_query = 0.0;     // mean SERP seconds per query unit
  double serp_mu = 0.0;            // log-normal SERP time

  // Expected value of any of the 15 session measures under the generator.
  double measure_target(std::string_view measure) const;
};

// Solves all sampler parameters from the anchors. Throws ValidationError
// when the anchors are unattainable (for example a satisfied-click share
// above what any log-normal with the given dwell mean can reach).
CalibratedProfile calibrate(const IntentProfile& profile);

// Mean of a geometric distribution on {1..max_rank} with weight q^(k-1),
// and the decay solved back from a target mean. Exposed for tests.
double truncated_geometric_mean(double q, int max_rank);
double solve_truncated_geometric(double target_mean, int max_rank);

// Expected per-session share of task time spent on result lists, E[S/(S+D)],
// for a session of 1 + Poisson(queries_per_session - 1) queries where each
// query adds one log-normal SERP interval (serp_mu, serp_sigma) to S and a
// Poisson(clicks_per_query) number of log-normal dwells (dwell_mu,
// dwell_sigma) to D. The ratio of expectations understates this mean of
// per-session ratios when dwell totals vary a lot, so it is computed exactly
// via E[1/T] = integral of E[exp(-t T)] over t >= 0. Exposed for tests.
double expected_serp_share(double serp_mu, double serp_sigma, double dwell_mu,
                           double dwell_sigma, double clicks_per_query,
                           double queries_per_session);

// Profile file: {"format_version": 1, "intents": {"PC": {anchor fields}}}.
std::map<taxonomy::Intent, CalibratedProfile> load_profiles_json(
    const nlohmann::json& value);
std::map<taxonomy::Intent, CalibratedProfile> load_profiles_file(
    const std::string& path);

struct SessionGenOptions {
  std::size_t n_sessions = 0;
  std::map<taxonomy::Intent, double> intent_mix;  // must sum to 1
  std::uint64_t seed = 0;
  int n_users = 12;
};

// Emits the raw event log of n_sessions synthetic sessions. Deterministic
// per seed; each session draws from its own substream keyed by session
// index, so any contiguous slice regenerates independently. Inter-session
// gaps exceed the split threshold by construction.
std::vector<logs::RawEvent> generate_sessions(
    const std::map<taxonomy::Intent, CalibratedProfile>& profiles,
    const SessionGenOptions& options);

// Maps the 5 ranking features to a click probability in [0, 1].
using RelevanceFn = std::function<double(const std::array<double, 5>&)>;

struct RankingGenOptions {
  std::size_t n_queries = 0;
  int docs_per_query = 10;
  double noise = 0.0;  // label flip probability, in [0, 0.5)
  std::uint64_t seed = 0;
  std::map<taxonomy::Intent, double> intent_mix;  // must sum to 1
};

struct RankingData {
  std::vector<ltr::RankingInstance> instances;
  text::Corpus corpus;
};

// Features are uniform on [0, 1); relevance is Bernoulli on the intent's
// click probability with optional label flips. Every generated doc_id also
// gets a synthetic document in the corpus. An intent whose function assigns
// zero probability to every sampled doc is rejected.
RankingData generate_ranking_data(
    const std::map<taxonomy::Intent, RelevanceFn>& functions,
    const RankingGenOptions& options);

// The constructed conflict: feature 1 decides relevance under PC (above the
// median) and Ch (below), feature 5 under Pe (above) and Pr (below). No
// single ranker can satisfy all four intents at once.
std::map<taxonomy::Intent, RelevanceFn> conflicting_relevance_functions();

}  // namespace intentir::synth

#endif  // INTENTIR_SYNTHGEN_HPP_
