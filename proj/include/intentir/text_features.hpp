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

#ifndef INTENTIR_TEXT_FEATURES_HPP_
#define INTENTIR_TEXT_FEATURES_HPP_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace intentir::text {

struct TokenizerOptions {
  // With bigrams on, a run of CJK characters yields overlapping two-character
  // tokens ("abc" -> "ab", "bc"); a lone CJK character stays a unigram. With
  // bigrams off every CJK character becomes its own token.
  bool cjk_bigrams = true;
};

// Lowercases ASCII, keeps ASCII alphanumeric runs as tokens, segments CJK
// runs as described above, and treats every other codepoint as a separator.
// Input must be valid UTF-8.
std::vector<std::string> tokenize(std::string_view input,
                                  const TokenizerOptions& options = {});

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
  void validate() const;
};

// A tokenized document collection with the term statistics the features need.
class Corpus {
 public:
  void add_document(const std::string& doc_id, std::string_view body,
                    const TokenizerOptions& options = {});

  std::size_t size() const { return docs_.size(); }
  bool contains(const std::string& doc_id) const { return docs_.count(doc_id) > 0; }
  std::size_t doc_length(const std::string& doc_id) const;
  double avg_doc_length() const;
  std::size_t doc_frequency(const std::string& term) const;
  std::size_t term_frequency(const std::string& term, const std::string& doc_id) const;
  const std::map<std::string, std::size_t>& doc_terms(const std::string& doc_id) const;
  std::vector<std::string> doc_ids() const;

  // Smoothed document-frequency idf: ln(N / df), or ln(N + 1) for unseen
  // terms so they still carry weight instead of dividing by zero.
  double idf(const std::string& term) const;

  // JSONL corpus input: {"doc_id": "...", "text": "..."} per line.
  static Corpus read_jsonl(std::istream& in, const TokenizerOptions& options = {});

  // Versioned index snapshot; round-trips exactly.
  void write_index_json(std::ostream& out) const;
  static Corpus read_index_json(std::istream& in);

 private:
  std::map<std::string, std::map<std::string, std::size_t>> docs_;  // doc -> term -> tf
  std::map<std::string, std::size_t> doc_frequency_;
  std::map<std::string, std::size_t> doc_length_;
  std::size_t total_tokens_ = 0;
};

// Query-document features, averaged over the query term multiset where an
// average applies.
struct ContentFeatures {
  double avg_tf = 0.0;
  double avg_idf = 0.0;
  double avg_tfidf = 0.0;
  double bm25 = 0.0;
  double cosine_tfidf = 0.0;

  std::array<double, 5> as_array() const {
    return {avg_tf, avg_idf, avg_tfidf, bm25, cosine_tfidf};
  }
};

inline constexpr std::array<std::string_view, 5> kContentFeatureNames = {
    "avg_tf", "avg_idf", "avg_tfidf", "bm25", "cosine_tfidf"};

// Requires a non-empty query, a non-empty corpus, and a known doc_id. BM25
// uses the usual ln(1 + (N - df + 0.5) / (df + 0.5)) idf; the cosine compares
// tf-idf vectors of query and document and is 0 when either norm vanishes.
ContentFeatures content_features(const std::vector<std::string>& query_terms,
                                 const std::string& doc_id, const Corpus& corpus,
                                 const Bm25Params& params = {});

}  // namespace intentir::text

#endif  // INTENTIR_TEXT_FEATURES_HPP_
