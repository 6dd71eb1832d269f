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

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "intentir/error.hpp"
#include "intentir/text_features.hpp"

using namespace intentir;

namespace {

text::Corpus toy_corpus() {
  text::Corpus corpus;
  corpus.add_document("d1", "a b");
  corpus.add_document("d2", "a c");
  corpus.add_document("d3", "b c");
  return corpus;
}

}  // namespace

TEST_SUITE_BEGIN("text");

TEST_CASE("tokenizer lowercases and keeps alphanumeric runs") {
  CHECK(text::tokenize("Hello, World-42!") ==
        std::vector<std::string>{"hello", "world", "42"});
  CHECK(text::tokenize("  ") == std::vector<std::string>{});
  CHECK(text::tokenize("a_b") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("tokenizer segments CJK runs into overlapping bigrams") {
  CHECK(text::tokenize("案例") == std::vector<std::string>{"案例"});
  CHECK(text::tokenize("案例法") ==
        std::vector<std::string>{"案例", "例法"});
  CHECK(text::tokenize("案") == std::vector<std::string>{"案"});
  CHECK(text::tokenize("ab案例cd") ==
        std::vector<std::string>{"ab", "案例", "cd"});

  text::TokenizerOptions unigram;
  unigram.cjk_bigrams = false;
  CHECK(text::tokenize("案例法", unigram) ==
        std::vector<std::string>{"案", "例", "法"});
}

TEST_CASE("corpus statistics") {
  const text::Corpus corpus = toy_corpus();
  CHECK(corpus.size() == 3);
  CHECK(corpus.contains("d1"));
  CHECK(!corpus.contains("dx"));
  CHECK(corpus.doc_length("d1") == 2);
  CHECK(corpus.avg_doc_length() == doctest::Approx(2.0));
  CHECK(corpus.doc_frequency("a") == 2);
  CHECK(corpus.doc_frequency("zz") == 0);
  CHECK(corpus.term_frequency("a", "d1") == 1);
  CHECK(corpus.term_frequency("c", "d1") == 0);
  CHECK(corpus.idf("a") == doctest::Approx(std::log(1.5)).epsilon(1e-12));
  // Unseen terms take the smoothed ln(N + 1).
  CHECK(corpus.idf("zz") == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("content features against a fully matching document") {
  const text::Corpus corpus = toy_corpus();
  const text::ContentFeatures f =
      text::content_features({"a", "b"}, "d1", corpus);
  CHECK(f.avg_tf == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.avg_idf == doctest::Approx(std::log(1.5)).epsilon(1e-12));
  CHECK(f.avg_tfidf == doctest::Approx(std::log(1.5)).epsilon(1e-12));
  CHECK(f.bm25 == doctest::Approx(2.0 * std::log(1.6)).epsilon(1e-12));
  CHECK(f.cosine_tfidf == doctest::Approx(1.0).epsilon(1e-12));
  const std::array<double, 5> arr = f.as_array();
  CHECK(arr[0] == f.avg_tf);
  CHECK(arr[3] == f.bm25);
}

TEST_CASE("content features with partial overlap") {
  const text::Corpus corpus = toy_corpus();
  // Query {a, b} against d2 = {a, c}: only "a" matches, equal idf weights
  // make the tf-idf cosine exactly 1/2.
  const text::ContentFeatures f =
      text::content_features({"a", "b"}, "d2", corpus);
  CHECK(f.avg_tf == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.bm25 == doctest::Approx(std::log(1.6)).epsilon(1e-12));
  CHECK(f.cosine_tfidf == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("content features with an unseen query term") {
  const text::Corpus corpus = toy_corpus();
  const text::ContentFeatures f =
      text::content_features({"a", "zz"}, "d1", corpus);
  CHECK(f.avg_tf == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.avg_idf ==
        doctest::Approx(0.5 * (std::log(1.5) + std::log(4.0))).epsilon(1e-12));
}

TEST_CASE("content features input validation") {
  const text::Corpus corpus = toy_corpus();
  CHECK_THROWS_AS(text::content_features({}, "d1", corpus), ValidationError);
  CHECK_THROWS_AS(text::content_features({"a"}, "nope", corpus), ValidationError);
  CHECK_THROWS_AS(text::content_features({"a"}, "d1", text::Corpus()),
                  ValidationError);
  text::Bm25Params bad;
  bad.k1 = -1.0;
  CHECK_THROWS_AS(text::content_features({"a"}, "d1", corpus, bad), ValidationError);
}

TEST_CASE("corpus JSONL reader") {
  std::stringstream in(
      "{\"doc_id\": \"d1\", \"text\": \"theft appeal\"}\n"
      "{\"doc_id\": \"d2\", \"text\": \"lease dispute\"}\n");
  const text::Corpus corpus = text::Corpus::read_jsonl(in);
  CHECK(corpus.size() == 2);
  CHECK(corpus.term_frequency("theft", "d1") == 1);
}

TEST_CASE("corpus index snapshot round-trips exactly") {
  const text::Corpus corpus = toy_corpus();
  std::stringstream buffer;
  corpus.write_index_json(buffer);
  const text::Corpus readback = text::Corpus::read_index_json(buffer);
  CHECK(readback.size() == 3);
  CHECK(readback.avg_doc_length() == corpus.avg_doc_length());
  CHECK(readback.doc_frequency("a") == corpus.doc_frequency("a"));
  const text::ContentFeatures a = text::content_features({"a", "b"}, "d1", corpus);
  const text::ContentFeatures b = text::content_features({"a", "b"}, "d1", readback);
  CHECK(a.bm25 == b.bm25);
  CHECK(a.cosine_tfidf == b.cosine_tfidf);

  // And the snapshot itself is byte-stable.
  std::stringstream again;
  readback.write_index_json(again);
  CHECK(again.str() == buffer.str());
}

TEST_SUITE_END();
