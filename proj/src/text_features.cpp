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

#include "intentir/text_features.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>

#include <json.hpp>

#include "intentir/error.hpp"
#include "intentir/jsonl.hpp"
#include "intentir/version.hpp"

namespace intentir::text {

namespace {

bool is_cjk(char32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) ||  // unified ideographs
         (cp >= 0x3400 && cp <= 0x4DBF) ||  // extension A
         (cp >= 0xF900 && cp <= 0xFAFF);    // compatibility ideographs
}

// Decodes one UTF-8 codepoint starting at pos; advances pos. Malformed input
// raises ValidationError.
char32_t next_codepoint(std::string_view text, std::size_t& pos) {
  const auto byte = [&](std::size_t i) -> std::uint32_t {
    return static_cast<unsigned char>(text[i]);
  };
  const std::uint32_t lead = byte(pos);
  std::size_t need = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    pos += 1;
    return lead;
  } else if ((lead >> 5) == 0x6) {
    need = 1;
    cp = lead & 0x1F;
  } else if ((lead >> 4) == 0xE) {
    need = 2;
    cp = lead & 0x0F;
  } else if ((lead >> 3) == 0x1E) {
    need = 3;
    cp = lead & 0x07;
  } else {
    throw ValidationError("tokenize: malformed UTF-8 input");
  }
  if (pos + need >= text.size()) throw ValidationError("tokenize: truncated UTF-8 input");
  for (std::size_t i = 1; i <= need; ++i) {
    const std::uint32_t cont = byte(pos + i);
    if ((cont >> 6) != 0x2) throw ValidationError("tokenize: malformed UTF-8 input");
    cp = (cp << 6) | (cont & 0x3F);
  }
  pos += need + 1;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

void flush_cjk_run(std::vector<std::string>& tokens, const std::vector<char32_t>& run,
                   const TokenizerOptions& options) {
  if (run.empty()) return;
  if (!options.cjk_bigrams || run.size() == 1) {
    for (char32_t cp : run) {
      std::string token;
      append_utf8(token, cp);
      tokens.push_back(std::move(token));
    }
    return;
  }
  for (std::size_t i = 0; i + 1 < run.size(); ++i) {
    std::string token;
    append_utf8(token, run[i]);
    append_utf8(token, run[i + 1]);
    tokens.push_back(std::move(token));
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view input, const TokenizerOptions& options) {
  std::vector<std::string> tokens;
  std::string ascii_run;
  std::vector<char32_t> cjk_run;

  const auto flush_ascii = [&] {
    if (!ascii_run.empty()) {
      tokens.push_back(ascii_run);
      ascii_run.clear();
    }
  };
  const auto flush_cjk = [&] {
    flush_cjk_run(tokens, cjk_run, options);
    cjk_run.clear();
  };

  std::size_t pos = 0;
  while (pos < input.size()) {
    const char32_t cp = next_codepoint(input, pos);
    if (cp < 0x80 && (std::isalnum(static_cast<int>(cp)) != 0)) {
      flush_cjk();
      ascii_run.push_back(static_cast<char>(std::tolower(static_cast<int>(cp))));
    } else if (is_cjk(cp)) {
      flush_ascii();
      cjk_run.push_back(cp);
    } else {
      flush_ascii();
      flush_cjk();
    }
  }
  flush_ascii();
  flush_cjk();
  return tokens;
}

void Bm25Params::validate() const {
  require(k1 >= 0.0, "bm25: k1 must be non-negative");
  require(b >= 0.0 && b <= 1.0, "bm25: b must lie in [0, 1]");
}

void Corpus::add_document(const std::string& doc_id, std::string_view body,
                          const TokenizerOptions& options) {
  require(!doc_id.empty(), "corpus: doc_id must be non-empty");
  require(docs_.count(doc_id) == 0, "corpus: duplicate doc_id " + doc_id);
  std::map<std::string, std::size_t> tf;
  std::size_t length = 0;
  for (std::string& token : tokenize(body, options)) {
    ++tf[std::move(token)];
    ++length;
  }
  for (const auto& [term, count] : tf) {
    (void)count;
    ++doc_frequency_[term];
  }
  doc_length_[doc_id] = length;
  total_tokens_ += length;
  docs_[doc_id] = std::move(tf);
}

std::size_t Corpus::doc_length(const std::string& doc_id) const {
  const auto it = doc_length_.find(doc_id);
  require(it != doc_length_.end(), "corpus: unknown doc_id " + doc_id);
  return it->second;
}

double Corpus::avg_doc_length() const {
  if (docs_.empty()) return 0.0;
  return static_cast<double>(total_tokens_) / static_cast<double>(docs_.size());
}

std::size_t Corpus::doc_frequency(const std::string& term) const {
  const auto it = doc_frequency_.find(term);
  return it == doc_frequency_.end() ? 0 : it->second;
}

std::size_t Corpus::term_frequency(const std::string& term, const std::string& doc_id) const {
  const auto doc = docs_.find(doc_id);
  require(doc != docs_.end(), "corpus: unknown doc_id " + doc_id);
  const auto it = doc->second.find(term);
  return it == doc->second.end() ? 0 : it->second;
}

const std::map<std::string, std::size_t>& Corpus::doc_terms(const std::string& doc_id) const {
  const auto doc = docs_.find(doc_id);
  require(doc != docs_.end(), "corpus: unknown doc_id " + doc_id);
  return doc->second;
}

std::vector<std::string> Corpus::doc_ids() const {
  std::vector<std::string> ids;
  ids.reserve(docs_.size());
  for (const auto& [id, terms] : docs_) {
    (void)terms;
    ids.push_back(id);
  }
  return ids;
}

double Corpus::idf(const std::string& term) const {
  require(!docs_.empty(), "corpus: idf needs a non-empty corpus");
  const double n = static_cast<double>(docs_.size());
  const std::size_t df = doc_frequency(term);
  if (df == 0) return std::log(n + 1.0);
  return std::log(n / static_cast<double>(df));
}

Corpus Corpus::read_jsonl(std::istream& in, const TokenizerOptions& options) {
  Corpus corpus;
  jsonl::for_each_record(in, [&](const nlohmann::json& record, std::size_t line_no) {
    const std::string where = "line " + std::to_string(line_no) + ": ";
    require(record.contains("doc_id") && record["doc_id"].is_string(),
            where + "corpus record needs a string 'doc_id'");
    require(record.contains("text") && record["text"].is_string(),
            where + "corpus record needs a string 'text'");
    corpus.add_document(record["doc_id"].get<std::string>(),
                        record["text"].get<std::string>(), options);
  });
  return corpus;
}

void Corpus::write_index_json(std::ostream& out) const {
  nlohmann::json index;
  index["format_version"] = kModelFormatVersion;
  index["kind"] = "corpus_index";
  nlohmann::json docs = nlohmann::json::object();
  for (const auto& [doc_id, terms] : docs_) {
    nlohmann::json tf = nlohmann::json::object();
    for (const auto& [term, count] : terms) tf[term] = count;
    docs[doc_id] = std::move(tf);
  }
  index["docs"] = std::move(docs);
  out << index.dump(2) << "\n";
}

Corpus Corpus::read_index_json(std::istream& in) {
  nlohmann::json index = nlohmann::json::parse(in, nullptr, false);
  require(!index.is_discarded(), "corpus index: invalid JSON");
  require(index.is_object() && index.value("kind", "") == "corpus_index",
          "corpus index: wrong document kind");
  require(index.value("format_version", -1) == kModelFormatVersion,
          "corpus index: unsupported format version");
  Corpus corpus;
  for (const auto& [doc_id, terms] : index.at("docs").items()) {
    std::map<std::string, std::size_t> tf;
    std::size_t length = 0;
    for (const auto& [term, count] : terms.items()) {
      const std::size_t c = count.get<std::size_t>();
      tf[term] = c;
      length += c;
      ++corpus.doc_frequency_[term];
    }
    corpus.doc_length_[doc_id] = length;
    corpus.total_tokens_ += length;
    corpus.docs_[doc_id] = std::move(tf);
  }
  return corpus;
}

ContentFeatures content_features(const std::vector<std::string>& query_terms,
                                 const std::string& doc_id, const Corpus& corpus,
                                 const Bm25Params& params) {
  params.validate();
  require(!query_terms.empty(), "content_features: empty query");
  require(corpus.size() > 0, "content_features: empty corpus");
  require(corpus.contains(doc_id), "content_features: unknown doc_id " + doc_id);

  const double n_terms = static_cast<double>(query_terms.size());
  const double n_docs = static_cast<double>(corpus.size());
  const double dl = static_cast<double>(corpus.doc_length(doc_id));
  const double avgdl = corpus.avg_doc_length();

  ContentFeatures features;
  for (const std::string& term : query_terms) {
    const double tf = static_cast<double>(corpus.term_frequency(term, doc_id));
    const double idf = corpus.idf(term);
    features.avg_tf += tf;
    features.avg_idf += idf;
    features.avg_tfidf += tf * idf;

    const double df = static_cast<double>(corpus.doc_frequency(term));
    const double bm25_idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
    const double denom =
        tf + params.k1 * (1.0 - params.b + params.b * (avgdl > 0.0 ? dl / avgdl : 0.0));
    if (denom > 0.0) {
      features.bm25 += bm25_idf * (tf * (params.k1 + 1.0)) / denom;
    }
  }
  features.avg_tf /= n_terms;
  features.avg_idf /= n_terms;
  features.avg_tfidf /= n_terms;

  // Cosine between tf-idf vectors. The query vector uses query term counts.
  std::map<std::string, std::size_t> query_tf;
  for (const std::string& term : query_terms) ++query_tf[term];
  double dot = 0.0, query_norm = 0.0;
  for (const auto& [term, count] : query_tf) {
    const double idf = corpus.idf(term);
    const double qw = static_cast<double>(count) * idf;
    query_norm += qw * qw;
    const double tf = static_cast<double>(corpus.term_frequency(term, doc_id));
    dot += qw * tf * idf;
  }
  double doc_norm = 0.0;
  for (const auto& [term, tf] : corpus.doc_terms(doc_id)) {
    const double dw = static_cast<double>(tf) * corpus.idf(term);
    doc_norm += dw * dw;
  }
  if (query_norm > 0.0 && doc_norm > 0.0) {
    features.cosine_tfidf = dot / (std::sqrt(query_norm) * std::sqrt(doc_norm));
  }
  return features;
}

}  // namespace intentir::text
