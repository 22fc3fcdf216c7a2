// Copyright 2026 The qedistill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "qedistill/dataset.hpp"
#include "qedistill/errors.hpp"
#include "qedistill/rng.hpp"
#include "qedistill/sampling.hpp"
#include "qedistill/vocab.hpp"

using namespace qed;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  auto dir = fs::temp_directory_path() / "qedistill_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
}

Dataset from_lines(std::vector<std::pair<std::string, std::string>> pairs) {
  Dataset ds;
  for (auto& [src, mt] : pairs) {
    Example ex;
    ex.source = src;
    ex.mt = mt;
    ds.examples.push_back(ex);
  }
  return ds;
}

}  // namespace

TEST_SUITE_BEGIN("corpus");

TEST_CASE("tokenize detaches punctuation and lowercases") {
  CHECK(tokenize("Hello, world") ==
        std::vector<std::string>{"hello", ",", "world"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("A  B") == std::vector<std::string>{"a", "b"});
  CHECK(tokenize("don't stop") ==
        std::vector<std::string>{"don", "'", "t", "stop"});
  CHECK(tokenize("  x  ") == std::vector<std::string>{"x"});
}

TEST_CASE("tokenize keeps multi-byte sequences intact") {
  auto toks = tokenize("caf\xC3\xA9 bar");
  CHECK(toks == std::vector<std::string>{"caf\xC3\xA9", "bar"});
}

TEST_CASE("tokenize is idempotent through join") {
  Rng rng(5);
  std::vector<std::string> words = {"alpha", "beta!", "Gamma,delta", "x9"};
  for (int trial = 0; trial < 20; ++trial) {
    std::string text;
    for (int i = 0; i < 6; ++i) {
      text += words[rng.bounded(words.size())];
      text += ' ';
    }
    auto tokens = tokenize(text);
    CHECK(tokenize(join_tokens(tokens)) == tokens);
  }
}

TEST_CASE("vocabulary ranks by frequency then lexicographically") {
  Dataset ds = from_lines({{"a a b", "a a b"}});
  Vocabulary v = Vocabulary::build(ds, 10);
  CHECK(v.tokens() ==
        std::vector<std::string>{"<pad>", "<unk>", "a", "b"});
  CHECK(v.id_of("a") == 2);
  CHECK(v.id_of("b") == 3);

  Dataset tie = from_lines({{"b a", "b a"}});
  Vocabulary vt = Vocabulary::build(tie, 10);
  CHECK(vt.id_of("a") == 2);
  CHECK(vt.id_of("b") == 3);
}

TEST_CASE("vocabulary truncates to max_size plus specials") {
  Dataset ds = from_lines({{"q w e r t", "q w e r t"}});
  Vocabulary v = Vocabulary::build(ds, 3);
  CHECK(v.size() == 5);  // 3 kept + PAD + UNK
  Dataset empty;
  CHECK_THROWS_AS(Vocabulary::build(empty, 3), ContractError);
}

TEST_CASE("vocabulary id_of round trips and unknowns map to UNK") {
  Dataset ds = from_lines({{"alpha beta", "gamma"}});
  Vocabulary v = Vocabulary::build(ds, 100);
  for (int i = 0; i < v.size(); ++i) CHECK(v.id_of(v.token(i)) == i);
  CHECK(v.id_of("nonexistent") == Vocabulary::kUnk);
}

TEST_CASE("encode pads, masks, and truncates") {
  Dataset ds = from_lines({{"a", "a"}});
  Vocabulary v = Vocabulary::build(ds, 10);
  auto enc = encode({"a"}, v, 3);
  CHECK(enc.ids == std::vector<int>{v.id_of("a"), 0, 0});
  CHECK(enc.mask == std::vector<uint8_t>{1, 0, 0});
  CHECK(enc.length == 1);

  auto unseen = encode({"zzz"}, v, 2);
  CHECK(unseen.ids[0] == Vocabulary::kUnk);

  auto truncated = encode({"a", "a", "a", "a", "a"}, v, 3);
  CHECK(truncated.length == 3);
  CHECK(truncated.ids.size() == 3);
}

TEST_CASE("encode never emits an id outside the vocabulary") {
  Dataset ds = from_lines({{"m n o p q r s", "t u v w"}});
  Vocabulary v = Vocabulary::build(ds, 4);
  Rng rng(11);
  std::vector<std::string> alphabet = {"m", "n", "o", "zzz", "q", "!", "x"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> toks;
    for (int i = 0; i < 8; ++i) {
      toks.push_back(alphabet[rng.bounded(alphabet.size())]);
    }
    auto enc = encode(toks, v, 5);
    for (int id : enc.ids) {
      CHECK(id >= 0);
      CHECK(id < v.size());
    }
  }
}

TEST_CASE("score normalization and its inverse") {
  CHECK(normalize_score(100.0) == 1.0);
  CHECK(normalize_score(0.0) == 0.0);
  CHECK(normalize_score(56.9) == doctest::Approx(0.569).epsilon(1e-12));
  CHECK_THROWS_AS(normalize_score(-0.5), RangeError);
  CHECK_THROWS_AS(normalize_score(100.5), RangeError);
  CHECK_THROWS_WITH_AS(normalize_score(101.0, 7), doctest::Contains("line 7"),
                       RangeError);

  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    double x = rng.uniform01();
    CHECK(normalize_score(denormalize_score(x)) ==
          doctest::Approx(x).epsilon(1e-12));
  }
}

TEST_CASE("tsv reading handles labeled, unlabeled, and malformed rows") {
  auto path = temp_file("read_basic.tsv");
  write_file(path, "hi\thallo\t75.0\nbye\ttschuss\n");
  Dataset ds = read_pairs(path.string());
  REQUIRE(ds.size() == 2);
  CHECK(ds.examples[0].label == doctest::Approx(0.75));
  CHECK_FALSE(ds.examples[1].label.has_value());

  auto bad = temp_file("read_bad.tsv");
  write_file(bad, "only-one-column\n");
  CHECK_THROWS_WITH_AS(read_pairs(bad.string()), doctest::Contains("line 1"),
                       ParseError);

  auto nonnum = temp_file("read_nonnum.tsv");
  write_file(nonnum, "a\tb\tnot-a-number\n");
  CHECK_THROWS_AS(read_pairs(nonnum.string()), ParseError);

  auto header = temp_file("read_header.tsv");
  write_file(header, "src\tmt\tscore\na\tb\t50\n");
  TsvOptions opt;
  opt.has_header = true;
  CHECK(read_pairs(header.string(), opt).size() == 1);
}

TEST_CASE("tsv round trip preserves every field") {
  Rng rng(17);
  Dataset ds;
  ds.name = "roundtrip";
  for (int i = 0; i < 200; ++i) {
    Example ex;
    ex.source = "src" + std::to_string(i) + " , tok";
    ex.mt = "mt" + std::to_string(i);
    if (i % 5 != 0) {
      ex.label = rng.uniform01();
      if (i % 3 == 0) ex.variance = rng.uniform01() * 0.1;
    }
    ds.examples.push_back(ex);
  }
  auto path = temp_file("roundtrip.tsv");
  write_pairs(ds, path.string());
  Dataset back = read_pairs(path.string());
  REQUIRE(back.size() == ds.size());
  for (size_t i = 0; i < ds.size(); ++i) {
    CHECK(back.examples[i].source == ds.examples[i].source);
    CHECK(back.examples[i].mt == ds.examples[i].mt);
    CHECK(back.examples[i].label.has_value() ==
          ds.examples[i].label.has_value());
    if (ds.examples[i].label) {
      CHECK(std::fabs(*back.examples[i].label - *ds.examples[i].label) <
            1e-9);
    }
    CHECK(back.examples[i].variance.has_value() ==
          ds.examples[i].variance.has_value());
    if (ds.examples[i].variance) {
      CHECK(std::fabs(*back.examples[i].variance -
                      *ds.examples[i].variance) < 1e-9);
    }
  }
}

TEST_CASE("corpus sampling enforces inclusive character bounds") {
  std::string s49(49, 'x');
  std::string s50(50, 'x');
  std::string s150(150, 'x');
  std::string s151(151, 'x');
  std::vector<Document> docs = {{"d1", {s49, s50, s150, s151}}};
  auto pool = sample_corpus(docs, nullptr, 50, 150, 10);
  CHECK(pool == std::vector<std::string>{s50, s150});
}

TEST_CASE("corpus sampling counts code points, not bytes") {
  // Two-byte characters: 5 code points, 10 bytes.
  std::string five_cp;
  for (int i = 0; i < 5; ++i) five_cp += "\xC3\xA9";
  std::vector<Document> docs = {{"d", {five_cp}}};
  CHECK(sample_corpus(docs, nullptr, 5, 5, 1).size() == 1);
  CHECK(sample_corpus(docs, nullptr, 6, 10, 1).empty());
}

TEST_CASE("corpus sampling keeps the top documents by qualifying count") {
  auto mk = [](const std::string& id, int n) {
    Document d{id, {}};
    for (int i = 0; i < n; ++i) {
      d.sentences.push_back(id + "-" + std::to_string(i) +
                            std::string(10, 'x'));
    }
    return d;
  };
  std::vector<Document> docs = {mk("a", 5), mk("b", 2), mk("c", 9)};
  auto pool = sample_corpus(docs, nullptr, 1, 100, 2);
  CHECK(pool.size() == 14);  // 9 + 5
  CHECK(pool[0].substr(0, 1) == "c");
  CHECK(pool[9].substr(0, 1) == "a");

  // Tie on qualifying count: ascending doc id wins.
  std::vector<Document> tie = {mk("z", 3), mk("y", 3), mk("x", 1)};
  auto pool2 = sample_corpus(tie, nullptr, 1, 100, 1);
  CHECK(pool2[0].substr(0, 1) == "y");

  CHECK_THROWS_AS(sample_corpus(docs, nullptr, 1, 100, 0), ConfigError);
}

TEST_CASE("corpus sampling respects the language predicate") {
  std::vector<Document> docs = {
      {"d", {"keep this sentence ok", "drop this sentence no"}}};
  auto pool = sample_corpus(
      docs, [](std::string_view s) { return s.find("keep") == 0; }, 1, 100,
      5);
  CHECK(pool.size() == 1);
}

TEST_CASE("overlap exclusion compares normalized token streams") {
  Dataset pool = from_lines({{"Hello, world", "Hallo Welt"},
                             {"unique pair", "paire unique"}});
  Dataset forbidden = from_lines({{"hello , WORLD", "hallo welt"}});
  const Dataset* fb[] = {&forbidden};
  Dataset out = exclude_overlap(pool, fb);
  REQUIRE(out.size() == 1);
  CHECK(out.examples[0].source == "unique pair");

  Dataset all_gone = exclude_overlap(forbidden, fb);
  CHECK(all_gone.empty());

  Dataset disjoint = from_lines({{"x", "y"}});
  CHECK(exclude_overlap(disjoint, fb).size() == 1);
}

TEST_CASE("vocab text file round trips") {
  Dataset ds = from_lines({{"pear apple apple", "plum pear apple"}});
  Vocabulary v = Vocabulary::build(ds, 50);
  auto path = temp_file("vocab.txt");
  save_vocab_text(v, path.string());
  Vocabulary back = load_vocab_text(path.string());
  CHECK(back.tokens() == v.tokens());
}

TEST_SUITE_END();
