#include <algorithm>
#include <cmath>
#include <set>

#include "codeagg/encoding.hpp"
#include "codeagg/errors.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace codeagg;
using test::throws_code;

namespace {

// Row as a comparable string, for order-insensitive matrix comparison.
std::string row_string(const CodeMatrix& c, int row) {
  std::string s;
  for (int k = 1; k <= c.num_classes(); ++k) s += entry_to_char(c.at(row, k));
  return s;
}

std::multiset<std::string> row_set(const CodeMatrix& c) {
  std::multiset<std::string> rows;
  for (int r = 0; r < c.num_classifiers(); ++r) rows.insert(row_string(c, r));
  return rows;
}

bool rows_valid(const CodeMatrix& c) {
  for (int r = 0; r < c.num_classifiers(); ++r) {
    const std::string s = row_string(c, r);
    if (s.find('1') == std::string::npos || s.find('0') == std::string::npos) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("encoding") {

TEST_CASE("ova is the identity code") {
  const CodeMatrix c = gen_ova(3);
  CHECK(c.num_classifiers() == 3);
  for (int r = 0; r < 3; ++r) {
    for (int k = 1; k <= 3; ++k) {
      CHECK(c.at(r, k) == (k == r + 1 ? CodeEntry::Pos : CodeEntry::Neg));
    }
  }

  const CodeMatrix c4 = gen_ova(4);
  CHECK(c4.num_classifiers() == 4);
  for (int r = 0; r < 4; ++r) {
    int pos = 0;
    for (int k = 1; k <= 4; ++k) pos += c4.at(r, k) == CodeEntry::Pos;
    CHECK(pos == 1);
  }
  CHECK(rows_valid(c));
}

TEST_CASE("allpairs matches the 3-class pair table up to row order") {
  const CodeMatrix c = gen_allpairs(3);
  CHECK(c.num_classifiers() == 3);
  const std::multiset<std::string> expected{"10*", "*10", "1*0"};
  CHECK(row_set(c) == expected);

  CHECK(gen_allpairs(4).num_classifiers() == 6);

  const CodeMatrix c5 = gen_allpairs(5);
  for (int k = 1; k <= 5; ++k) {
    int defined = 0;
    for (int r = 0; r < c5.num_classifiers(); ++r) {
      defined += c5.at(r, k) != CodeEntry::DontCare;
    }
    CHECK(defined == 4);
  }
}

TEST_CASE("complete ecoc enumerates bipartitions with class 1 positive") {
  const CodeMatrix c = gen_ecoc(4, 0);
  CHECK(c.num_classifiers() == 7);
  for (CodeEntry e : c.entries()) CHECK(e != CodeEntry::DontCare);
  for (int r = 0; r < 7; ++r) CHECK(c.at(r, 1) == CodeEntry::Pos);
  // all rows distinct
  const std::multiset<std::string> rows = row_set(c);
  CHECK(rows.size() == 7);
  const std::set<std::string> unique(rows.begin(), rows.end());
  CHECK(unique.size() == 7);
}

TEST_CASE("scheme M formulas for K = 3..12") {
  for (int k = 3; k <= 12; ++k) {
    CHECK(gen_ova(k).num_classifiers() == k);
    CHECK(gen_allpairs(k).num_classifiers() == k * (k - 1) / 2);
    const CodeMatrix e = gen_ecoc(k, 0);
    if (k < 8) {
      CHECK(e.num_classifiers() == (1 << (k - 1)) - 1);
      CHECK(e.scheme() == CodeScheme::EcocComplete);
    } else {
      CHECK(e.num_classifiers() ==
            static_cast<int>(std::ceil(15.0 * std::log2(double(k)))));
      CHECK(e.scheme() == CodeScheme::EcocSparseRandom);
    }
    CHECK(rows_valid(e));
  }
}

TEST_CASE("sparse random ecoc respects column constraints and frequencies") {
  const CodeMatrix c = gen_ecoc(10, 42);
  CHECK(c.num_classifiers() == 50);
  for (int k = 1; k <= 10; ++k) {
    bool pos = false, neg = false;
    for (int r = 0; r < c.num_classifiers(); ++r) {
      pos |= c.at(r, k) == CodeEntry::Pos;
      neg |= c.at(r, k) == CodeEntry::Neg;
    }
    CHECK(pos);
    CHECK(neg);
  }
  double dont = 0, pos = 0, neg = 0;
  for (CodeEntry e : c.entries()) {
    dont += e == CodeEntry::DontCare;
    pos += e == CodeEntry::Pos;
    neg += e == CodeEntry::Neg;
  }
  const double total = static_cast<double>(c.entries().size());
  CHECK(dont / total == doctest::Approx(0.5).epsilon(0.1));
  CHECK(std::abs(dont / total - 0.5) <= 0.05);
  CHECK(std::abs(pos / total - 0.25) <= 0.05);
  CHECK(std::abs(neg / total - 0.25) <= 0.05);
}

TEST_CASE("ecoc generation is deterministic per seed") {
  const CodeMatrix a = gen_ecoc(9, 123);
  const CodeMatrix b = gen_ecoc(9, 123);
  CHECK(a.entries() == b.entries());
  const CodeMatrix c = gen_ecoc(9, 124);
  CHECK(a.entries() != c.entries());
}

TEST_CASE("sparse generation reports the seed when every candidate is invalid") {
  // At K = 8 a candidate keeps all 45 rows two-sided with probability
  // around 5e-5, so some seeds legitimately exhaust the 20,000 draws.
  CHECK(throws_code([] { gen_ecoc(8, 1); }, "generation-failed"));
  try {
    gen_ecoc(8, 1);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("seed 1") != std::string::npos);
  }
}

TEST_CASE("generators reject K < 3") {
  CHECK(throws_code([] { gen_ova(2); }, "invalid-class-count"));
  CHECK(throws_code([] { gen_allpairs(1); }, "invalid-class-count"));
  CHECK(throws_code([] { gen_ecoc(2, 0); }, "invalid-class-count"));
}

TEST_CASE("code distance on the hand-enumerated small codes") {
  CHECK(code_distance(gen_ova(3)) == doctest::Approx(2.0));
  // Table-style all-pairs columns: one differing defined row plus two
  // half-credit don't-care rows per pair.
  CHECK(code_distance(gen_allpairs(3)) == doctest::Approx(2.0));
  // Complete code bipartitions {1|23}, {12|3}, {13|2}.
  CHECK(code_distance(gen_ecoc(3, 0)) == doctest::Approx(2.0));
}

TEST_CASE("column distance weighs a single don't-care as half") {
  const CodeMatrix c = gen_allpairs(3);
  for (int a = 1; a <= 3; ++a) {
    for (int b = a + 1; b <= 3; ++b) {
      CHECK(column_distance(c, a, b) == doctest::Approx(2.0));
      CHECK(column_distance(c, b, a) == doctest::Approx(column_distance(c, a, b)));
    }
  }
}

TEST_CASE("code distance is invariant under row permutation") {
  const CodeMatrix c = gen_allpairs(4);
  std::vector<CodeEntry> permuted;
  const int m = c.num_classifiers();
  for (int r = 0; r < m; ++r) {
    const int src = (r + 3) % m;
    for (int k = 1; k <= 4; ++k) permuted.push_back(c.at(src, k));
  }
  const CodeMatrix shuffled(CodeScheme::AllPairs, 4, m, std::move(permuted));
  CHECK(code_distance(shuffled) == doctest::Approx(code_distance(c)));
}

TEST_CASE("constructor rejects invalid matrices") {
  using E = CodeEntry;
  // row without a Neg
  CHECK(throws_code(
      [] {
        CodeMatrix(CodeScheme::Ova, 3, 2,
                   {E::Pos, E::Pos, E::DontCare, E::Pos, E::Neg, E::Neg});
      },
      "invalid-code-matrix"));
  // identical columns
  CHECK(throws_code(
      [] {
        CodeMatrix(CodeScheme::Ova, 3, 2,
                   {E::Pos, E::Pos, E::Neg, E::Neg, E::Neg, E::Pos});
      },
      "invalid-code-matrix"));
}

TEST_CASE("code entry serialization round-trips") {
  for (CodeEntry e : {CodeEntry::Pos, CodeEntry::Neg, CodeEntry::DontCare}) {
    CHECK(entry_from_char(entry_to_char(e)) == e);
  }
  CHECK_THROWS_AS(entry_from_char('x'), Error);
}

}  // TEST_SUITE
