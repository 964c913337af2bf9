#include "codeagg/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "codeagg/errors.hpp"
#include "codeagg/rng.hpp"

namespace codeagg {

namespace {

constexpr int kEcocCandidates = 20000;

void require_class_count(int num_classes) {
  if (num_classes < 3) {
    throw Error("invalid-class-count",
                "need at least 3 classes, got " + std::to_string(num_classes));
  }
}

}  // namespace

std::string to_string(CodeScheme scheme) {
  switch (scheme) {
    case CodeScheme::Ova: return "ova";
    case CodeScheme::AllPairs: return "allpairs";
    case CodeScheme::EcocComplete: return "ecoc_complete";
    case CodeScheme::EcocSparseRandom: return "ecoc_sparse_random";
  }
  throw Error("invalid-scheme", "unknown scheme value");
}

CodeScheme scheme_from_string(const std::string& name) {
  if (name == "ova") return CodeScheme::Ova;
  if (name == "allpairs") return CodeScheme::AllPairs;
  if (name == "ecoc_complete") return CodeScheme::EcocComplete;
  if (name == "ecoc_sparse_random") return CodeScheme::EcocSparseRandom;
  throw Error("invalid-scheme", "unknown scheme name '" + name + "'");
}

char entry_to_char(CodeEntry e) {
  switch (e) {
    case CodeEntry::Neg: return '0';
    case CodeEntry::Pos: return '1';
    case CodeEntry::DontCare: return '*';
  }
  throw Error("invalid-entry", "unknown code entry value");
}

CodeEntry entry_from_char(char c) {
  switch (c) {
    case '0': return CodeEntry::Neg;
    case '1': return CodeEntry::Pos;
    case '*': return CodeEntry::DontCare;
    default:
      throw Error("invalid-entry",
                  std::string("unknown code entry '") + c + "'");
  }
}

namespace {

double entry_pair_distance(CodeEntry a, CodeEntry b) {
  const bool a_defined = a != CodeEntry::DontCare;
  const bool b_defined = b != CodeEntry::DontCare;
  if (a_defined && b_defined) return a != b ? 1.0 : 0.0;
  if (a_defined != b_defined) return 0.5;
  return 0.0;
}

double raw_column_distance(const std::vector<CodeEntry>& entries, int rows,
                           int cols, int col_a, int col_b) {
  double dist = 0.0;
  for (int r = 0; r < rows; ++r) {
    dist += entry_pair_distance(entries[static_cast<std::size_t>(r) * cols + col_a],
                                entries[static_cast<std::size_t>(r) * cols + col_b]);
  }
  return dist;
}

// Validity shared by all schemes; sparse-random additionally requires each
// column to carry both a Pos and a Neg.
bool matrix_is_valid(const std::vector<CodeEntry>& entries, int rows, int cols,
                     bool column_needs_both, std::string* why) {
  for (int r = 0; r < rows; ++r) {
    bool has_pos = false, has_neg = false;
    for (int c = 0; c < cols; ++c) {
      const CodeEntry e = entries[static_cast<std::size_t>(r) * cols + c];
      has_pos |= e == CodeEntry::Pos;
      has_neg |= e == CodeEntry::Neg;
    }
    if (!has_pos || !has_neg) {
      if (why) *why = "row " + std::to_string(r) + " lacks a Pos or a Neg";
      return false;
    }
  }
  for (int c = 0; c < cols; ++c) {
    bool has_pos = false, has_neg = false, has_defined = false;
    for (int r = 0; r < rows; ++r) {
      const CodeEntry e = entries[static_cast<std::size_t>(r) * cols + c];
      has_defined |= e != CodeEntry::DontCare;
      has_pos |= e == CodeEntry::Pos;
      has_neg |= e == CodeEntry::Neg;
    }
    if (!has_defined || (column_needs_both && (!has_pos || !has_neg))) {
      if (why) *why = "column " + std::to_string(c + 1) + " is under-defined";
      return false;
    }
  }
  for (int a = 0; a < cols; ++a) {
    for (int b = a + 1; b < cols; ++b) {
      if (raw_column_distance(entries, rows, cols, a, b) == 0.0) {
        if (why) {
          *why = "columns " + std::to_string(a + 1) + " and " +
                 std::to_string(b + 1) + " coincide";
        }
        return false;
      }
    }
  }
  return true;
}

}  // namespace

CodeMatrix::CodeMatrix(CodeScheme scheme, int num_classes, int num_classifiers,
                       std::vector<CodeEntry> row_major)
    : scheme_(scheme),
      num_classes_(num_classes),
      num_classifiers_(num_classifiers),
      entries_(std::move(row_major)) {
  require_class_count(num_classes_);
  if (num_classifiers_ < 1 ||
      entries_.size() != static_cast<std::size_t>(num_classifiers_) * num_classes_) {
    throw Error("shape-error", "entry count does not match M x K");
  }
  std::string why;
  const bool needs_both = scheme_ == CodeScheme::EcocSparseRandom;
  if (!matrix_is_valid(entries_, num_classifiers_, num_classes_, needs_both, &why)) {
    throw Error("invalid-code-matrix", why);
  }
}

CodeMatrix gen_ova(int num_classes) {
  require_class_count(num_classes);
  std::vector<CodeEntry> entries(
      static_cast<std::size_t>(num_classes) * num_classes, CodeEntry::Neg);
  for (int j = 0; j < num_classes; ++j) {
    entries[static_cast<std::size_t>(j) * num_classes + j] = CodeEntry::Pos;
  }
  return CodeMatrix(CodeScheme::Ova, num_classes, num_classes, std::move(entries));
}

CodeMatrix gen_allpairs(int num_classes) {
  require_class_count(num_classes);
  const int rows = num_classes * (num_classes - 1) / 2;
  std::vector<CodeEntry> entries(
      static_cast<std::size_t>(rows) * num_classes, CodeEntry::DontCare);
  int r = 0;
  for (int a = 0; a < num_classes; ++a) {
    for (int b = a + 1; b < num_classes; ++b, ++r) {
      entries[static_cast<std::size_t>(r) * num_classes + a] = CodeEntry::Pos;
      entries[static_cast<std::size_t>(r) * num_classes + b] = CodeEntry::Neg;
    }
  }
  return CodeMatrix(CodeScheme::AllPairs, num_classes, rows, std::move(entries));
}

namespace {

CodeMatrix gen_ecoc_complete(int num_classes) {
  // Row v (v = 0 .. 2^(K-1)-2) puts class 1 on the Pos side together with
  // every class c in 2..K whose bit (c-2) of v is set. v = 2^(K-1)-1 would
  // be the all-Pos row and is skipped.
  const int rows = (1 << (num_classes - 1)) - 1;
  std::vector<CodeEntry> entries(
      static_cast<std::size_t>(rows) * num_classes, CodeEntry::Neg);
  for (int v = 0; v < rows; ++v) {
    entries[static_cast<std::size_t>(v) * num_classes] = CodeEntry::Pos;
    for (int c = 2; c <= num_classes; ++c) {
      if ((v >> (c - 2)) & 1) {
        entries[static_cast<std::size_t>(v) * num_classes + (c - 1)] = CodeEntry::Pos;
      }
    }
  }
  return CodeMatrix(CodeScheme::EcocComplete, num_classes, rows, std::move(entries));
}

CodeMatrix gen_ecoc_sparse_random(int num_classes, std::uint64_t seed) {
  const int rows = static_cast<int>(
      std::ceil(15.0 * std::log2(static_cast<double>(num_classes))));
  const std::size_t size = static_cast<std::size_t>(rows) * num_classes;
  const Rng base(seed);

  std::vector<CodeEntry> best;
  double best_distance = -1.0;
  std::vector<CodeEntry> candidate(size);
  for (int idx = 0; idx < kEcocCandidates; ++idx) {
    Rng rng = base.split(static_cast<std::uint64_t>(idx));
    for (std::size_t e = 0; e < size; ++e) {
      const double u = rng.uniform();
      candidate[e] = u < 0.5    ? CodeEntry::DontCare
                     : u < 0.75 ? CodeEntry::Neg
                                : CodeEntry::Pos;
    }
    if (!matrix_is_valid(candidate, rows, num_classes, true, nullptr)) continue;
    double min_dist = std::numeric_limits<double>::infinity();
    for (int a = 0; a < num_classes && min_dist > best_distance; ++a) {
      for (int b = a + 1; b < num_classes; ++b) {
        min_dist = std::min(
            min_dist, raw_column_distance(candidate, rows, num_classes, a, b));
        if (min_dist <= best_distance) break;  // cannot beat the incumbent
      }
    }
    if (min_dist > best_distance) {
      best_distance = min_dist;
      best = candidate;
    }
  }
  if (best.empty()) {
    throw Error("generation-failed",
                "no valid sparse random code among " +
                    std::to_string(kEcocCandidates) + " candidates (seed " +
                    std::to_string(seed) + ")");
  }
  return CodeMatrix(CodeScheme::EcocSparseRandom, num_classes, rows, std::move(best));
}

}  // namespace

CodeMatrix gen_ecoc(int num_classes, std::uint64_t seed) {
  require_class_count(num_classes);
  if (num_classes < 8) return gen_ecoc_complete(num_classes);
  return gen_ecoc_sparse_random(num_classes, seed);
}

double column_distance(const CodeMatrix& code, int label_a, int label_b) {
  const int K = code.num_classes();
  if (label_a < 1 || label_a > K || label_b < 1 || label_b > K) {
    throw Error("invalid-label", "column label out of range 1..K");
  }
  return raw_column_distance(code.entries(), code.num_classifiers(), K,
                             label_a - 1, label_b - 1);
}

double code_distance(const CodeMatrix& code) {
  double min_dist = std::numeric_limits<double>::infinity();
  for (int a = 1; a <= code.num_classes(); ++a) {
    for (int b = a + 1; b <= code.num_classes(); ++b) {
      min_dist = std::min(min_dist, column_distance(code, a, b));
    }
  }
  return min_dist;
}

}  // namespace codeagg
