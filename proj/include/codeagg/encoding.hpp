#ifndef CODEAGG_ENCODING_HPP
#define CODEAGG_ENCODING_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace codeagg {

// Ternary code-matrix entry. Pos/Neg are the two class labels of a binary
// subproblem; DontCare marks classes the subproblem ignores.
enum class CodeEntry : std::uint8_t { Neg = 0, Pos = 1, DontCare = 2 };

enum class CodeScheme { Ova, AllPairs, EcocComplete, EcocSparseRandom };

std::string to_string(CodeScheme scheme);
CodeScheme scheme_from_string(const std::string& name);

char entry_to_char(CodeEntry e);           // '1', '0', '*'
CodeEntry entry_from_char(char c);

// M x K ternary matrix. Rows define binary subproblems, columns are class
// codewords. The constructor validates:
//   - every row has at least one Pos and one Neg,
//   - every column has at least one defined (non-DontCare) entry,
//   - for EcocSparseRandom, every column has at least one Pos and one Neg,
//   - no two columns coincide under the generalized column distance.
class CodeMatrix {
 public:
  CodeMatrix(CodeScheme scheme, int num_classes, int num_classifiers,
             std::vector<CodeEntry> row_major);

  CodeScheme scheme() const noexcept { return scheme_; }
  int num_classes() const noexcept { return num_classes_; }      // K
  int num_classifiers() const noexcept { return num_classifiers_; }  // M

  // row in [0, M), label in [1, K]
  CodeEntry at(int row, int label) const {
    return entries_[static_cast<std::size_t>(row) * num_classes_ + (label - 1)];
  }

  const std::vector<CodeEntry>& entries() const noexcept { return entries_; }

 private:
  CodeScheme scheme_;
  int num_classes_;
  int num_classifiers_;
  std::vector<CodeEntry> entries_;  // row-major M x K
};

// One-versus-all: K x K identity (Pos on the diagonal, Neg elsewhere).
CodeMatrix gen_ova(int num_classes);

// All-pairs: one row per unordered pair (a, b), a < b, in lexicographic
// order; column a = Pos, column b = Neg, everything else DontCare.
CodeMatrix gen_allpairs(int num_classes);

// Error-correcting output code.
// K < 8: complete code, every bipartition with class 1 on the Pos side
// except the all-Pos one, M = 2^(K-1) - 1, no DontCare entries. Rows are
// ordered by the binary value of the membership vector of classes 2..K.
// K >= 8: sparse random code with M = ceil(15 log2 K). Entries are DontCare
// with probability 1/2 and Pos or Neg with probability 1/4 each; 20,000
// candidates are drawn, invalid ones discarded, and the candidate with the
// largest minimum pairwise column distance wins (ties to the lowest
// candidate index). Deterministic given the seed.
CodeMatrix gen_ecoc(int num_classes, std::uint64_t seed);

// Generalized Hamming distance between two codeword columns: per row, 1 if
// both entries are defined and differ, 0.5 if exactly one is DontCare,
// 0 otherwise. Labels are 1-based.
double column_distance(const CodeMatrix& code, int label_a, int label_b);

// Minimum column_distance over all column pairs.
double code_distance(const CodeMatrix& code);

}  // namespace codeagg

#endif
