#ifndef CODEAGG_SYNTHGEN_HPP
#define CODEAGG_SYNTHGEN_HPP

#include <cstdint>

#include "codeagg/base.hpp"
#include "codeagg/discrepancy.hpp"
#include "codeagg/encoding.hpp"

namespace codeagg {

struct SynthConfig {
  std::uint64_t seed = 0;
  int num_classes = 3;       // Gaussian generator only
  int per_class_train = 300;
  int per_class_test = 1000;
};

struct ThreeClassData {
  ProbMatrix q;             // 300 x 3
  std::vector<int> labels;  // 100 per class, grouped 1,2,3
  CodeMatrix code;          // all-pairs, K = 3
};

// Three-class benchmark with a deliberately broken pair classifier. The
// all-pairs rows are (1,2), (1,3), (2,3); probability estimates per row:
//   row 1: 0.9 + 0.1u on class 1, 0.1 + 0.1u on class 2
//   row 2: 0.6 + 0.4u on class 1, 0.1 + 0.1u on class 3
//   row 3: 0.5 + 0.5 r(v) u on classes 2 and 3 (the broken classifier),
// with u, v ~ U[0,1), r(a) = 1 if a > 0.5 else -1, and don't-care classes
// drawing plain U[0,1) estimates. Deterministic per seed.
ThreeClassData gen_three_class(std::uint64_t seed);

struct GaussSplit {
  Dataset train;
  Dataset test;
};

// K unit-covariance 2D Gaussians with means drawn uniformly from [0, 20]^2;
// per_class_train training and per_class_test test points per class.
// Draw order: all means, then the training block, then the test block, so
// the training data is unaffected by the test size.
GaussSplit gen_gauss(const SynthConfig& cfg);

}  // namespace codeagg

#endif
