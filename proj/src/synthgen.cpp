#include "codeagg/synthgen.hpp"

#include "codeagg/errors.hpp"
#include "codeagg/rng.hpp"

namespace codeagg {

ThreeClassData gen_three_class(std::uint64_t seed) {
  constexpr int kPerClass = 100;
  constexpr int kTotal = 3 * kPerClass;
  Rng rng(seed);

  Eigen::MatrixXd q(kTotal, 3);
  std::vector<int> labels(kTotal);
  for (int i = 0; i < kTotal; ++i) {
    const int cls = i / kPerClass + 1;
    labels[i] = cls;
    for (int j = 0; j < 3; ++j) {
      const double u = rng.uniform();
      double value = u;  // don't-care classes keep the raw uniform
      if (j == 0) {
        if (cls == 1) value = 0.9 + 0.1 * u;
        if (cls == 2) value = 0.1 + 0.1 * u;
      } else if (j == 1) {
        if (cls == 1) value = 0.6 + 0.4 * u;
        if (cls == 3) value = 0.1 + 0.1 * u;
      } else {
        if (cls == 2 || cls == 3) {
          const double v = rng.uniform();
          value = 0.5 + 0.5 * (v > 0.5 ? 1.0 : -1.0) * u;
        }
      }
      q(i, j) = value;
    }
  }
  return ThreeClassData{ProbMatrix(std::move(q)), std::move(labels),
                        gen_allpairs(3)};
}

GaussSplit gen_gauss(const SynthConfig& cfg) {
  if (cfg.num_classes < 3) {
    throw Error("invalid-class-count", "need at least 3 classes");
  }
  if (cfg.per_class_train < 1 || cfg.per_class_test < 1) {
    throw Error("invalid-config", "per-class sample counts must be positive");
  }
  const int K = cfg.num_classes;
  Rng rng(cfg.seed);

  Eigen::MatrixXd means(K, 2);
  for (int k = 0; k < K; ++k) {
    means(k, 0) = rng.uniform(0.0, 20.0);
    means(k, 1) = rng.uniform(0.0, 20.0);
  }

  const auto sample_block = [&](int per_class) {
    Dataset data;
    data.num_classes = K;
    data.features.resize(static_cast<Eigen::Index>(K) * per_class, 2);
    data.labels.reserve(static_cast<std::size_t>(K) * per_class);
    Eigen::Index row = 0;
    for (int k = 0; k < K; ++k) {
      for (int i = 0; i < per_class; ++i, ++row) {
        data.features(row, 0) = means(k, 0) + rng.normal();
        data.features(row, 1) = means(k, 1) + rng.normal();
        data.labels.push_back(k + 1);
      }
    }
    return data;
  };

  GaussSplit split;
  split.train = sample_block(cfg.per_class_train);
  split.test = sample_block(cfg.per_class_test);
  return split;
}

}  // namespace codeagg
