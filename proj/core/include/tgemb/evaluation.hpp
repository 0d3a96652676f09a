#pragma once

#include <cstdint>
#include <vector>

namespace tgemb {

struct ScoredExample {
    double score = 0.0;
    int label = 0;
};

// Rank-based (Mann-Whitney) AUC with ties counting 1/2. Needs at least one
// positive and one negative label.
double auc(const std::vector<ScoredExample>& examples);

// predictions are argmax class indices against ground-truth labels, both in
// [0, num_classes). Macro averages per-class F1 with absent classes
// contributing 0; micro pools the counts (single-label micro-F1 = accuracy).
double micro_f1(const std::vector<int>& predictions, const std::vector<int>& labels,
                int num_classes);
double macro_f1(const std::vector<int>& predictions, const std::vector<int>& labels,
                int num_classes);

// Macro one-vs-rest AUC over per-class probability vectors; classes without
// positives are skipped with a warning.
double multiclass_auc(const std::vector<std::vector<double>>& probabilities,
                      const std::vector<int>& labels, int num_classes);

}  // namespace tgemb
