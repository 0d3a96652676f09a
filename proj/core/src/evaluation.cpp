#include "tgemb/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace tgemb {

double auc(const std::vector<ScoredExample>& examples) {
    std::size_t pos = 0, neg = 0;
    for (const auto& ex : examples) {
        if (!std::isfinite(ex.score)) throw std::invalid_argument("auc: non-finite score");
        if (ex.label != 0 && ex.label != 1)
            throw std::invalid_argument("auc: labels must be 0 or 1");
        (ex.label == 1 ? pos : neg) += 1;
    }
    if (pos == 0 || neg == 0)
        throw std::invalid_argument("auc: need at least one positive and one negative");

    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return examples[a].score < examples[b].score;
    });

    // midrank ties: tied scores share the average of their rank range
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && examples[order[j]].score == examples[order[i]].score) ++j;
        double rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1 .. j
        for (std::size_t k = i; k < j; ++k)
            if (examples[order[k]].label == 1) pos_rank_sum += rank;
        i = j;
    }
    double n_pos = static_cast<double>(pos), n_neg = static_cast<double>(neg);
    return (pos_rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

namespace {

struct Counts {
    std::vector<double> tp, fp, fn;
};

Counts confusion(const std::vector<int>& predictions, const std::vector<int>& labels,
                 int num_classes) {
    if (predictions.empty()) throw std::invalid_argument("f1: empty input");
    if (predictions.size() != labels.size())
        throw std::invalid_argument("f1: prediction/label size mismatch");
    Counts c;
    c.tp.assign(num_classes, 0.0);
    c.fp.assign(num_classes, 0.0);
    c.fn.assign(num_classes, 0.0);
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        int p = predictions[i], l = labels[i];
        if (p < 0 || p >= num_classes || l < 0 || l >= num_classes)
            throw std::invalid_argument("f1: class index out of range");
        if (p == l) {
            c.tp[p] += 1.0;
        } else {
            c.fp[p] += 1.0;
            c.fn[l] += 1.0;
        }
    }
    return c;
}

}  // namespace

double micro_f1(const std::vector<int>& predictions, const std::vector<int>& labels,
                int num_classes) {
    Counts c = confusion(predictions, labels, num_classes);
    double tp = 0.0, fp = 0.0, fn = 0.0;
    for (int k = 0; k < num_classes; ++k) {
        tp += c.tp[k];
        fp += c.fp[k];
        fn += c.fn[k];
    }
    double denom = 2.0 * tp + fp + fn;
    return denom == 0.0 ? 0.0 : 2.0 * tp / denom;
}

double macro_f1(const std::vector<int>& predictions, const std::vector<int>& labels,
                int num_classes) {
    Counts c = confusion(predictions, labels, num_classes);
    double sum = 0.0;
    for (int k = 0; k < num_classes; ++k) {
        double denom = 2.0 * c.tp[k] + c.fp[k] + c.fn[k];
        // a class absent from predictions and labels contributes 0
        sum += denom == 0.0 ? 0.0 : 2.0 * c.tp[k] / denom;
    }
    return sum / static_cast<double>(num_classes);
}

double multiclass_auc(const std::vector<std::vector<double>>& probabilities,
                      const std::vector<int>& labels, int num_classes) {
    if (probabilities.empty()) throw std::invalid_argument("multiclass_auc: empty input");
    if (probabilities.size() != labels.size())
        throw std::invalid_argument("multiclass_auc: probability/label size mismatch");
    for (const auto& p : probabilities)
        if (static_cast<int>(p.size()) != num_classes)
            throw std::invalid_argument("multiclass_auc: probability vector has wrong length");

    double sum = 0.0;
    int used = 0;
    for (int k = 0; k < num_classes; ++k) {
        bool any_pos = false;
        for (int l : labels) any_pos |= (l == k);
        if (!any_pos) {
            std::cerr << "multiclass_auc: class " << k << " has no positives, skipping\n";
            continue;
        }
        std::vector<ScoredExample> ovr(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i)
            ovr[i] = {probabilities[i][static_cast<std::size_t>(k)], labels[i] == k ? 1 : 0};
        sum += auc(ovr);  // throws when the class has no negatives
        ++used;
    }
    if (used == 0) throw std::invalid_argument("multiclass_auc: no scoreable class");
    return sum / static_cast<double>(used);
}

}  // namespace tgemb
