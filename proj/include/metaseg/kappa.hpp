#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "metaseg/staging.hpp"

namespace metaseg {

// k x k contingency table: rows = truth, columns = prediction.
struct ConfusionMatrix {
    int k = 0;
    std::vector<uint64_t> counts; // k*k, row-major
    std::vector<std::string> class_names;

    ConfusionMatrix() = default;
    ConfusionMatrix(int k_, std::vector<std::string> names = {})
        : k(k_), counts(static_cast<size_t>(k_) * k_, 0), class_names(std::move(names)) {}

    uint64_t& at(int truth, int pred) { return counts[static_cast<size_t>(truth) * k + pred]; }
    uint64_t at(int truth, int pred) const { return counts[static_cast<size_t>(truth) * k + pred]; }
    void add(int truth, int pred) { ++at(truth, pred); }

    uint64_t total() const {
        uint64_t t = 0;
        for (uint64_t c : counts) t += c;
        return t;
    }
};

enum class KappaWeights {
    quadratic, // (i-j)^2 / (k-1)^2 — the challenge convention
    linear,    // |i-j| / (k-1)
};

// Cohen's weighted kappa. Degenerate case (all mass in one diagonal cell,
// so expected weighted disagreement is zero) returns 1.0 by convention.
double weighted_kappa(const ConfusionMatrix& cm,
                      KappaWeights weights = KappaWeights::quadratic);

struct PatientScore {
    double kappa = 0.0;
    ConfusionMatrix cm; // 5x5 in pN ordinal order
};

// Builds the 5-stage confusion matrix and applies quadratic-weighted kappa.
// Throws ParameterError listing missing/extra patients on key mismatch.
PatientScore score_patients(const std::map<std::string, PNStage>& pred,
                            const std::map<std::string, PNStage>& truth);

// Aligned text rendering used by reports.
std::string format_matrix(const ConfusionMatrix& cm);

} // namespace metaseg
