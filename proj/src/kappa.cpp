#include "metaseg/kappa.hpp"

#include <algorithm>
#include <sstream>

#include "metaseg/errors.hpp"

namespace metaseg {

double weighted_kappa(const ConfusionMatrix& cm, KappaWeights weights) {
    if (cm.k < 2) throw ParameterError("kappa needs >= 2 classes");
    const double total = static_cast<double>(cm.total());
    if (total < 1.0) throw ParameterError("kappa needs >= 1 observation");

    std::vector<double> row_sum(cm.k, 0.0), col_sum(cm.k, 0.0);
    for (int i = 0; i < cm.k; ++i)
        for (int j = 0; j < cm.k; ++j) {
            row_sum[i] += static_cast<double>(cm.at(i, j));
            col_sum[j] += static_cast<double>(cm.at(i, j));
        }

    const double denom = static_cast<double>(cm.k - 1);
    auto weight = [&](int i, int j) {
        const double d = std::abs(i - j) / denom;
        return weights == KappaWeights::quadratic ? d * d : d;
    };

    double wo = 0.0, we = 0.0;
    for (int i = 0; i < cm.k; ++i) {
        for (int j = 0; j < cm.k; ++j) {
            const double w = weight(i, j);
            wo += w * (static_cast<double>(cm.at(i, j)) / total);
            we += w * (row_sum[i] / total) * (col_sum[j] / total);
        }
    }
    if (we == 0.0) return 1.0; // single-class perfect agreement
    return 1.0 - wo / we;
}

PatientScore score_patients(const std::map<std::string, PNStage>& pred,
                            const std::map<std::string, PNStage>& truth) {
    std::string missing, extra;
    for (const auto& [id, _] : truth)
        if (!pred.count(id)) missing += (missing.empty() ? "" : " ") + id;
    for (const auto& [id, _] : pred)
        if (!truth.count(id)) extra += (extra.empty() ? "" : " ") + id;
    if (!missing.empty() || !extra.empty())
        throw ParameterError("patient key mismatch; missing predictions: [" + missing +
                             "] unmatched predictions: [" + extra + "]");

    PatientScore s;
    s.cm = ConfusionMatrix(5, {"pN0", "pN0(i+)", "pN1mi", "pN1", "pN2"});
    for (const auto& [id, t] : truth)
        s.cm.add(static_cast<int>(t), static_cast<int>(pred.at(id)));
    s.kappa = weighted_kappa(s.cm);
    return s;
}

std::string format_matrix(const ConfusionMatrix& cm) {
    std::vector<std::string> names = cm.class_names;
    if (static_cast<int>(names.size()) != cm.k) {
        names.clear();
        for (int i = 0; i < cm.k; ++i) names.push_back("c" + std::to_string(i));
    }
    size_t name_w = 10;
    for (const auto& n : names) name_w = std::max(name_w, n.size() + 1);
    size_t cell_w = 7;
    for (const auto& n : names) cell_w = std::max(cell_w, n.size() + 1);

    std::ostringstream out;
    out << std::string(name_w, ' ');
    for (const auto& n : names) {
        out << std::string(cell_w - n.size(), ' ') << n;
    }
    out << "  (rows=truth, cols=prediction)\n";
    for (int i = 0; i < cm.k; ++i) {
        out << names[i] << std::string(name_w - names[i].size(), ' ');
        for (int j = 0; j < cm.k; ++j) {
            const std::string v = std::to_string(cm.at(i, j));
            out << std::string(cell_w - v.size(), ' ') << v;
        }
        out << '\n';
    }
    return out.str();
}

} // namespace metaseg
