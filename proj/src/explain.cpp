#include "ramankit/explain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ramankit/eval.hpp"
#include "ramankit/rng.hpp"

namespace ramankit {

ImportanceReport permutation_importance(const LogisticModel& model, const Matrix& features,
                                        const std::vector<int>& labels,
                                        const std::vector<std::string>& feature_labels,
                                        int n_perm, std::uint64_t seed) {
    const std::size_t n = features.rows;
    const std::size_t f = features.cols;
    if (f == 0) throw std::invalid_argument("permutation_importance: no features");
    if (n_perm < 2) throw std::invalid_argument("permutation_importance: n_perm must be >= 2");
    if (feature_labels.size() != f)
        throw std::invalid_argument("permutation_importance: label list does not match features");

    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) scores[i] = model.score(features.row(i));
    const double baseline = roc_auc(scores, labels).auc;

    ImportanceReport report;
    report.baseline_auc = baseline;
    report.n_permutations = n_perm;

    const Rng root(seed);
    Matrix work = features;
    for (std::size_t j = 0; j < f; ++j) {
        std::vector<double> column(n);
        for (std::size_t i = 0; i < n; ++i) column[i] = features.at(i, j);

        std::vector<double> perm_aucs(static_cast<std::size_t>(n_perm));
        for (int r = 0; r < n_perm; ++r) {
            Rng rng = root.split(j * static_cast<std::size_t>(n_perm) + static_cast<std::size_t>(r));
            std::vector<double> shuffled = column;
            rng.shuffle(shuffled);
            for (std::size_t i = 0; i < n; ++i) work.at(i, j) = shuffled[i];
            for (std::size_t i = 0; i < n; ++i) scores[i] = model.score(work.row(i));
            perm_aucs[static_cast<std::size_t>(r)] = roc_auc(scores, labels).auc;
        }
        for (std::size_t i = 0; i < n; ++i) work.at(i, j) = column[i];  // restore

        double mean = 0.0;
        for (double a : perm_aucs) mean += a;
        mean /= static_cast<double>(n_perm);
        double ss = 0.0;
        for (double a : perm_aucs) ss += (a - mean) * (a - mean);
        const double sd = std::sqrt(ss / static_cast<double>(n_perm - 1));

        ImportanceEntry e;
        e.label = feature_labels[j];
        e.importance = baseline - mean;
        e.mean_permuted_auc = mean;
        e.half_width = 1.96 * sd / std::sqrt(static_cast<double>(n_perm));
        report.features.push_back(std::move(e));
    }
    return report;
}

std::vector<double> ecdf_values(const std::vector<double>& values) {
    const std::size_t m = values.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> out(m, 0.0);
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i;
        while (j + 1 < m && values[order[j + 1]] == values[order[i]]) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) out[order[t]] = midrank / static_cast<double>(m);
        i = j + 1;
    }
    return out;
}

SaliencyMap saliency_map(const CNNModel& model, const SpectraSet& test, ECDFScope scope) {
    const std::size_t n = test.n_rows();
    const std::size_t p = test.n_cols();
    if (n == 0) throw std::invalid_argument("saliency_map: empty test set");

    // Score derivatives, one row per test spectrum.
    Matrix deriv(n, p);
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double> g = output_input_gradient(model, test.row(i));
        std::copy(g.begin(), g.end(), deriv.row(i).begin());
    }

    Matrix mapped(n, p);
    if (scope == ECDFScope::kPooled) {
        const std::vector<double> flat_ecdf = ecdf_values(deriv.data);
        mapped.data = flat_ecdf;
    } else {
        std::vector<double> column(n);
        for (std::size_t j = 0; j < p; ++j) {
            for (std::size_t i = 0; i < n; ++i) column[i] = deriv.at(i, j);
            const std::vector<double> e = ecdf_values(column);
            for (std::size_t i = 0; i < n; ++i) mapped.at(i, j) = e[i];
        }
    }

    SaliencyMap map;
    map.wavenumbers = test.axis().values;
    map.mean.assign(p, 0.0);
    map.half_width.assign(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += mapped.at(i, j);
        mean /= static_cast<double>(n);
        map.mean[j] = mean;
        if (n >= 2) {
            double ss = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = mapped.at(i, j) - mean;
                ss += d * d;
            }
            const double sd = std::sqrt(ss / static_cast<double>(n - 1));
            map.half_width[j] = 1.96 * sd / std::sqrt(static_cast<double>(n));
        }
    }
    return map;
}

}  // namespace ramankit
