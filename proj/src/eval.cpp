#include "ramankit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ramankit {

FoldPlan make_folds(const std::vector<int>& labels, std::size_t k, std::uint64_t seed) {
    const std::size_t n = labels.size();
    if (k < 2) throw std::invalid_argument("make_folds: k must be >= 2");
    if (n < k)
        throw std::invalid_argument("make_folds: n=" + std::to_string(n) + " smaller than k=" +
                                    std::to_string(k));

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignments.assign(n, 0);

    Rng rng(seed);
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < n; ++i) (labels[i] ? pos : neg).push_back(i);
    rng.shuffle(pos);
    rng.shuffle(neg);

    // Round-robin per class; the negative class fills folds in reverse order
    // so the two classes' remainders land on different folds and total fold
    // sizes stay within one of each other.
    for (std::size_t i = 0; i < pos.size(); ++i) plan.assignments[pos[i]] = i % k;
    for (std::size_t i = 0; i < neg.size(); ++i) plan.assignments[neg[i]] = k - 1 - (i % k);
    return plan;
}

RocCurve roc_auc(std::span<const double> scores, const std::vector<int>& labels) {
    const std::size_t n = scores.size();
    if (labels.size() != n) throw std::invalid_argument("roc_auc: size mismatch");
    std::size_t n1 = 0, n0 = 0;
    for (int y : labels) (y ? n1 : n0) += 1;
    if (n1 == 0 || n0 == 0)
        throw std::invalid_argument("roc_auc: both classes must be present");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Mann-Whitney with midranks for ties.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t)
            if (labels[order[t]]) rank_sum_pos += midrank;
        i = j + 1;
    }
    RocCurve out;
    out.auc = (rank_sum_pos - static_cast<double>(n1) * (static_cast<double>(n1) + 1.0) / 2.0) /
              (static_cast<double>(n1) * static_cast<double>(n0));

    // Threshold sweep from the highest score down; tied scores move together.
    out.points.emplace_back(0.0, 0.0);
    std::size_t tp = 0, fp = 0;
    std::size_t r = n;
    while (r > 0) {
        std::size_t q = r;
        while (q > 1 && scores[order[q - 2]] == scores[order[r - 1]]) --q;
        for (std::size_t t = q; t <= r; ++t)
            (labels[order[t - 1]] ? tp : fp) += 1;
        out.points.emplace_back(static_cast<double>(fp) / static_cast<double>(n0),
                                static_cast<double>(tp) / static_cast<double>(n1));
        r = q - 1;
    }
    return out;
}

double trapezoid_area(const std::vector<std::pair<double, double>>& points) {
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const auto& [x0, y0] = points[i];
        const auto& [x1, y1] = points[i + 1];
        area += (x1 - x0) * (y0 + y1) / 2.0;
    }
    return area;
}

EvalReport cross_validate(const Method& method, const SpectraSet& data, const FoldPlan& plan,
                          const CrossValidateOptions& opts) {
    if (plan.assignments.size() != data.n_rows())
        throw std::invalid_argument("cross_validate: plan does not match data");
    const std::size_t k = plan.k;

    EvalReport report;
    report.method = method.name;
    report.comparison = data.sample_names()[0] + " vs. " + data.sample_names()[1];
    report.per_fold_auc.assign(k, 0.0);
    report.roc_points.resize(k);
    std::vector<MethodNotes> fold_notes(k);
    std::vector<std::exception_ptr> errors(k);

    const Rng master(opts.seed);
    auto run_fold = [&](std::size_t f) {
        try {
            std::vector<std::size_t> train_idx, test_idx;
            for (std::size_t i = 0; i < plan.assignments.size(); ++i)
                (plan.assignments[i] == f ? test_idx : train_idx).push_back(i);

            const SpectraSet train = data.take_rows(train_idx);
            const SpectraSet test = data.take_rows(test_idx);
            auto has_both = [](const SpectraSet& s) {
                bool a = false, b = false;
                for (int y : s.labels()) (y ? a : b) = true;
                return a && b;
            };
            if (!has_both(train) || !has_both(test))
                throw std::runtime_error("cross_validate: fold " + std::to_string(f) +
                                         " is missing a class");

            auto model = method.fit(train, master.split(f), &fold_notes[f]);
            std::vector<double> scores(test.n_rows());
            for (std::size_t i = 0; i < test.n_rows(); ++i) scores[i] = model->score(test.row(i));

            RocCurve roc = roc_auc(scores, test.labels());
            report.per_fold_auc[f] = roc.auc;
            report.roc_points[f] = std::move(roc.points);
        } catch (...) {
            errors[f] = std::current_exception();
        }
    };

    unsigned n_threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(k));
    if (n_threads <= 1) {
        for (std::size_t f = 0; f < k; ++f) run_fold(f);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t f = t; f < k; f += n_threads) run_fold(f);
            });
        for (auto& th : pool) th.join();
    }
    for (std::size_t f = 0; f < k; ++f)
        if (errors[f]) std::rethrow_exception(errors[f]);

    double mean = 0.0;
    for (double a : report.per_fold_auc) mean += a;
    mean /= static_cast<double>(k);
    double ss = 0.0;
    for (double a : report.per_fold_auc) ss += (a - mean) * (a - mean);
    report.mean_auc = mean;
    report.sem = std::sqrt(ss / static_cast<double>(k - 1)) / std::sqrt(static_cast<double>(k));

    for (std::size_t f = 0; f < k; ++f) {
        for (const auto& w : fold_notes[f].warnings)
            report.warnings.push_back("fold" + std::to_string(f) + ": " + w);
        for (const auto& [name, value] : fold_notes[f].tuned)
            report.tuned.emplace_back("fold" + std::to_string(f) + ":" + name, value);
    }
    return report;
}

namespace {

std::string format_auc(double v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

SummaryTable summary_table(const std::vector<EvalReport>& reports) {
    SummaryTable t;
    t.columns = {"LRA", "L2D", "LRP", "PCA", "CNN"};

    auto col_of = [&](const std::string& m) -> std::ptrdiff_t {
        for (std::size_t c = 0; c < t.columns.size(); ++c)
            if (t.columns[c] == m) return static_cast<std::ptrdiff_t>(c);
        return -1;
    };

    for (const auto& r : reports) {
        const std::string label = r.comparison + " " + r.region;
        std::size_t row = 0;
        for (; row < t.row_labels.size(); ++row)
            if (t.row_labels[row] == label) break;
        if (row == t.row_labels.size()) {
            t.row_labels.push_back(label);
            t.cells.emplace_back(t.columns.size());
        }
        const std::ptrdiff_t col = col_of(r.method);
        if (col >= 0) t.cells[row][static_cast<std::size_t>(col)] = format_auc(r.mean_auc);
    }
    return t;
}

std::string summary_to_csv(const SummaryTable& t) {
    std::ostringstream out;
    out << "comparison";
    for (const auto& c : t.columns) out << ',' << c;
    out << '\n';
    for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
        out << t.row_labels[r];
        for (const auto& cell : t.cells[r]) out << ',' << cell;
        out << '\n';
    }
    return out.str();
}

std::string summary_to_text(const SummaryTable& t) {
    std::size_t label_w = 10;
    for (const auto& l : t.row_labels) label_w = std::max(label_w, l.size());
    std::ostringstream out;
    out << std::string(label_w, ' ');
    for (const auto& c : t.columns) {
        out << "  ";
        out << std::string(c.size() < 5 ? 5 - c.size() : 0, ' ') << c;
    }
    out << '\n';
    for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
        out << t.row_labels[r] << std::string(label_w - t.row_labels[r].size(), ' ');
        for (const auto& cell : t.cells[r]) {
            out << "  ";
            out << std::string(cell.size() < 5 ? 5 - cell.size() : 0, ' ') << cell;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace ramankit
