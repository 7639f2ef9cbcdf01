#include "ramankit/methods.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace ramankit {

MethodKind method_kind_from_string(const std::string& name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "lra") return MethodKind::kLRA;
    if (lower == "l2d") return MethodKind::kL2D;
    if (lower == "lrp") return MethodKind::kLRP;
    if (lower == "pca") return MethodKind::kPCA;
    if (lower == "cnn") return MethodKind::kCNN;
    throw std::invalid_argument("unknown method '" + name +
                                "' (expected lra, l2d, lrp, pca or cnn)");
}

std::string method_kind_name(MethodKind kind) {
    switch (kind) {
        case MethodKind::kLRA: return "LRA";
        case MethodKind::kL2D: return "L2D";
        case MethodKind::kLRP: return "LRP";
        case MethodKind::kPCA: return "PCA";
        case MethodKind::kCNN: return "CNN";
    }
    return "?";
}

std::vector<MethodKind> all_method_kinds() {
    return {MethodKind::kLRA, MethodKind::kL2D, MethodKind::kLRP, MethodKind::kPCA,
            MethodKind::kCNN};
}

std::vector<double> tuning_grid(std::size_t steps) {
    if (steps < 2) throw std::invalid_argument("tuning_grid: need at least 2 steps");
    std::vector<double> grid(steps);
    for (std::size_t i = 0; i < steps; ++i)
        grid[i] = static_cast<double>(i) / static_cast<double>(steps - 1);
    return grid;
}

std::size_t pick_best(const std::vector<double>& grid, const std::vector<double>& accuracy) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (accuracy[i] > accuracy[best]) {
            best = i;
        } else if (accuracy[i] == accuracy[best] &&
                   std::abs(grid[i] - 0.5) < std::abs(grid[best] - 0.5)) {
            best = i;
        }
    }
    return best;
}

namespace {

void note_logistic(const LogisticFit& fit, MethodNotes* notes) {
    if (notes && !fit.converged)
        notes->warnings.push_back("logistic solver stopped at gradient norm " +
                                  std::to_string(fit.grad_norm) + " after " +
                                  std::to_string(fit.iterations) + " iterations");
}

bool class_counts_ok(const SpectraSet& s, std::size_t folds) {
    std::size_t n0 = 0, n1 = 0;
    for (int y : s.labels()) (y ? n1 : n0) += 1;
    return n0 >= 2 && n1 >= 2 && n0 + n1 >= folds;
}

// --- score model implementations -----------------------------------------

class LraScore : public ScoreModel {
public:
    explicit LraScore(LogisticModel m) : model_(std::move(m)) {}
    double score(std::span<const double> x) const override {
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= static_cast<double>(x.size());
        const double f[1] = {mean};
        return model_.score(f);
    }

private:
    LogisticModel model_;
};

class L2dScore : public ScoreModel {
public:
    explicit L2dScore(L2DModel m) : model_(std::move(m)) {}
    double score(std::span<const double> x) const override { return l2d_score(x, model_); }

private:
    L2DModel model_;
};

class LrpScore : public ScoreModel {
public:
    LrpScore(LogisticModel m, const WavenumberAxis& axis, const PoolingSpec& spec)
        : model_(std::move(m)), assignment_(pooling_assignment(axis, spec)),
          counts_(spec.boundaries.size() + 1, 0.0) {
        for (std::size_t b : assignment_) counts_[b] += 1.0;
    }

    double score(std::span<const double> x) const override {
        std::vector<double> f(counts_.size(), 0.0);
        for (std::size_t j = 0; j < x.size(); ++j) f[assignment_[j]] += x[j];
        for (std::size_t b = 0; b < f.size(); ++b) f[b] /= counts_[b];
        return model_.score(f);
    }

private:
    LogisticModel model_;
    std::vector<std::size_t> assignment_;
    std::vector<double> counts_;
};

class PcaScore : public ScoreModel {
public:
    PcaScore(PCABasis basis, LogisticModel m) : basis_(std::move(basis)), model_(std::move(m)) {}

    double score(std::span<const double> x) const override {
        const std::size_t p = basis_.column_means.size();
        std::vector<double> z(basis_.n_components(), 0.0);
        for (std::size_t k = 0; k < z.size(); ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < p; ++j)
                acc += (x[j] - basis_.column_means[j]) * basis_.components.at(j, k);
            z[k] = acc;
        }
        return model_.score(z);
    }

private:
    PCABasis basis_;
    LogisticModel model_;
};

class CnnScore : public ScoreModel {
public:
    explicit CnnScore(CNNModel m) : model_(std::move(m)) {}
    double score(std::span<const double> x) const override { return forward_eval(model_, x); }

private:
    CNNModel model_;
};

// --- inner tuning ----------------------------------------------------------

double tune_tau(const SpectraSet& train, const MethodOptions& opts, Rng rng,
                MethodNotes* notes) {
    if (!class_counts_ok(train, opts.inner_folds)) {
        if (notes) notes->warnings.push_back("tau tuning skipped (too few samples); tau=0.5");
        return 0.5;
    }
    const std::vector<double> grid = tuning_grid(opts.grid_steps);
    std::vector<double> accuracy(grid.size(), 0.0);
    const FoldPlan plan = make_folds(train.labels(), opts.inner_folds, rng.next_u64());

    for (std::size_t f = 0; f < plan.k; ++f) {
        std::vector<std::size_t> tr, te;
        for (std::size_t i = 0; i < plan.assignments.size(); ++i)
            (plan.assignments[i] == f ? te : tr).push_back(i);
        const SpectraSet inner_train = train.take_rows(tr);
        const SpectraSet inner_test = train.take_rows(te);
        const L2DModel m = fit_l2d(inner_train);

        for (std::size_t i = 0; i < inner_test.n_rows(); ++i) {
            const auto [d1, d2] = l2d_distances(inner_test.row(i), m);
            const int y = inner_test.labels()[i];
            for (std::size_t g = 0; g < grid.size(); ++g) {
                const int pred = grid[g] * d1 <= (1.0 - grid[g]) * d2 ? 1 : 0;
                if (pred == y) accuracy[g] += 1.0;
            }
        }
    }
    const std::size_t best = pick_best(grid, accuracy);
    if (notes) notes->tuned.emplace_back("tau", grid[best]);
    return grid[best];
}

double tune_lambda(const SpectraSet& train, const MethodOptions& opts, Rng rng,
                   MethodNotes* notes) {
    if (!class_counts_ok(train, opts.inner_folds) ||
        train.n_rows() < 2 * (opts.pca_components + 1)) {
        if (notes) notes->warnings.push_back("lambda tuning skipped (too few samples); lambda=0.5");
        return 0.5;
    }
    const std::vector<double> grid = tuning_grid(opts.grid_steps);
    std::vector<double> accuracy(grid.size(), 0.0);
    const FoldPlan plan = make_folds(train.labels(), opts.inner_folds, rng.next_u64());

    for (std::size_t f = 0; f < plan.k; ++f) {
        std::vector<std::size_t> tr, te;
        for (std::size_t i = 0; i < plan.assignments.size(); ++i)
            (plan.assignments[i] == f ? te : tr).push_back(i);
        const SpectraSet inner_train = train.take_rows(tr);
        const SpectraSet inner_test = train.take_rows(te);

        const PCABasis basis = fit_pca(inner_train, opts.pca_components);
        const Matrix z_train = project(inner_train, basis);
        const LogisticFit fit = fit_logistic(z_train, inner_train.labels(), opts.shrinkage);
        const Matrix z_test = project(inner_test, basis);

        for (std::size_t i = 0; i < inner_test.n_rows(); ++i) {
            const double prob = fit.model.score(z_test.row(i));
            const int y = inner_test.labels()[i];
            for (std::size_t g = 0; g < grid.size(); ++g)
                if ((prob >= grid[g] ? 1 : 0) == y) accuracy[g] += 1.0;
        }
    }
    const std::size_t best = pick_best(grid, accuracy);
    if (notes) notes->tuned.emplace_back("lambda", grid[best]);
    return grid[best];
}

}  // namespace

Method make_method(MethodKind kind, const MethodOptions& opts, const std::string& region_name) {
    Method method;
    method.name = method_kind_name(kind);

    switch (kind) {
        case MethodKind::kLRA:
            method.fit = [opts](const SpectraSet& train, Rng, MethodNotes* notes) {
                const Matrix f = lra_features(train);
                LogisticFit fit = fit_logistic(f, train.labels(), opts.shrinkage);
                note_logistic(fit, notes);
                return std::unique_ptr<ScoreModel>(new LraScore(std::move(fit.model)));
            };
            break;

        case MethodKind::kL2D:
            method.fit = [opts](const SpectraSet& train, Rng rng, MethodNotes* notes) {
                L2DModel m = fit_l2d(train);
                m.tau = tune_tau(train, opts, rng.split(1), notes);
                return std::unique_ptr<ScoreModel>(new L2dScore(std::move(m)));
            };
            break;

        case MethodKind::kLRP: {
            PoolingSpec spec = opts.pooling;
            if (spec.boundaries.empty()) spec = default_pooling(region_name);
            method.fit = [opts, spec](const SpectraSet& train, Rng, MethodNotes* notes) {
                const Matrix f = pool_features(train, spec);
                LogisticFit fit = fit_logistic(f, train.labels(), opts.shrinkage);
                note_logistic(fit, notes);
                return std::unique_ptr<ScoreModel>(
                    new LrpScore(std::move(fit.model), train.axis(), spec));
            };
            break;
        }

        case MethodKind::kPCA:
            method.fit = [opts](const SpectraSet& train, Rng rng, MethodNotes* notes) {
                PCABasis basis = fit_pca(train, opts.pca_components);
                const Matrix z = project(train, basis);
                LogisticFit fit = fit_logistic(z, train.labels(), opts.shrinkage);
                note_logistic(fit, notes);
                tune_lambda(train, opts, rng.split(2), notes);
                return std::unique_ptr<ScoreModel>(
                    new PcaScore(std::move(basis), std::move(fit.model)));
            };
            break;

        case MethodKind::kCNN:
            method.fit = [opts](const SpectraSet& train, Rng rng, MethodNotes* notes) {
                TrainConfig cfg = opts.cnn_train;
                cfg.seed = rng.next_u64();
                TrainedCNN trained = train_cnn(opts.cnn_arch, train, cfg);
                if (notes) {
                    notes->tuned.emplace_back("epochs_run",
                                              static_cast<double>(trained.trace.size()));
                    if (!trained.trace.empty())
                        notes->tuned.emplace_back("final_train_loss",
                                                  trained.trace.back().train_loss);
                }
                return std::unique_ptr<ScoreModel>(new CnnScore(std::move(trained.model)));
            };
            break;
    }
    return method;
}

}  // namespace ramankit
