#pragma once

#include <string>
#include <vector>

#include "ramankit/cnn.hpp"
#include "ramankit/eval.hpp"
#include "ramankit/linear_models.hpp"

namespace ramankit {

enum class MethodKind { kLRA, kL2D, kLRP, kPCA, kCNN };

MethodKind method_kind_from_string(const std::string& name);
std::string method_kind_name(MethodKind kind);
std::vector<MethodKind> all_method_kinds();

struct MethodOptions {
    double shrinkage = 1.0;
    std::size_t pca_components = 5;
    PoolingSpec pooling;          // empty boundaries = region default
    std::size_t inner_folds = 10; // nested folds for tau / lambda tuning
    std::size_t grid_steps = 101; // {0, 0.01, ..., 1}
    CNNArch cnn_arch;
    TrainConfig cnn_train;
};

/// Builds the fit/score wrapper cross_validate consumes. `region_name`
/// selects the default pooling cuts for LRP.
Method make_method(MethodKind kind, const MethodOptions& opts, const std::string& region_name);

/// Grid values {0, 1/(steps-1), ..., 1}.
std::vector<double> tuning_grid(std::size_t steps);

/// Picks the grid value with the best mean inner-fold accuracy; ties go to
/// the value closest to 0.5 (first such value on further ties).
std::size_t pick_best(const std::vector<double>& grid, const std::vector<double>& accuracy);

}  // namespace ramankit
