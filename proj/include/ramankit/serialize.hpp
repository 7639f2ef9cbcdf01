#pragma once

#include <filesystem>
#include <string>

#include "ramankit/cnn.hpp"
#include "ramankit/eval.hpp"
#include "ramankit/explain.hpp"
#include "ramankit/linear_models.hpp"

namespace ramankit {

// JSON round-trips for trained models (kind tag + parameter arrays + config
// echo). Matrices are stored row-major.
std::string logistic_to_json(const LogisticModel& m);
LogisticModel logistic_from_json(const std::string& text);

std::string l2d_to_json(const L2DModel& m);
L2DModel l2d_from_json(const std::string& text);

std::string pca_to_json(const PCABasis& b);
PCABasis pca_from_json(const std::string& text);

std::string cnn_to_json(const CNNModel& m);
CNNModel cnn_from_json(const std::string& text);

std::string eval_report_to_json(const EvalReport& r);

// CSV emitters for plot-ready artifacts.
std::string roc_to_csv(const EvalReport& r);                       // fold,fpr,tpr
std::string importance_to_csv(const ImportanceReport& r);          // band,importance,...
std::string saliency_to_csv(const SaliencyMap& m);                 // wavenumber,mean,half_width
std::string cnn_trace_to_csv(const std::vector<EpochStats>& trace);  // epoch,train,val

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace ramankit
