#pragma once

#include <span>
#include <string>
#include <vector>

#include "ctxattn/cross_validation.hpp"
#include "ctxattn/metrics.hpp"

namespace ctxattn::io {

/// {"per_fold": [...], "mean_weighted_f1", "pooled_weighted_f1",
///  "confusion", "labels"}. Contains no timing or host data, so identical
/// runs give identical bytes.
std::string cv_report_json(const train::CvReport& report);
std::string cv_report_text(const train::CvReport& report);

std::string metrics_json(const train::MetricsReport& metrics, std::span<const std::string> label_names);
std::string metrics_text(const train::MetricsReport& metrics, std::span<const std::string> label_names);

std::string training_log_json(const train::FittedModel& fitted, const train::TrainConfig& config);

}  // namespace ctxattn::io
