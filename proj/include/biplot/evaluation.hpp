#pragma once

#include <string>
#include <vector>

#include "biplot/alignment.hpp"
#include "biplot/types.hpp"

namespace biplot {

/// Five Procrustes-based comparison measures for one slice-vs-target pair.
/// Fit: PS (0 = identical) and CC (1 = identical). Bias: coordinate-wise
/// displacement statistics after optimal alignment, so RMSB >= AMB >= |MB|.
struct EvaluationRecord {
    std::string level;
    double PS = 0.0;
    double CC = 0.0;
    double AMB = 0.0;
    double MB = 0.0;
    double RMSB = 0.0;
};

struct EvaluationReport {
    std::vector<EvaluationRecord> records;  // one per level, in level order
};

/// Procrustes-align `config` onto `target` (reflection and scaling permitted),
/// then with A the aligned configuration and D = A - target flattened over all
/// 2m coordinates:
///   PS   = ||A - target||_F^2 / ||target - mean(target)||_F^2
///   CC   = <A_c, T_c> / (||A_c||_F ||T_c||_F)   (centered, flattened)
///   AMB  = mean|D|,  MB = mean(D),  RMSB = sqrt(mean(D^2))
EvaluationRecord evaluate_pair(const Config& config, const Config& target);

/// One record per aligned level against the alignment target (the consensus
/// or the supplied target), in level order.
EvaluationReport evaluate_series(const AlignmentResult& aligned);

/// Plain-text table: measures as rows, one "Target vs. <level>" column per
/// record, 4 decimal places.
std::string format_measures_table(const EvaluationReport& report);

/// CSV with header level,PS,CC,AMB,MB,RMSB at full precision.
std::string format_measures_csv(const EvaluationReport& report);

/// JSON array of {level, PS, CC, AMB, MB, RMSB} at full precision.
std::string format_measures_json(const EvaluationReport& report);

}  // namespace biplot
