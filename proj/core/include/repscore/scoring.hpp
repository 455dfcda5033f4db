#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "repscore/segment.hpp"

namespace repscore {

/// One unordered region comparison.
struct PairScore {
    std::size_t idx_a = 0;
    std::size_t idx_b = 0;  // idx_a < idx_b
    double fp_distance = 1.0;   // E in [0,1]
    double correlation = 0.0;   // C in [-1,1]
    double combined = 0.0;      // S in [0,1]
    double mean_energy = 0.0;   // mean of the two regions' mean_energy
    double a_start = 0.0, a_end = 0.0;
    double b_start = 0.0, b_end = 0.0;
};

/// Piecewise-linear confidence that a fingerprint distance E marks a
/// repetition: 1 below 0.3, 0 above 0.45, linear between.
double f1(double fp_distance);

/// Confidence from the correlation measure: 0 below 0.25, 1 above 0.55,
/// linear between.
double f2(double correlation);

/// S(E, C) = sqrt(f1(E) * f2(C)).
double pair_score(double fp_distance, double correlation);

struct RepetitionResult {
    double score = 0.0;                 // mean of nonzero S among the top 5%
    std::vector<PairScore> top_pairs;   // the top ceil(5%) pairs, best first
    std::vector<PairScore> contributors;  // the nonzero-S subset of top_pairs
};

/// Top K = ceil(0.05 * pair_count) pairs by S (ties by E ascending, then
/// indices); score is the mean of the nonzero ones.
RepetitionResult repetition_score(const std::vector<PairScore>& pairs);

/// Mean of the contributors' mean_energy; 0 when there are none.
double intensity_score(const std::vector<PairScore>& contributors);

struct ConflictReport {
    std::string file_id;
    double repetition_score = 0.0;
    double intensity_score = 0.0;
    double conflict_score = 0.0;  // product of the two, exact
    std::vector<PairScore> top_pairs;
    std::size_t region_count = 0;
    std::size_t pair_count = 0;
    std::string error;  // nonempty when the pipeline failed on this file

    static constexpr int kSchemaVersion = 1;
};

ConflictReport conflict_score(const std::vector<PairScore>& pairs, std::size_t region_count,
                              const std::string& file_id);

std::string report_to_json(const ConflictReport& report);
ConflictReport report_from_json(const std::string& json_text);

}  // namespace repscore
