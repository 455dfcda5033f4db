#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "repscore/audio.hpp"
#include "repscore/features.hpp"
#include "repscore/svm.hpp"

namespace repscore {

/// Speech/non-speech classifier: z-score normalization + RBF SVM.
struct VadModel {
    SvmModel svm;
    std::array<double, kNumFeatures> feature_means{};
    std::array<double, kNumFeatures> feature_stds{};

    static constexpr int kFormatVersion = 1;
};

struct VadTrainOptions {
    double box_c = 10.0;
    double gamma = 0.1;
    uint64_t seed = 1;  // fold shuffling only; training itself is deterministic
};

/// labels[i]: true = speech. Features are z-scored with the training
/// statistics before the SMO solve.
VadModel vad_train(const FeatureMatrix& features, const std::vector<bool>& labels,
                   const VadTrainOptions& options);

struct Prediction {
    std::vector<bool> speech;    // per row
    std::vector<double> margin;  // signed decision value
};

Prediction vad_predict(const VadModel& model, const FeatureMatrix& features);

struct CvReport {
    double false_positive_rate = 0.0;  // non-speech called speech
    double false_negative_rate = 0.0;  // speech called non-speech
    double total_error = 0.0;
    std::vector<double> per_fold_errors;
};

/// Stratified k-fold cross validation with a seeded shuffle.
CvReport cross_validate(const FeatureMatrix& features, const std::vector<bool>& labels,
                        int folds, const VadTrainOptions& options);

struct SpeechFilterResult {
    AudioBuffer audio;            // non-speech frames zeroed
    std::vector<bool> frame_mask; // per short-term frame, after smoothing
};

/// Predict per frame, smooth with a 5-frame majority vote, zero the samples
/// owned by non-speech frames.
SpeechFilterResult filter_speech(const AudioBuffer& buf, const VadModel& model);

/// Versioned JSON persistence. The loader rejects unknown versions.
void save_vad_model(const std::string& path, const VadModel& model);
VadModel load_vad_model(const std::string& path);

}  // namespace repscore
