#include "repscore/vad.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "repscore/errors.hpp"

namespace repscore {
namespace {

std::vector<std::vector<double>> zscore_rows(const FeatureMatrix& features,
                                             const std::array<double, kNumFeatures>& means,
                                             const std::array<double, kNumFeatures>& stds) {
    std::vector<std::vector<double>> rows(features.n_rows());
    for (std::size_t i = 0; i < features.n_rows(); ++i) {
        rows[i].resize(kNumFeatures);
        for (std::size_t c = 0; c < kNumFeatures; ++c)
            rows[i][c] = (features.rows[i][c] - means[c]) / stds[c];
    }
    return rows;
}

void check_finite(const FeatureMatrix& features) {
    for (std::size_t i = 0; i < features.n_rows(); ++i)
        for (double v : features.rows[i])
            if (!std::isfinite(v))
                throw NonFiniteFeature("row " + std::to_string(i));
}

}  // namespace

VadModel vad_train(const FeatureMatrix& features, const std::vector<bool>& labels,
                   const VadTrainOptions& options) {
    if (features.n_rows() != labels.size())
        throw DimensionMismatch("vad_train: rows vs labels");
    check_finite(features);
    std::size_t n_speech = 0;
    for (bool b : labels) n_speech += b ? 1 : 0;
    if (n_speech < 2 || labels.size() - n_speech < 2)
        throw DegenerateLabels("need at least two rows per class");

    VadModel model;
    const double n = static_cast<double>(features.n_rows());
    for (std::size_t c = 0; c < kNumFeatures; ++c) {
        double mean = 0.0;
        for (const auto& row : features.rows) mean += row[c];
        mean /= n;
        double var = 0.0;
        for (const auto& row : features.rows) var += (row[c] - mean) * (row[c] - mean);
        const double std_dev = std::sqrt(var / n);
        model.feature_means[c] = mean;
        model.feature_stds[c] = std_dev > 1e-12 ? std_dev : 1.0;
    }

    auto rows = zscore_rows(features, model.feature_means, model.feature_stds);
    std::vector<int> y(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] ? 1 : -1;

    SvmTrainOptions svm_opt;
    svm_opt.box_c = options.box_c;
    svm_opt.gamma = options.gamma;
    model.svm = svm_train(rows, y, svm_opt);
    return model;
}

Prediction vad_predict(const VadModel& model, const FeatureMatrix& features) {
    check_finite(features);
    auto rows = zscore_rows(features, model.feature_means, model.feature_stds);
    Prediction pred;
    pred.speech.resize(rows.size());
    pred.margin.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        pred.margin[i] = svm_decision(model.svm, rows[i]);
        pred.speech[i] = pred.margin[i] > 0.0;
    }
    return pred;
}

CvReport cross_validate(const FeatureMatrix& features, const std::vector<bool>& labels,
                        int folds, const VadTrainOptions& options) {
    if (folds < 2) throw std::invalid_argument("cross_validate: folds must be >= 2");
    if (features.n_rows() != labels.size())
        throw DimensionMismatch("cross_validate: rows vs labels");

    std::vector<std::size_t> speech_idx, other_idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] ? speech_idx : other_idx).push_back(i);
    if (speech_idx.size() < static_cast<std::size_t>(folds) ||
        other_idx.size() < static_cast<std::size_t>(folds))
        throw DegenerateLabels("each class needs at least `folds` rows");

    std::mt19937_64 rng(options.seed);
    std::shuffle(speech_idx.begin(), speech_idx.end(), rng);
    std::shuffle(other_idx.begin(), other_idx.end(), rng);

    std::vector<int> fold_of(labels.size());
    for (std::size_t i = 0; i < speech_idx.size(); ++i)
        fold_of[speech_idx[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
    for (std::size_t i = 0; i < other_idx.size(); ++i)
        fold_of[other_idx[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));

    std::size_t fp = 0, fn = 0, n_speech = speech_idx.size(), n_other = other_idx.size();
    CvReport report;
    for (int f = 0; f < folds; ++f) {
        FeatureMatrix train_set, test_set;
        std::vector<bool> train_labels, test_labels;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            auto& dst = fold_of[i] == f ? test_set : train_set;
            auto& dst_labels = fold_of[i] == f ? test_labels : train_labels;
            dst.rows.push_back(features.rows[i]);
            dst.frame_times.push_back(features.frame_times[i]);
            dst_labels.push_back(labels[i]);
        }
        const VadModel model = vad_train(train_set, train_labels, options);
        const Prediction pred = vad_predict(model, test_set);
        std::size_t fold_errors = 0;
        for (std::size_t i = 0; i < test_labels.size(); ++i) {
            if (pred.speech[i] == test_labels[i]) continue;
            ++fold_errors;
            if (test_labels[i]) ++fn;
            else ++fp;
        }
        report.per_fold_errors.push_back(static_cast<double>(fold_errors) /
                                         static_cast<double>(test_labels.size()));
    }
    report.false_positive_rate = static_cast<double>(fp) / static_cast<double>(n_other);
    report.false_negative_rate = static_cast<double>(fn) / static_cast<double>(n_speech);
    report.total_error =
        static_cast<double>(fp + fn) / static_cast<double>(n_speech + n_other);
    return report;
}

SpeechFilterResult filter_speech(const AudioBuffer& buf, const VadModel& model) {
    const FeatureMatrix features = extract_features(buf);
    const Prediction pred = vad_predict(model, features);
    const std::size_t n_frames = features.n_rows();

    // 5-frame majority vote; edges use the frames that exist
    SpeechFilterResult result;
    result.frame_mask.resize(n_frames);
    for (std::size_t i = 0; i < n_frames; ++i) {
        const std::size_t lo = i >= 2 ? i - 2 : 0;
        const std::size_t hi = std::min(n_frames - 1, i + 2);
        std::size_t votes = 0;
        for (std::size_t j = lo; j <= hi; ++j) votes += pred.speech[j] ? 1 : 0;
        const std::size_t total = hi - lo + 1;
        if (2 * votes > total)
            result.frame_mask[i] = true;
        else if (2 * votes < total)
            result.frame_mask[i] = false;
        else
            result.frame_mask[i] = pred.speech[i];
    }

    // frame l owns samples [l*hop, (l+1)*hop); the last frame owns the tail
    const auto hop = static_cast<std::size_t>(std::lround(kShortHopSec * buf.sample_rate));
    result.audio = buf;
    for (std::size_t i = 0; i < result.audio.samples.size(); ++i) {
        const std::size_t frame = std::min(i / hop, n_frames - 1);
        if (!result.frame_mask[frame]) result.audio.samples[i] = 0.0;
    }
    return result;
}

void save_vad_model(const std::string& path, const VadModel& model) {
    nlohmann::json j;
    j["version"] = VadModel::kFormatVersion;
    j["gamma"] = model.svm.gamma;
    j["bias"] = model.svm.bias;
    j["means"] = model.feature_means;
    j["stds"] = model.feature_stds;
    j["support_vectors"] = model.svm.support_vectors;
    j["dual_coefs"] = model.svm.dual_coefs;
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    f << j.dump(2) << '\n';
    if (!f) throw IoError("short write to " + path);
}

VadModel load_vad_model(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(f, nullptr, false);
    if (j.is_discarded()) throw ModelFormatError(path + " is not valid JSON");
    if (!j.contains("version") || !j["version"].is_number_integer() ||
        j["version"].get<int>() != VadModel::kFormatVersion)
        throw ModelFormatError(path + ": unknown model version");

    VadModel model;
    try {
        model.svm.gamma = j.at("gamma").get<double>();
        model.svm.bias = j.at("bias").get<double>();
        const auto means = j.at("means").get<std::vector<double>>();
        const auto stds = j.at("stds").get<std::vector<double>>();
        if (means.size() != kNumFeatures || stds.size() != kNumFeatures)
            throw ModelFormatError(path + ": wrong feature width");
        std::copy(means.begin(), means.end(), model.feature_means.begin());
        std::copy(stds.begin(), stds.end(), model.feature_stds.begin());
        model.svm.support_vectors = j.at("support_vectors").get<std::vector<std::vector<double>>>();
        model.svm.dual_coefs = j.at("dual_coefs").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw ModelFormatError(path + ": " + e.what());
    }
    if (model.svm.support_vectors.size() != model.svm.dual_coefs.size())
        throw ModelFormatError(path + ": support vector / coefficient count mismatch");
    for (const auto& sv : model.svm.support_vectors)
        if (sv.size() != kNumFeatures) throw ModelFormatError(path + ": wrong SV width");
    return model;
}

}  // namespace repscore
