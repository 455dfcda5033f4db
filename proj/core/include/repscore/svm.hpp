#pragma once

#include <cstddef>
#include <vector>

namespace repscore {

/// Soft-margin RBF-kernel SVM solved by sequential minimal optimization.
/// Labels are +1/-1; only rows with nonzero dual coefficient are stored.
struct SvmModel {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> dual_coefs;  // alpha_i * y_i
    double bias = 0.0;
    double gamma = 0.1;
};

struct SvmTrainOptions {
    double box_c = 10.0;
    double gamma = 0.1;
    double kkt_tol = 1e-3;
    std::size_t max_iterations = 200000;
};

SvmModel svm_train(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                   const SvmTrainOptions& options);

/// Signed decision value: sum_i coef_i * exp(-gamma * ||x - sv_i||^2) + bias.
double svm_decision(const SvmModel& model, const std::vector<double>& x);

}  // namespace repscore
