#include "repscore/svm.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_map>

#include "repscore/errors.hpp"

namespace repscore {
namespace {

constexpr double kAlphaEps = 1e-12;

class Smo {
public:
    Smo(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
        const SvmTrainOptions& opt)
        : x_(rows), y_(labels), opt_(opt), n_(rows.size()) {
        alpha_.assign(n_, 0.0);
        error_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) error_[i] = -static_cast<double>(y_[i]);
        sq_norm_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            for (double v : x_[i]) s += v * v;
            sq_norm_[i] = s;
        }
        // cache budget: at most ~128 MB of float kernel rows
        cache_cap_ = std::max<std::size_t>(64, (128u << 20) / (sizeof(float) * std::max<std::size_t>(n_, 1)));
    }

    void solve() {
        std::size_t iterations = 0;
        bool examine_all = true;
        std::size_t changed = 0;
        while ((changed > 0 || examine_all) && iterations < opt_.max_iterations) {
            changed = 0;
            if (examine_all) {
                for (std::size_t i = 0; i < n_ && iterations < opt_.max_iterations; ++i)
                    changed += examine(i, iterations);
            } else {
                for (std::size_t i = 0; i < n_ && iterations < opt_.max_iterations; ++i)
                    if (alpha_[i] > kAlphaEps && alpha_[i] < opt_.box_c - kAlphaEps)
                        changed += examine(i, iterations);
            }
            examine_all = examine_all ? false : changed == 0;
        }
    }

    SvmModel model() const {
        SvmModel m;
        m.gamma = opt_.gamma;
        m.bias = bias_;
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] > kAlphaEps) {
                m.support_vectors.push_back(x_[i]);
                m.dual_coefs.push_back(alpha_[i] * y_[i]);
            }
        }
        return m;
    }

private:
    const std::vector<float>& kernel_row(std::size_t i) {
        auto it = cache_.find(i);
        if (it != cache_.end()) return it->second;
        if (cache_.size() >= cache_cap_) {
            cache_.erase(cache_order_.front());
            cache_order_.pop_front();
        }
        std::vector<float> row(n_);
        const auto& xi = x_[i];
        for (std::size_t j = 0; j < n_; ++j) {
            double dot = 0.0;
            const auto& xj = x_[j];
            for (std::size_t d = 0; d < xi.size(); ++d) dot += xi[d] * xj[d];
            row[j] = static_cast<float>(
                std::exp(-opt_.gamma * (sq_norm_[i] + sq_norm_[j] - 2.0 * dot)));
        }
        auto [ins, ok] = cache_.emplace(i, std::move(row));
        cache_order_.push_back(i);
        return ins->second;
    }

    std::size_t examine(std::size_t i2, std::size_t& iterations) {
        const double y2 = y_[i2];
        const double a2 = alpha_[i2];
        const double r2 = error_[i2] * y2;
        const bool violates = (r2 < -opt_.kkt_tol && a2 < opt_.box_c - kAlphaEps) ||
                              (r2 > opt_.kkt_tol && a2 > kAlphaEps);
        if (!violates) return 0;

        // second choice: largest |E1 - E2| among non-bound points
        std::size_t best = n_;
        double best_gap = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (i == i2 || alpha_[i] <= kAlphaEps || alpha_[i] >= opt_.box_c - kAlphaEps)
                continue;
            const double gap = std::fabs(error_[i] - error_[i2]);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < n_ && take_step(best, i2, iterations)) return 1;
        for (std::size_t i = 0; i < n_; ++i) {
            if (i == i2 || alpha_[i] <= kAlphaEps || alpha_[i] >= opt_.box_c - kAlphaEps)
                continue;
            if (take_step(i, i2, iterations)) return 1;
        }
        for (std::size_t i = 0; i < n_; ++i) {
            if (i == i2) continue;
            if (take_step(i, i2, iterations)) return 1;
        }
        return 0;
    }

    bool take_step(std::size_t i1, std::size_t i2, std::size_t& iterations) {
        ++iterations;
        const double y1 = y_[i1], y2 = y_[i2];
        const double a1_old = alpha_[i1], a2_old = alpha_[i2];
        const double s = y1 * y2;

        double lo, hi;
        if (s < 0) {
            lo = std::max(0.0, a2_old - a1_old);
            hi = std::min(opt_.box_c, opt_.box_c + a2_old - a1_old);
        } else {
            lo = std::max(0.0, a2_old + a1_old - opt_.box_c);
            hi = std::min(opt_.box_c, a2_old + a1_old);
        }
        if (lo >= hi) return false;

        const auto& row1 = kernel_row(i1);
        const double k11 = row1[i1], k12 = row1[i2];
        const auto& row2 = kernel_row(i2);
        const double k22 = row2[i2];
        const double eta = k11 + k22 - 2.0 * k12;
        if (eta <= 1e-12) return false;  // duplicate points, skip

        double a2 = a2_old + y2 * (error_[i1] - error_[i2]) / eta;
        a2 = std::clamp(a2, lo, hi);
        if (std::fabs(a2 - a2_old) < 1e-10 * (a2 + a2_old + 1e-10)) return false;
        const double a1 = a1_old + s * (a2_old - a2);

        const double d1 = y1 * (a1 - a1_old);
        const double d2 = y2 * (a2 - a2_old);
        const double b1 = bias_ - error_[i1] - d1 * k11 - d2 * k12;
        const double b2 = bias_ - error_[i2] - d1 * k12 - d2 * k22;
        double b_new;
        if (a1 > kAlphaEps && a1 < opt_.box_c - kAlphaEps)
            b_new = b1;
        else if (a2 > kAlphaEps && a2 < opt_.box_c - kAlphaEps)
            b_new = b2;
        else
            b_new = 0.5 * (b1 + b2);

        const double db = b_new - bias_;
        for (std::size_t i = 0; i < n_; ++i)
            error_[i] += d1 * row1[i] + d2 * row2[i] + db;

        alpha_[i1] = a1;
        alpha_[i2] = a2;
        bias_ = b_new;
        return true;
    }

    const std::vector<std::vector<double>>& x_;
    const std::vector<int>& y_;
    SvmTrainOptions opt_;
    std::size_t n_;
    std::vector<double> alpha_;
    std::vector<double> error_;  // f(x_i) - y_i
    std::vector<double> sq_norm_;
    double bias_ = 0.0;

    std::unordered_map<std::size_t, std::vector<float>> cache_;
    std::deque<std::size_t> cache_order_;
    std::size_t cache_cap_ = 64;
};

}  // namespace

SvmModel svm_train(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                   const SvmTrainOptions& options) {
    if (rows.size() != labels.size()) throw DimensionMismatch("svm_train: rows vs labels");
    if (options.box_c <= 0.0 || options.gamma <= 0.0)
        throw std::invalid_argument("svm_train: box_c and gamma must be positive");
    bool has_pos = false, has_neg = false;
    for (int y : labels) {
        if (y == 1) has_pos = true;
        else if (y == -1) has_neg = true;
        else throw std::invalid_argument("svm_train: labels must be +1/-1");
    }
    if (!has_pos || !has_neg) throw DegenerateLabels("need both classes to train");

    Smo smo(rows, labels, options);
    smo.solve();
    return smo.model();
}

double svm_decision(const SvmModel& model, const std::vector<double>& x) {
    double acc = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
        const auto& sv = model.support_vectors[i];
        if (sv.size() != x.size()) throw DimensionMismatch("svm_decision: feature width");
        double dist = 0.0;
        for (std::size_t d = 0; d < x.size(); ++d) {
            const double diff = x[d] - sv[d];
            dist += diff * diff;
        }
        acc += model.dual_coefs[i] * std::exp(-model.gamma * dist);
    }
    return acc;
}

}  // namespace repscore
