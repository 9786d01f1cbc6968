#pragma once

// Internal helpers shared by the generative model implementations.

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "nfbench/errors.hpp"
#include "nfbench/flow_table.hpp"
#include "nfbench/rng.hpp"

namespace nfb::gen::detail {

inline Eigen::MatrixXd one_hot(const Eigen::VectorXi& labels, int class_count) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(labels.size(), class_count);
    for (Eigen::Index i = 0; i < labels.size(); ++i) out(i, labels[i]) = 1.0;
    return out;
}

inline Eigen::MatrixXd constant_one_hot(int class_id, int class_count, Eigen::Index rows) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, class_count);
    out.col(class_id).setOnes();
    return out;
}

inline Eigen::MatrixXd gaussian_matrix(rng::Engine& eng, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = eng.normal();
    return out;
}

inline void check_finite(double loss, const std::string& what, int epoch) {
    if (!std::isfinite(loss))
        throw TrainingError(what + ": non-finite loss at epoch " + std::to_string(epoch));
}

// Shuffled row batches for one epoch.
class BatchPlan {
public:
    BatchPlan(Eigen::Index rows, int batch, rng::Engine& eng) : batch_(batch) {
        order_.resize(static_cast<std::size_t>(rows));
        for (Eigen::Index i = 0; i < rows; ++i) order_[static_cast<std::size_t>(i)] = i;
        eng.shuffle(order_);
    }

    Eigen::Index batch_count() const {
        return static_cast<Eigen::Index>((order_.size() + static_cast<std::size_t>(batch_) - 1) /
                                         static_cast<std::size_t>(batch_));
    }

    std::vector<Eigen::Index> batch_rows(Eigen::Index b) const {
        const std::size_t begin = static_cast<std::size_t>(b) * static_cast<std::size_t>(batch_);
        const std::size_t end = std::min(order_.size(), begin + static_cast<std::size_t>(batch_));
        return std::vector<Eigen::Index>(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                                         order_.begin() + static_cast<std::ptrdiff_t>(end));
    }

private:
    int batch_;
    std::vector<Eigen::Index> order_;
};

inline Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
    return out;
}

inline Eigen::VectorXi gather_labels(const Eigen::VectorXi& v, const std::vector<Eigen::Index>& rows) {
    Eigen::VectorXi out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[rows[i]];
    return out;
}

inline Eigen::MatrixXd hcat(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows(), a.cols() + b.cols());
    out.leftCols(a.cols()) = a;
    out.rightCols(b.cols()) = b;
    return out;
}

inline Eigen::MatrixXd hcat(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            const Eigen::MatrixXd& c) {
    return hcat(hcat(a, b), c);
}

}  // namespace nfb::gen::detail
