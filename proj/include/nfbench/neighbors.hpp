#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace nfb {

// Brute-force Euclidean neighbor queries over a fixed point set.
//
// Distances are accumulated coordinate-by-coordinate in ascending column
// order. That makes every comparison bit-reproducible against an O(n^2)
// reference written the same way, so the row-id tie-break is exact, not
// approximate. Ordering: ascending squared distance, then ascending row-id.
class NeighborIndex {
public:
    explicit NeighborIndex(const Eigen::MatrixXd& points) : points_(points) {}

    Eigen::Index size() const { return points_.rows(); }
    const Eigen::MatrixXd& points() const { return points_; }

    // k nearest member rows to an external query point.
    std::vector<std::pair<double, Eigen::Index>> query(const Eigen::RowVectorXd& point,
                                                       int k) const;

    // k nearest member rows to member row `i`; `i` itself is excluded when
    // self_exclude is set. k is clamped to the number of candidates.
    std::vector<std::pair<double, Eigen::Index>> query_row(Eigen::Index i, int k,
                                                           bool self_exclude = true) const;

    // Nearest member row to every member row (self excluded).
    std::vector<Eigen::Index> nearest_of_each() const;

    double squared_distance(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) const;

private:
    void top_k(const Eigen::RowVectorXd& point, int k, Eigen::Index skip,
               std::vector<std::pair<double, Eigen::Index>>& out) const;

    Eigen::MatrixXd points_;
};

}  // namespace nfb
