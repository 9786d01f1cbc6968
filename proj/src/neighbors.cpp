#include "nfbench/neighbors.hpp"

#include <algorithm>

namespace nfb {

double NeighborIndex::squared_distance(const Eigen::RowVectorXd& a,
                                       const Eigen::RowVectorXd& b) const {
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        s += diff * diff;
    }
    return s;
}

void NeighborIndex::top_k(const Eigen::RowVectorXd& point, int k, Eigen::Index skip,
                          std::vector<std::pair<double, Eigen::Index>>& out) const {
    out.clear();
    if (k <= 0) return;
    const Eigen::Index n = points_.rows();
    out.reserve(static_cast<std::size_t>(std::min<Eigen::Index>(k, n)));
    // bounded insertion keeps the worst candidate at the back
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i == skip) continue;
        double d = 0.0;
        for (Eigen::Index j = 0; j < points_.cols(); ++j) {
            const double diff = point[j] - points_(i, j);
            d += diff * diff;
        }
        std::pair<double, Eigen::Index> cand{d, i};
        if (out.size() == static_cast<std::size_t>(k) && !(cand < out.back())) continue;
        auto pos = std::lower_bound(out.begin(), out.end(), cand);
        out.insert(pos, cand);
        if (out.size() > static_cast<std::size_t>(k)) out.pop_back();
    }
}

std::vector<std::pair<double, Eigen::Index>> NeighborIndex::query(const Eigen::RowVectorXd& point,
                                                                  int k) const {
    std::vector<std::pair<double, Eigen::Index>> out;
    top_k(point, k, -1, out);
    return out;
}

std::vector<std::pair<double, Eigen::Index>> NeighborIndex::query_row(Eigen::Index i, int k,
                                                                      bool self_exclude) const {
    std::vector<std::pair<double, Eigen::Index>> out;
    top_k(points_.row(i), k, self_exclude ? i : -1, out);
    return out;
}

std::vector<Eigen::Index> NeighborIndex::nearest_of_each() const {
    const Eigen::Index n = points_.rows();
    std::vector<Eigen::Index> nn(static_cast<std::size_t>(n), -1);
    std::vector<std::pair<double, Eigen::Index>> buf;
    for (Eigen::Index i = 0; i < n; ++i) {
        top_k(points_.row(i), 1, i, buf);
        if (!buf.empty()) nn[static_cast<std::size_t>(i)] = buf[0].second;
    }
    return nn;
}

}  // namespace nfb
