#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nfbench/schema.hpp"

namespace nfb {

// Normalized feature matrix in [0,1]^{n x d} with integer class labels.
// Immutable after construction by convention; operations return new tables.
struct FlowTable {
    Eigen::MatrixXd features;              // n x d, all values in [0,1]
    Eigen::VectorXi labels;                // n, values in [0, class_names.size())
    std::vector<std::string> class_names;  // class-id -> attack-type name
    std::vector<std::string> feature_names;

    Eigen::Index rows() const { return features.rows(); }
    Eigen::Index dims() const { return features.cols(); }
    int class_count() const { return static_cast<int>(class_names.size()); }

    std::vector<Eigen::Index> class_counts() const;
    std::vector<std::vector<Eigen::Index>> rows_by_class() const;

    FlowTable select_rows(std::span<const Eigen::Index> idx) const;

    // Checks value range, label range and that no declared class is empty.
    void validate() const;
};

struct IngestReport {
    std::size_t rows = 0;
    std::size_t clipped_values = 0;  // out-of-range feature cells clipped to [0,1]
};

// Applies the preprocessing protocol: drop role=dropped columns, min-max
// normalize features by schema range (clipping out-of-range values), map
// label strings to class ids (schema class_order when given, otherwise
// first appearance).
FlowTable ingest_csv(const std::filesystem::path& path, const FeatureSchema& schema,
                     IngestReport* report = nullptr);
FlowTable ingest_csv_stream(std::istream& in, const FeatureSchema& schema,
                            IngestReport* report = nullptr);

// Persistence: normalized features + integer label column as CSV, class
// names in a sidecar JSON. Doubles round-trip exactly.
void save_flow_table(const FlowTable& table, const std::filesystem::path& csv_path,
                     const std::filesystem::path& sidecar_path);
FlowTable load_flow_table(const std::filesystem::path& csv_path,
                          const std::filesystem::path& sidecar_path);

struct SplitPair {
    FlowTable train;
    FlowTable test;
    std::uint64_t seed = 0;
    double train_fraction = 0.8;
};

// Per-class deterministic shuffle; round-half-up share to train with at
// least one row on each side. Requires >= 2 rows per class.
SplitPair stratified_split(const FlowTable& table, double train_fraction, std::uint64_t seed);

// Truncates each class to at most `per_class_cap` rows chosen by seeded
// shuffle; surviving rows keep their original relative order.
FlowTable subsample(const FlowTable& table, Eigen::Index per_class_cap, std::uint64_t seed);

// In-repo synthetic surrogates shaped like the three NF benchmark datasets
// (class rosters and counts as published; features drawn from per-class
// mixtures in normalized space). `scale` shrinks every class count
// proportionally (floor, at least 4 rows per class).
FlowTable make_surrogate(const std::string& dataset_name, std::uint64_t seed, double scale = 1.0);
bool is_known_surrogate(const std::string& dataset_name);

// FNV-1a over the raw feature/label bytes; used by the train-only
// resampling audit.
std::string content_hash(const FlowTable& table);

}  // namespace nfb
