#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nfbench/flow_table.hpp"

namespace nfb {

enum class Oversampler { None, ROS, SMOTE, ADASYN, CVAE, CWGAN, CDDPM };
enum class Undersampler { None, RUS, Tomek, ENN, NCR, NM3 };

std::string to_string(Oversampler o);
std::string to_string(Undersampler u);
bool is_generative(Oversampler o);

struct ResampleParams {
    int smote_k = 5;
    int adasyn_k = 5;
    int enn_k = 3;
    int ncr_k = 3;
};

// One oversampler paired with one undersampler/cleaner. The 7 x 6
// cross-product yields the 42 evaluated combinations.
struct ResampleSpec {
    Oversampler over = Oversampler::None;
    Undersampler under = Undersampler::None;
    ResampleParams params;

    std::string to_string() const;                    // "SMOTE+Tomek", "None+None"
    static ResampleSpec parse(const std::string& s);  // throws Error on unknown names
};

// Canonical spec order: oversamplers (None, ROS, SMOTE, ADASYN, C-VAE,
// C-WGAN, C-DDPM) crossed with undersamplers (None, RUS, Tomek, ENN, NCR,
// NM-3), undersampler varying fastest.
std::vector<ResampleSpec> all_specs(const ResampleParams& params = {});

// --- oversampling ---------------------------------------------------------

// Replicates rows of every non-majority class up to the majority count.
FlowTable random_oversample(const FlowTable& train, std::uint64_t seed);

// Adds convex combinations of same-class nearest-neighbor pairs up to the
// majority count. Classes with a single row fall back to replication.
FlowTable smote(const FlowTable& train, int k, std::uint64_t seed);

// SMOTE-style generation with the per-point budget weighted toward points
// whose k-NN neighborhood (in the full table) is dominated by other classes.
FlowTable adasyn(const FlowTable& train, int k, std::uint64_t seed);

// Per-row synthetic budget of adasyn for one class; exposed for the
// brute-force oracle comparison.
struct AdasynAllocation {
    int class_id;
    std::vector<Eigen::Index> rows;  // table row ids of the class, ascending
    std::vector<long> counts;        // synthetic rows to seed at each point
};
std::vector<AdasynAllocation> adasyn_allocation(const FlowTable& train, int k);

// --- undersampling / cleaning ---------------------------------------------

// Uniform sampling without replacement down to the minority count.
FlowTable random_undersample(const FlowTable& train, std::uint64_t seed);

// Removes both endpoints of every cross-class mutual-nearest-neighbor pair.
FlowTable tomek_clean(const FlowTable& train);

// Removes every row whose k-NN plurality vote (self excluded) disagrees
// with its own label; applies to all classes, removals simultaneous.
FlowTable enn_clean(const FlowTable& train, int k);

// Condensed-nearest-neighbor reduction followed by a kNN misclassification
// sweep on the condensed set.
FlowTable ncr_clean(const FlowTable& train, int k);

// Keeps all minority rows plus the union of each minority row's 3 nearest
// majority rows (largest class = majority).
FlowTable nearmiss3(const FlowTable& train);

// Keep-index cores (ascending row ids); the FlowTable wrappers above throw
// EmptyResultError when a class would end up empty, apply_spec restores the
// class instead.
std::vector<Eigen::Index> tomek_keep_indices(const FlowTable& train);
std::vector<Eigen::Index> enn_keep_indices(const FlowTable& train, int k);
std::vector<Eigen::Index> ncr_condense_indices(const FlowTable& train);  // phase 1 only
std::vector<Eigen::Index> ncr_keep_indices(const FlowTable& train, int k);
std::vector<Eigen::Index> nearmiss3_keep_indices(const FlowTable& train);

// --- composition -----------------------------------------------------------

struct ResampleProvenance {
    std::string over, under;
    std::vector<Eigen::Index> counts_in, counts_mid, counts_out;
    std::vector<std::string> warnings;
    std::string to_json_line() const;
};

// Supplies trained generative oversampling for apply_spec; the bench runner
// injects a caching implementation keyed on (dataset, model kind, seed).
using GenerativeOversampleFn =
    std::function<FlowTable(const FlowTable&, Oversampler, std::uint64_t seed)>;

// Oversample first, then undersample/clean; None is identity on either
// side. A cleaner emptying a class has that class's (post-oversampling)
// rows restored, with a warning in the provenance record.
FlowTable apply_spec(const FlowTable& train, const ResampleSpec& spec,
                     const GenerativeOversampleFn& generative, std::uint64_t seed,
                     ResampleProvenance* provenance = nullptr);

}  // namespace nfb
