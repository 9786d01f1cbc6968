#include "nfbench/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nfbench/neighbors.hpp"
#include "nfbench/rng.hpp"

namespace nfb {

using Eigen::Index;

std::string to_string(Oversampler o) {
    switch (o) {
        case Oversampler::None: return "None";
        case Oversampler::ROS: return "ROS";
        case Oversampler::SMOTE: return "SMOTE";
        case Oversampler::ADASYN: return "ADASYN";
        case Oversampler::CVAE: return "C-VAE";
        case Oversampler::CWGAN: return "C-WGAN";
        case Oversampler::CDDPM: return "C-DDPM";
    }
    return "?";
}

std::string to_string(Undersampler u) {
    switch (u) {
        case Undersampler::None: return "None";
        case Undersampler::RUS: return "RUS";
        case Undersampler::Tomek: return "Tomek";
        case Undersampler::ENN: return "ENN";
        case Undersampler::NCR: return "NCR";
        case Undersampler::NM3: return "NM-3";
    }
    return "?";
}

bool is_generative(Oversampler o) {
    return o == Oversampler::CVAE || o == Oversampler::CWGAN || o == Oversampler::CDDPM;
}

namespace {

const std::vector<Oversampler> kOverOrder = {
    Oversampler::None, Oversampler::ROS,   Oversampler::SMOTE, Oversampler::ADASYN,
    Oversampler::CVAE, Oversampler::CWGAN, Oversampler::CDDPM};
const std::vector<Undersampler> kUnderOrder = {
    Undersampler::None, Undersampler::RUS, Undersampler::Tomek,
    Undersampler::ENN,  Undersampler::NCR, Undersampler::NM3};

Oversampler oversampler_from_string(const std::string& s) {
    for (auto o : kOverOrder)
        if (to_string(o) == s) return o;
    throw Error("unknown oversampler '" + s + "'");
}

Undersampler undersampler_from_string(const std::string& s) {
    for (auto u : kUnderOrder)
        if (to_string(u) == s) return u;
    throw Error("unknown undersampler '" + s + "'");
}

void require_multiclass(const FlowTable& t) {
    if (t.class_count() < 2) throw Error("operation requires at least 2 classes");
    t.validate();
}

FlowTable append_rows(const FlowTable& base, const Eigen::MatrixXd& extra,
                      const std::vector<int>& extra_labels) {
    FlowTable out;
    out.class_names = base.class_names;
    out.feature_names = base.feature_names;
    out.features.resize(base.rows() + extra.rows(), base.dims());
    out.features.topRows(base.rows()) = base.features;
    out.features.bottomRows(extra.rows()) = extra;
    out.labels.resize(base.rows() + extra.rows());
    out.labels.head(base.rows()) = base.labels;
    for (Index i = 0; i < extra.rows(); ++i)
        out.labels[base.rows() + i] = extra_labels[static_cast<std::size_t>(i)];
    return out;
}

}  // namespace

std::string ResampleSpec::to_string() const {
    return nfb::to_string(over) + "+" + nfb::to_string(under);
}

ResampleSpec ResampleSpec::parse(const std::string& s) {
    auto pos = s.find('+');
    if (pos == std::string::npos) throw Error("resample spec must look like 'OVER+UNDER': " + s);
    ResampleSpec spec;
    spec.over = oversampler_from_string(s.substr(0, pos));
    spec.under = undersampler_from_string(s.substr(pos + 1));
    return spec;
}

std::vector<ResampleSpec> all_specs(const ResampleParams& params) {
    std::vector<ResampleSpec> out;
    for (auto o : kOverOrder)
        for (auto u : kUnderOrder) out.push_back({o, u, params});
    return out;
}

// ---------------------------------------------------------------------------
// oversampling

FlowTable random_oversample(const FlowTable& train, std::uint64_t seed) {
    require_multiclass(train);
    auto by_class = train.rows_by_class();
    const Index majority =
        static_cast<Index>(std::max_element(by_class.begin(), by_class.end(),
                                            [](const auto& a, const auto& b) {
                                                return a.size() < b.size();
                                            })
                               ->size());
    std::vector<Index> copies;
    std::vector<int> copy_labels;
    rng::Engine eng(rng::derive(seed, {"ros"}));
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        const auto& rows = by_class[c];
        for (Index g = static_cast<Index>(rows.size()); g < majority; ++g) {
            copies.push_back(rows[static_cast<std::size_t>(eng.below(rows.size()))]);
            copy_labels.push_back(static_cast<int>(c));
        }
    }
    Eigen::MatrixXd extra(static_cast<Index>(copies.size()), train.dims());
    for (std::size_t i = 0; i < copies.size(); ++i)
        extra.row(static_cast<Index>(i)) = train.features.row(copies[i]);
    return append_rows(train, extra, copy_labels);
}

namespace {

// Interpolated rows for one class: sources chosen uniformly, partner
// uniformly among the source's k same-class nearest neighbors.
void smote_generate(const FlowTable& train, const std::vector<Index>& class_rows, int class_id,
                    int k, Index how_many, rng::Engine& eng, Eigen::MatrixXd& out, Index& out_row,
                    std::vector<int>& out_labels,
                    const std::vector<long>* per_point_budget = nullptr) {
    const auto n_c = static_cast<Index>(class_rows.size());
    if (how_many <= 0) return;
    if (n_c == 1) {
        // no neighbor to interpolate toward; replicate instead
        for (Index g = 0; g < how_many; ++g) {
            out.row(out_row++) = train.features.row(class_rows[0]);
            out_labels.push_back(class_id);
        }
        return;
    }
    Eigen::MatrixXd class_pts(n_c, train.dims());
    for (Index i = 0; i < n_c; ++i)
        class_pts.row(i) = train.features.row(class_rows[static_cast<std::size_t>(i)]);
    NeighborIndex index(class_pts);
    const int k_eff = static_cast<int>(std::min<Index>(k, n_c - 1));

    std::vector<std::vector<Index>> neighbor_cache(static_cast<std::size_t>(n_c));
    auto neighbors_of = [&](Index local) -> const std::vector<Index>& {
        auto& cached = neighbor_cache[static_cast<std::size_t>(local)];
        if (cached.empty()) {
            for (const auto& [dist, id] : index.query_row(local, k_eff)) cached.push_back(id);
        }
        return cached;
    };

    std::vector<Index> budget_order;
    if (per_point_budget) {
        for (std::size_t i = 0; i < per_point_budget->size(); ++i)
            for (long g = 0; g < (*per_point_budget)[i]; ++g)
                budget_order.push_back(static_cast<Index>(i));
    }

    for (Index g = 0; g < how_many; ++g) {
        const Index local = per_point_budget
                                ? budget_order[static_cast<std::size_t>(g)]
                                : static_cast<Index>(eng.below(static_cast<std::uint64_t>(n_c)));
        const auto& nns = neighbors_of(local);
        const Index partner = nns[static_cast<std::size_t>(eng.below(nns.size()))];
        const double u = eng.uniform();
        out.row(out_row) =
            class_pts.row(local) + u * (class_pts.row(partner) - class_pts.row(local));
        ++out_row;
        out_labels.push_back(class_id);
    }
}

}  // namespace

FlowTable smote(const FlowTable& train, int k, std::uint64_t seed) {
    require_multiclass(train);
    if (k < 1) throw Error("smote requires k >= 1");
    auto by_class = train.rows_by_class();
    Index majority = 0;
    for (const auto& rows : by_class)
        majority = std::max(majority, static_cast<Index>(rows.size()));

    Index total_new = 0;
    for (const auto& rows : by_class) total_new += majority - static_cast<Index>(rows.size());
    Eigen::MatrixXd extra(total_new, train.dims());
    std::vector<int> extra_labels;
    Index out_row = 0;
    rng::Engine eng(rng::derive(seed, {"smote"}));
    for (std::size_t c = 0; c < by_class.size(); ++c)
        smote_generate(train, by_class[c], static_cast<int>(c), k,
                       majority - static_cast<Index>(by_class[c].size()), eng, extra, out_row,
                       extra_labels);
    return append_rows(train, extra, extra_labels);
}

std::vector<AdasynAllocation> adasyn_allocation(const FlowTable& train, int k) {
    require_multiclass(train);
    if (k < 1) throw Error("adasyn requires k >= 1");
    auto by_class = train.rows_by_class();
    Index majority = 0;
    for (const auto& rows : by_class)
        majority = std::max(majority, static_cast<Index>(rows.size()));

    NeighborIndex full(train.features);
    const int k_eff = static_cast<int>(std::min<Index>(k, train.rows() - 1));

    std::vector<AdasynAllocation> plans;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        const auto& rows = by_class[c];
        const Index deficit = majority - static_cast<Index>(rows.size());
        if (deficit <= 0) continue;
        AdasynAllocation plan;
        plan.class_id = static_cast<int>(c);
        plan.rows = rows;
        plan.counts.assign(rows.size(), 0);
        if (rows.size() == 1) {
            plan.counts[0] = deficit;  // replication fallback
            plans.push_back(std::move(plan));
            continue;
        }

        std::vector<double> r(rows.size(), 0.0);
        double r_sum = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            int foreign = 0;
            for (const auto& [dist, id] : full.query_row(rows[i], k_eff))
                if (train.labels[id] != static_cast<int>(c)) ++foreign;
            r[i] = static_cast<double>(foreign) / static_cast<double>(k_eff);
            r_sum += r[i];
        }
        std::vector<double> w(rows.size());
        if (r_sum == 0.0) {
            std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(rows.size()));
        } else {
            for (std::size_t i = 0; i < rows.size(); ++i) w[i] = r[i] / r_sum;
        }

        // largest-remainder rounding so the class total is exactly the deficit
        long assigned = 0;
        std::vector<std::pair<double, std::size_t>> remainders;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double share = w[i] * static_cast<double>(deficit);
            plan.counts[i] = static_cast<long>(std::floor(share));
            assigned += plan.counts[i];
            remainders.push_back({share - std::floor(share), i});
        }
        std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        for (long leftover = deficit - assigned; leftover > 0; --leftover)
            plan.counts[remainders[static_cast<std::size_t>(deficit - assigned - leftover)].second]++;
        plans.push_back(std::move(plan));
    }
    return plans;
}

FlowTable adasyn(const FlowTable& train, int k, std::uint64_t seed) {
    auto plans = adasyn_allocation(train, k);
    auto by_class = train.rows_by_class();

    Index total_new = 0;
    for (const auto& plan : plans)
        total_new += std::accumulate(plan.counts.begin(), plan.counts.end(), 0L);
    Eigen::MatrixXd extra(total_new, train.dims());
    std::vector<int> extra_labels;
    Index out_row = 0;
    rng::Engine eng(rng::derive(seed, {"adasyn"}));
    for (const auto& plan : plans) {
        const Index class_total =
            std::accumulate(plan.counts.begin(), plan.counts.end(), 0L);
        smote_generate(train, by_class[static_cast<std::size_t>(plan.class_id)], plan.class_id, k,
                       class_total, eng, extra, out_row, extra_labels, &plan.counts);
    }
    return append_rows(train, extra, extra_labels);
}

// ---------------------------------------------------------------------------
// undersampling

FlowTable random_undersample(const FlowTable& train, std::uint64_t seed) {
    require_multiclass(train);
    auto by_class = train.rows_by_class();
    Index minority = train.rows();
    for (const auto& rows : by_class)
        minority = std::min(minority, static_cast<Index>(rows.size()));

    std::vector<Index> keep;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto rows = by_class[c];
        if (static_cast<Index>(rows.size()) > minority) {
            rng::Engine eng(rng::derive(seed, {"rus", train.class_names[c]}));
            eng.shuffle(rows);
            rows.resize(static_cast<std::size_t>(minority));
        }
        keep.insert(keep.end(), rows.begin(), rows.end());
    }
    std::sort(keep.begin(), keep.end());
    return train.select_rows(keep);
}

std::vector<Index> tomek_keep_indices(const FlowTable& train) {
    require_multiclass(train);
    NeighborIndex index(train.features);
    auto nn = index.nearest_of_each();
    const Index n = train.rows();
    std::vector<bool> drop(static_cast<std::size_t>(n), false);
    for (Index a = 0; a < n; ++a) {
        const Index b = nn[static_cast<std::size_t>(a)];
        if (b > a && nn[static_cast<std::size_t>(b)] == a && train.labels[a] != train.labels[b]) {
            drop[static_cast<std::size_t>(a)] = true;
            drop[static_cast<std::size_t>(b)] = true;
        }
    }
    std::vector<Index> keep;
    for (Index i = 0; i < n; ++i)
        if (!drop[static_cast<std::size_t>(i)]) keep.push_back(i);
    return keep;
}

namespace {

// Plurality label among the k nearest rows of `subset` to subset row
// `local` (self excluded); ties resolved toward the lowest class id.
int knn_vote(const NeighborIndex& index, const Eigen::VectorXi& labels, Index local, int k,
             int class_count) {
    std::vector<int> votes(static_cast<std::size_t>(class_count), 0);
    for (const auto& [dist, id] : index.query_row(local, k))
        votes[static_cast<std::size_t>(labels[id])]++;
    int best = 0;
    for (int c = 1; c < class_count; ++c)
        if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) best = c;
    return best;
}

std::vector<Index> enn_keep_on(const FlowTable& train, const std::vector<Index>& subset, int k) {
    Eigen::MatrixXd pts(static_cast<Index>(subset.size()), train.dims());
    Eigen::VectorXi labels(static_cast<Index>(subset.size()));
    for (std::size_t i = 0; i < subset.size(); ++i) {
        pts.row(static_cast<Index>(i)) = train.features.row(subset[i]);
        labels[static_cast<Index>(i)] = train.labels[subset[i]];
    }
    NeighborIndex index(pts);
    const int k_eff = static_cast<int>(std::min<Index>(k, static_cast<Index>(subset.size()) - 1));
    std::vector<Index> keep;
    for (std::size_t i = 0; i < subset.size(); ++i) {
        const int vote =
            knn_vote(index, labels, static_cast<Index>(i), k_eff, train.class_count());
        if (vote == labels[static_cast<Index>(i)]) keep.push_back(subset[i]);
    }
    return keep;
}

}  // namespace

std::vector<Index> enn_keep_indices(const FlowTable& train, int k) {
    require_multiclass(train);
    if (k < 1) throw Error("enn requires k >= 1");
    std::vector<Index> all(static_cast<std::size_t>(train.rows()));
    std::iota(all.begin(), all.end(), 0);
    return enn_keep_on(train, all, k);
}

std::vector<Index> ncr_condense_indices(const FlowTable& train) {
    require_multiclass(train);
    auto by_class = train.rows_by_class();
    std::vector<Index> kept;
    for (const auto& rows : by_class) kept.push_back(rows.front());  // lowest row-id seeds
    std::sort(kept.begin(), kept.end());
    std::set<Index> kept_set(kept.begin(), kept.end());

    for (Index i = 0; i < train.rows(); ++i) {
        if (kept_set.count(i)) continue;
        // 1-NN over the current kept set, distance ties to the lowest row-id
        double best = std::numeric_limits<double>::infinity();
        Index best_id = -1;
        for (Index j : kept_set) {
            double d = 0.0;
            for (Index col = 0; col < train.dims(); ++col) {
                const double diff = train.features(i, col) - train.features(j, col);
                d += diff * diff;
            }
            if (d < best) {
                best = d;
                best_id = j;
            }
        }
        if (train.labels[best_id] != train.labels[i]) kept_set.insert(i);
    }
    return std::vector<Index>(kept_set.begin(), kept_set.end());
}

std::vector<Index> ncr_keep_indices(const FlowTable& train, int k) {
    if (k < 1) throw Error("ncr requires k >= 1");
    auto condensed = ncr_condense_indices(train);
    return enn_keep_on(train, condensed, k);
}

std::vector<Index> nearmiss3_keep_indices(const FlowTable& train) {
    require_multiclass(train);
    auto by_class = train.rows_by_class();
    std::size_t majority_class = 0;
    for (std::size_t c = 1; c < by_class.size(); ++c)
        if (by_class[c].size() > by_class[majority_class].size()) majority_class = c;

    const auto& maj_rows = by_class[majority_class];
    Eigen::MatrixXd maj_pts(static_cast<Index>(maj_rows.size()), train.dims());
    for (std::size_t i = 0; i < maj_rows.size(); ++i)
        maj_pts.row(static_cast<Index>(i)) = train.features.row(maj_rows[i]);
    NeighborIndex maj_index(maj_pts);

    std::set<Index> retained;
    for (Index i = 0; i < train.rows(); ++i) {
        if (train.labels[i] == static_cast<int>(majority_class)) continue;
        for (const auto& [dist, local] : maj_index.query(train.features.row(i), 3))
            retained.insert(maj_rows[static_cast<std::size_t>(local)]);
    }

    std::vector<Index> keep;
    for (Index i = 0; i < train.rows(); ++i)
        if (train.labels[i] != static_cast<int>(majority_class) || retained.count(i))
            keep.push_back(i);
    return keep;
}

namespace {

std::vector<Index> counts_of(const FlowTable& train, const std::vector<Index>& keep) {
    std::vector<Index> counts(train.class_names.size(), 0);
    for (Index i : keep) counts[static_cast<std::size_t>(train.labels[i])]++;
    return counts;
}

FlowTable finish_clean(const FlowTable& train, const std::vector<Index>& keep, const char* op) {
    auto counts = counts_of(train, keep);
    for (std::size_t c = 0; c < counts.size(); ++c)
        if (counts[c] == 0)
            throw EmptyResultError(std::string(op) + " removed every row of class '" +
                                   train.class_names[c] + "'");
    return train.select_rows(keep);
}

}  // namespace

FlowTable tomek_clean(const FlowTable& train) {
    return finish_clean(train, tomek_keep_indices(train), "tomek");
}

FlowTable enn_clean(const FlowTable& train, int k) {
    return finish_clean(train, enn_keep_indices(train, k), "enn");
}

FlowTable ncr_clean(const FlowTable& train, int k) {
    return finish_clean(train, ncr_keep_indices(train, k), "ncr");
}

FlowTable nearmiss3(const FlowTable& train) {
    return finish_clean(train, nearmiss3_keep_indices(train), "nearmiss3");
}

// ---------------------------------------------------------------------------
// composition

std::string ResampleProvenance::to_json_line() const {
    nlohmann::json j;
    j["over"] = over;
    j["under"] = under;
    j["counts_in"] = counts_in;
    j["counts_mid"] = counts_mid;
    j["counts_out"] = counts_out;
    j["warnings"] = warnings;
    return j.dump();
}

FlowTable apply_spec(const FlowTable& train, const ResampleSpec& spec,
                     const GenerativeOversampleFn& generative, std::uint64_t seed,
                     ResampleProvenance* provenance) {
    train.validate();
    ResampleProvenance prov;
    prov.over = to_string(spec.over);
    prov.under = to_string(spec.under);
    prov.counts_in = train.class_counts();

    FlowTable mid;
    const std::uint64_t over_seed = rng::derive(seed, {"over", prov.over});
    switch (spec.over) {
        case Oversampler::None: mid = train; break;
        case Oversampler::ROS: mid = random_oversample(train, over_seed); break;
        case Oversampler::SMOTE: mid = smote(train, spec.params.smote_k, over_seed); break;
        case Oversampler::ADASYN: mid = adasyn(train, spec.params.adasyn_k, over_seed); break;
        default:
            if (!generative)
                throw Error("spec " + spec.to_string() + " needs a generative oversampler");
            mid = generative(train, spec.over, over_seed);
            break;
    }
    prov.counts_mid = mid.class_counts();

    FlowTable out;
    const std::uint64_t under_seed = rng::derive(seed, {"under", prov.under});
    std::vector<Index> keep;
    bool is_cleaner = false;
    switch (spec.under) {
        case Undersampler::None: out = mid; break;
        case Undersampler::RUS: out = random_undersample(mid, under_seed); break;
        case Undersampler::Tomek:
            keep = tomek_keep_indices(mid);
            is_cleaner = true;
            break;
        case Undersampler::ENN:
            keep = enn_keep_indices(mid, spec.params.enn_k);
            is_cleaner = true;
            break;
        case Undersampler::NCR:
            keep = ncr_keep_indices(mid, spec.params.ncr_k);
            is_cleaner = true;
            break;
        case Undersampler::NM3:
            keep = nearmiss3_keep_indices(mid);
            is_cleaner = true;
            break;
    }
    if (is_cleaner) {
        // restore any class the cleaner emptied
        auto counts = counts_of(mid, keep);
        std::vector<bool> restore(counts.size(), false);
        bool any_restore = false;
        for (std::size_t c = 0; c < counts.size(); ++c)
            if (counts[c] == 0) {
                restore[c] = true;
                any_restore = true;
                prov.warnings.push_back(prov.under + " emptied class '" + mid.class_names[c] +
                                        "'; original rows restored");
            }
        if (any_restore) {
            std::vector<Index> merged;
            std::set<Index> kept_set(keep.begin(), keep.end());
            for (Index i = 0; i < mid.rows(); ++i) {
                if (kept_set.count(i) ||
                    restore[static_cast<std::size_t>(mid.labels[i])])
                    merged.push_back(i);
            }
            keep = std::move(merged);
        }
        out = mid.select_rows(keep);
    }

    prov.counts_out = out.class_counts();
    if (provenance) *provenance = std::move(prov);
    out.validate();
    return out;
}

}  // namespace nfb
