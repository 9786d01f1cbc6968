#include "nfbench/flow_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "nfbench/csv.hpp"
#include "nfbench/rng.hpp"

namespace nfb {

using nlohmann::json;

std::vector<Eigen::Index> FlowTable::class_counts() const {
    std::vector<Eigen::Index> counts(class_names.size(), 0);
    for (Eigen::Index i = 0; i < labels.size(); ++i) counts[static_cast<std::size_t>(labels[i])]++;
    return counts;
}

std::vector<std::vector<Eigen::Index>> FlowTable::rows_by_class() const {
    std::vector<std::vector<Eigen::Index>> out(class_names.size());
    for (Eigen::Index i = 0; i < labels.size(); ++i)
        out[static_cast<std::size_t>(labels[i])].push_back(i);
    return out;
}

FlowTable FlowTable::select_rows(std::span<const Eigen::Index> idx) const {
    FlowTable out;
    out.class_names = class_names;
    out.feature_names = feature_names;
    out.features.resize(static_cast<Eigen::Index>(idx.size()), features.cols());
    out.labels.resize(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out.features.row(static_cast<Eigen::Index>(i)) = features.row(idx[i]);
        out.labels[static_cast<Eigen::Index>(i)] = labels[idx[i]];
    }
    return out;
}

void FlowTable::validate() const {
    if (features.rows() != labels.size())
        throw Error("FlowTable: feature rows and label count differ");
    if (static_cast<std::size_t>(features.cols()) != feature_names.size())
        throw Error("FlowTable: feature columns and feature names differ");
    const int k = class_count();
    if (k == 0) throw Error("FlowTable: no classes declared");
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        int c = labels[i];
        if (c < 0 || c >= k) throw Error("FlowTable: label out of range");
        counts[static_cast<std::size_t>(c)]++;
    }
    for (int c = 0; c < k; ++c)
        if (counts[static_cast<std::size_t>(c)] == 0)
            throw Error("FlowTable: declared class '" + class_names[static_cast<std::size_t>(c)] +
                        "' has no rows");
    for (Eigen::Index i = 0; i < features.rows(); ++i)
        for (Eigen::Index j = 0; j < features.cols(); ++j) {
            double v = features(i, j);
            if (!(v >= 0.0 && v <= 1.0))
                throw Error("FlowTable: feature value outside [0,1]");
        }
}

// ---------------------------------------------------------------------------
// ingest

FlowTable ingest_csv_stream(std::istream& in, const FeatureSchema& schema, IngestReport* report) {
    schema.validate();
    csv::Reader reader(in);
    std::vector<std::string> header;
    if (!reader.next(header)) throw IngestError("empty CSV file");

    std::map<std::string, std::size_t> col_of;
    for (std::size_t i = 0; i < header.size(); ++i) col_of[header[i]] = i;

    const auto feat_idx = schema.feature_indices();
    std::vector<std::size_t> feat_cols;
    for (auto fi : feat_idx) {
        auto it = col_of.find(schema.fields[fi].name);
        if (it == col_of.end())
            throw IngestError("CSV is missing required column '" + schema.fields[fi].name + "'");
        feat_cols.push_back(it->second);
    }
    auto lbl_it = col_of.find(schema.label_field().name);
    if (lbl_it == col_of.end())
        throw IngestError("CSV is missing label column '" + schema.label_field().name + "'");
    const std::size_t label_col = lbl_it->second;

    std::map<std::string, int> class_id;
    std::vector<std::string> class_names;
    for (const auto& c : schema.class_order) {
        class_id[c] = static_cast<int>(class_names.size());
        class_names.push_back(c);
    }
    const bool fixed_order = !schema.class_order.empty();

    std::vector<double> values;
    std::vector<int> labels;
    std::size_t clipped = 0;
    std::vector<std::string> row;
    std::size_t line = 1;
    while (reader.next(row)) {
        ++line;
        if (row.size() == 1 && row[0].empty()) continue;  // trailing blank line
        if (row.size() < header.size())
            throw IngestError("row " + std::to_string(line) + " has too few fields");
        for (std::size_t i = 0; i < feat_cols.size(); ++i) {
            const auto& field = schema.fields[feat_idx[i]];
            double v;
            try {
                v = csv::parse_double(row[feat_cols[i]]);
            } catch (const std::exception&) {
                throw IngestError("row " + std::to_string(line) + ", column '" + field.name +
                                  "': non-numeric value '" + row[feat_cols[i]] + "'");
            }
            double norm = (v - field.range_min) / (field.range_max - field.range_min);
            if (norm < 0.0) {
                norm = 0.0;
                ++clipped;
            } else if (norm > 1.0) {
                norm = 1.0;
                ++clipped;
            }
            values.push_back(norm);
        }
        const std::string& cls = row[label_col];
        auto it = class_id.find(cls);
        if (it == class_id.end()) {
            if (fixed_order)
                throw IngestError("row " + std::to_string(line) + ": label '" + cls +
                                  "' not in schema class_order");
            int id = static_cast<int>(class_names.size());
            it = class_id.emplace(cls, id).first;
            class_names.push_back(cls);
        }
        labels.push_back(it->second);
    }
    if (labels.empty()) throw IngestError("CSV contains no data rows");

    FlowTable table;
    table.feature_names = schema.feature_names();
    table.class_names = class_names;
    const Eigen::Index n = static_cast<Eigen::Index>(labels.size());
    const Eigen::Index d = static_cast<Eigen::Index>(feat_cols.size());
    table.features.resize(n, d);
    table.labels.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        table.labels[i] = labels[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < d; ++j)
            table.features(i, j) = values[static_cast<std::size_t>(i * d + j)];
    }
    if (report) {
        report->rows = labels.size();
        report->clipped_values = clipped;
    }
    table.validate();
    return table;
}

FlowTable ingest_csv(const std::filesystem::path& path, const FeatureSchema& schema,
                     IngestReport* report) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open CSV file " + path.string());
    return ingest_csv_stream(in, schema, report);
}

// ---------------------------------------------------------------------------
// persistence

void save_flow_table(const FlowTable& table, const std::filesystem::path& csv_path,
                     const std::filesystem::path& sidecar_path) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw Error("cannot write " + csv_path.string());
    std::vector<std::string> row = table.feature_names;
    row.push_back("label");
    csv::write_row(out, row);
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
        row.clear();
        for (Eigen::Index j = 0; j < table.dims(); ++j)
            row.push_back(csv::format_double(table.features(i, j)));
        row.push_back(std::to_string(table.labels[i]));
        csv::write_row(out, row);
    }

    json side;
    side["class_names"] = table.class_names;
    side["feature_names"] = table.feature_names;
    std::ofstream sout(sidecar_path, std::ios::binary);
    if (!sout) throw Error("cannot write " + sidecar_path.string());
    sout << side.dump(2) << "\n";
}

FlowTable load_flow_table(const std::filesystem::path& csv_path,
                          const std::filesystem::path& sidecar_path) {
    std::ifstream sin(sidecar_path);
    if (!sin) throw Error("cannot open sidecar " + sidecar_path.string());
    json side = json::parse(sin);

    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw Error("cannot open " + csv_path.string());
    csv::Reader reader(in);
    std::vector<std::string> header;
    if (!reader.next(header)) throw Error("empty table file " + csv_path.string());
    if (header.empty() || header.back() != "label")
        throw Error("table file must end with a 'label' column");

    FlowTable table;
    table.feature_names.assign(header.begin(), header.end() - 1);
    table.class_names = side["class_names"].get<std::vector<std::string>>();

    std::vector<double> values;
    std::vector<int> labels;
    std::vector<std::string> row;
    while (reader.next(row)) {
        if (row.size() == 1 && row[0].empty()) continue;
        if (row.size() != header.size()) throw Error("ragged row in " + csv_path.string());
        for (std::size_t j = 0; j + 1 < row.size(); ++j)
            values.push_back(csv::parse_double(row[j]));
        labels.push_back(static_cast<int>(csv::parse_long(row.back())));
    }
    const Eigen::Index n = static_cast<Eigen::Index>(labels.size());
    const Eigen::Index d = static_cast<Eigen::Index>(table.feature_names.size());
    table.features.resize(n, d);
    table.labels.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        table.labels[i] = labels[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < d; ++j)
            table.features(i, j) = values[static_cast<std::size_t>(i * d + j)];
    }
    table.validate();
    return table;
}

// ---------------------------------------------------------------------------
// split / subsample

SplitPair stratified_split(const FlowTable& table, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw Error("train_fraction must be in (0,1)");
    auto by_class = table.rows_by_class();
    for (std::size_t c = 0; c < by_class.size(); ++c)
        if (by_class[c].size() < 2)
            throw Error("class '" + table.class_names[c] + "' has fewer than 2 rows");

    std::vector<Eigen::Index> train_idx, test_idx;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto rows = by_class[c];
        rng::Engine eng(rng::mix(seed, static_cast<std::uint64_t>(c) + 1));
        eng.shuffle(rows);
        const auto n_c = static_cast<double>(rows.size());
        // round-half-up with a floor of one row on each side
        Eigen::Index n_train =
            static_cast<Eigen::Index>(std::floor(train_fraction * n_c + 0.5));
        n_train = std::clamp<Eigen::Index>(n_train, 1, static_cast<Eigen::Index>(rows.size()) - 1);
        train_idx.insert(train_idx.end(), rows.begin(), rows.begin() + n_train);
        test_idx.insert(test_idx.end(), rows.begin() + n_train, rows.end());
    }

    SplitPair pair;
    pair.train = table.select_rows(train_idx);
    pair.test = table.select_rows(test_idx);
    pair.seed = seed;
    pair.train_fraction = train_fraction;
    return pair;
}

FlowTable subsample(const FlowTable& table, Eigen::Index per_class_cap, std::uint64_t seed) {
    if (per_class_cap < 2) throw Error("per_class_cap must be >= 2");
    auto by_class = table.rows_by_class();
    std::vector<Eigen::Index> keep;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto rows = by_class[c];
        if (static_cast<Eigen::Index>(rows.size()) > per_class_cap) {
            rng::Engine eng(rng::mix(seed, static_cast<std::uint64_t>(c) + 1));
            eng.shuffle(rows);
            rows.resize(static_cast<std::size_t>(per_class_cap));
        }
        keep.insert(keep.end(), rows.begin(), rows.end());
    }
    std::sort(keep.begin(), keep.end());
    return table.select_rows(keep);
}

// ---------------------------------------------------------------------------
// surrogates

namespace {

struct ClassBlueprint {
    std::string name;
    Eigen::Index count;
    // mixture of up to two diagonal Gaussians in normalized feature space
    std::vector<double> mean_a;
    std::vector<double> sigma_a;
    std::vector<double> mean_b;  // empty -> single component
    std::vector<double> sigma_b;
    double weight_b = 0.0;
};

// Feature order matches the shipped schema files.
const std::vector<std::string> kSurrogateFeatures = {
    "PROTOCOL", "TCP_FLAGS", "IN_BYTES", "OUT_BYTES",
    "IN_PKTS",  "OUT_PKTS",  "FLOW_DURATION_MILLISECONDS"};

std::vector<ClassBlueprint> bot_iot_blueprints() {
    // Counts follow the published NF-BoT-IoT roster; class 0 = Benign.
    // DoS/DDoS overlap strongly on purpose so cleaning methods have work.
    return {
        {"Benign", 13859,
         {0.30, 0.20, 0.30, 0.35, 0.30, 0.30, 0.45}, {0.20, 0.15, 0.18, 0.20, 0.18, 0.18, 0.25},
         {0.70, 0.55, 0.55, 0.60, 0.55, 0.55, 0.70}, {0.15, 0.12, 0.15, 0.15, 0.15, 0.15, 0.15},
         0.35},
        {"Theft", 1909,
         {0.85, 0.75, 0.80, 0.20, 0.70, 0.25, 0.80}, {0.05, 0.06, 0.07, 0.05, 0.06, 0.05, 0.08},
         {}, {}, 0.0},
        {"DDoS", 56844,
         {0.55, 0.45, 0.15, 0.10, 0.20, 0.12, 0.25}, {0.08, 0.08, 0.06, 0.05, 0.07, 0.05, 0.10},
         {0.60, 0.50, 0.20, 0.15, 0.25, 0.15, 0.30}, {0.10, 0.10, 0.08, 0.06, 0.08, 0.06, 0.12},
         0.30},
        {"DoS", 56833,
         {0.57, 0.47, 0.17, 0.12, 0.22, 0.13, 0.27}, {0.08, 0.08, 0.06, 0.05, 0.07, 0.05, 0.10},
         {0.40, 0.35, 0.30, 0.25, 0.35, 0.28, 0.45}, {0.09, 0.09, 0.08, 0.07, 0.08, 0.07, 0.10},
         0.25},
        {"Reconnaissance", 470655,
         {0.20, 0.60, 0.08, 0.06, 0.10, 0.08, 0.15}, {0.07, 0.10, 0.04, 0.03, 0.05, 0.04, 0.08},
         {0.28, 0.68, 0.14, 0.10, 0.16, 0.12, 0.22}, {0.08, 0.09, 0.05, 0.04, 0.06, 0.05, 0.09},
         0.40},
    };
}

std::vector<ClassBlueprint> generic_blueprints(const std::vector<std::string>& names,
                                               const std::vector<Eigen::Index>& counts,
                                               std::uint64_t layout_seed) {
    std::vector<ClassBlueprint> out;
    const std::size_t d = kSurrogateFeatures.size();
    rng::Engine eng(layout_seed);
    std::vector<std::vector<double>> centers;
    for (std::size_t c = 0; c < names.size(); ++c) {
        ClassBlueprint bp;
        bp.name = names[c];
        bp.count = counts[c];
        bp.mean_a.resize(d);
        bp.sigma_a.resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            bp.mean_a[j] = eng.uniform(0.12, 0.88);
            bp.sigma_a[j] = eng.uniform(0.04, 0.12);
        }
        if (c == 0) {
            // benign traffic is broad
            for (std::size_t j = 0; j < d; ++j) bp.sigma_a[j] = eng.uniform(0.15, 0.25);
        } else if (c % 3 == 0 && !centers.empty()) {
            // every third attack class leans onto the previous one
            const auto& prev = centers.back();
            for (std::size_t j = 0; j < d; ++j)
                bp.mean_a[j] = 0.35 * bp.mean_a[j] + 0.65 * prev[j];
        }
        centers.push_back(bp.mean_a);
        out.push_back(std::move(bp));
    }
    return out;
}

std::vector<ClassBlueprint> blueprints_for(const std::string& name) {
    if (name == "NF-BoT-IoT") return bot_iot_blueprints();
    if (name == "NF-ToN-IoT") {
        return generic_blueprints(
            {"Benign", "DoS", "Injection", "DDoS", "Scanning", "Password", "MITM", "XSS",
             "Backdoor", "Ransomware"},
            {270279, 17717, 468539, 326345, 21467, 156299, 1295, 99944, 17247, 142},
            rng::fnv1a("NF-ToN-IoT layout"));
    }
    if (name == "NF-UNSW-NB15") {
        return generic_blueprints(
            {"Benign", "Exploits", "Reconnaissance", "DoS", "Generic", "Shellcode", "Backdoor",
             "Fuzzers", "Worms", "Analysis"},
            {1550712, 24736, 12291, 5051, 5570, 1365, 1782, 19463, 153, 1995},
            rng::fnv1a("NF-UNSW-NB15 layout"));
    }
    throw Error("unknown surrogate dataset '" + name + "'");
}

}  // namespace

bool is_known_surrogate(const std::string& dataset_name) {
    return dataset_name == "NF-BoT-IoT" || dataset_name == "NF-ToN-IoT" ||
           dataset_name == "NF-UNSW-NB15";
}

FlowTable make_surrogate(const std::string& dataset_name, std::uint64_t seed, double scale) {
    if (!(scale > 0.0 && scale <= 1.0)) throw Error("surrogate scale must be in (0,1]");
    auto blueprints = blueprints_for(dataset_name);

    FlowTable table;
    table.feature_names = kSurrogateFeatures;
    const Eigen::Index d = static_cast<Eigen::Index>(kSurrogateFeatures.size());

    Eigen::Index total = 0;
    std::vector<Eigen::Index> counts;
    for (const auto& bp : blueprints) {
        Eigen::Index n =
            std::max<Eigen::Index>(4, static_cast<Eigen::Index>(std::floor(scale * double(bp.count))));
        counts.push_back(n);
        total += n;
        table.class_names.push_back(bp.name);
    }

    table.features.resize(total, d);
    table.labels.resize(total);
    Eigen::Index row = 0;
    for (std::size_t c = 0; c < blueprints.size(); ++c) {
        const auto& bp = blueprints[c];
        rng::Engine eng(rng::derive(seed, {"surrogate", dataset_name, bp.name}));
        for (Eigen::Index i = 0; i < counts[c]; ++i) {
            const bool use_b = !bp.mean_b.empty() && eng.uniform() < bp.weight_b;
            const auto& mean = use_b ? bp.mean_b : bp.mean_a;
            const auto& sigma = use_b ? bp.sigma_b : bp.sigma_a;
            for (Eigen::Index j = 0; j < d; ++j) {
                double v = mean[static_cast<std::size_t>(j)] +
                           sigma[static_cast<std::size_t>(j)] * eng.normal();
                table.features(row, j) = std::clamp(v, 0.0, 1.0);
            }
            table.labels[row] = static_cast<int>(c);
            ++row;
        }
    }
    return table;
}

// ---------------------------------------------------------------------------

std::string content_hash(const FlowTable& table) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (Eigen::Index i = 0; i < table.rows(); ++i)
        for (Eigen::Index j = 0; j < table.dims(); ++j) {
            double v = table.features(i, j);
            feed(&v, sizeof(v));
        }
    for (Eigen::Index i = 0; i < table.labels.size(); ++i) {
        int l = table.labels[i];
        feed(&l, sizeof(l));
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace nfb
