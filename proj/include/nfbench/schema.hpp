#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nfbench/errors.hpp"

namespace nfb {

enum class FieldRole { Feature, Dropped, Label };

std::string to_string(FieldRole role);
FieldRole field_role_from_string(const std::string& s);

struct SchemaField {
    std::string name;
    FieldRole role = FieldRole::Feature;
    // Normalization range; meaningful only for role == Feature.
    double range_min = 0.0;
    double range_max = 1.0;
};

// Declares each column's role and its fixed min-max normalization range.
// The ranges are data, not code: the shipped schema files carry defaults
// taken from the NetFlow V9 field widths and can be edited freely.
struct FeatureSchema {
    std::vector<SchemaField> fields;
    // Optional fixed class-id ordering; when empty, ingest assigns ids by
    // first appearance of each label string.
    std::vector<std::string> class_order;

    std::vector<std::size_t> feature_indices() const;
    std::vector<std::string> feature_names() const;
    const SchemaField& label_field() const;

    // Throws SchemaError on: no/multiple labels, duplicate names, min >= max.
    void validate() const;

    // All-feature schema with range [0,1] per column; used when reloading
    // already-normalized tables.
    static FeatureSchema identity(const std::vector<std::string>& feature_names,
                                  const std::string& label_name = "label");
};

FeatureSchema load_schema(const std::filesystem::path& path);
FeatureSchema schema_from_json_text(const std::string& text);
std::string schema_to_json_text(const FeatureSchema& schema);

}  // namespace nfb
