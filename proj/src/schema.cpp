#include "nfbench/schema.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace nfb {

using nlohmann::json;

std::string to_string(FieldRole role) {
    switch (role) {
        case FieldRole::Feature: return "feature";
        case FieldRole::Dropped: return "dropped";
        case FieldRole::Label: return "label";
    }
    return "?";
}

FieldRole field_role_from_string(const std::string& s) {
    if (s == "feature") return FieldRole::Feature;
    if (s == "dropped") return FieldRole::Dropped;
    if (s == "label") return FieldRole::Label;
    throw SchemaError("unknown field role '" + s + "'");
}

std::vector<std::size_t> FeatureSchema::feature_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fields.size(); ++i)
        if (fields[i].role == FieldRole::Feature) out.push_back(i);
    return out;
}

std::vector<std::string> FeatureSchema::feature_names() const {
    std::vector<std::string> out;
    for (const auto& f : fields)
        if (f.role == FieldRole::Feature) out.push_back(f.name);
    return out;
}

const SchemaField& FeatureSchema::label_field() const {
    for (const auto& f : fields)
        if (f.role == FieldRole::Label) return f;
    throw SchemaError("schema has no label field");
}

void FeatureSchema::validate() const {
    std::set<std::string> names;
    std::size_t labels = 0;
    for (const auto& f : fields) {
        if (!names.insert(f.name).second)
            throw SchemaError("duplicate field name '" + f.name + "'");
        if (f.role == FieldRole::Label) ++labels;
        if (f.role == FieldRole::Feature && !(f.range_min < f.range_max))
            throw SchemaError("field '" + f.name + "': range_min must be < range_max");
    }
    if (labels == 0) throw SchemaError("schema declares no label field");
    if (labels > 1) throw SchemaError("schema declares multiple label fields");
    std::set<std::string> classes(class_order.begin(), class_order.end());
    if (classes.size() != class_order.size())
        throw SchemaError("class_order contains duplicates");
}

FeatureSchema FeatureSchema::identity(const std::vector<std::string>& feature_names,
                                      const std::string& label_name) {
    FeatureSchema s;
    for (const auto& n : feature_names)
        s.fields.push_back({n, FieldRole::Feature, 0.0, 1.0});
    s.fields.push_back({label_name, FieldRole::Label, 0.0, 0.0});
    return s;
}

FeatureSchema schema_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed schema JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("fields") || !j["fields"].is_array())
        throw SchemaError("schema JSON must be an object with a 'fields' array");

    FeatureSchema schema;
    for (const auto& jf : j["fields"]) {
        SchemaField f;
        if (!jf.contains("name") || !jf.contains("role"))
            throw SchemaError("schema field needs 'name' and 'role'");
        f.name = jf["name"].get<std::string>();
        f.role = field_role_from_string(jf["role"].get<std::string>());
        if (f.role == FieldRole::Feature) {
            if (!jf.contains("min") || !jf.contains("max"))
                throw SchemaError("feature field '" + f.name + "' needs 'min' and 'max'");
            f.range_min = jf["min"].get<double>();
            f.range_max = jf["max"].get<double>();
        }
        schema.fields.push_back(std::move(f));
    }
    if (j.contains("class_order")) {
        for (const auto& c : j["class_order"])
            schema.class_order.push_back(c.get<std::string>());
    }
    schema.validate();
    return schema;
}

std::string schema_to_json_text(const FeatureSchema& schema) {
    json j;
    j["fields"] = json::array();
    for (const auto& f : schema.fields) {
        json jf;
        jf["name"] = f.name;
        jf["role"] = to_string(f.role);
        if (f.role == FieldRole::Feature) {
            jf["min"] = f.range_min;
            jf["max"] = f.range_max;
        }
        j["fields"].push_back(jf);
    }
    if (!schema.class_order.empty()) j["class_order"] = schema.class_order;
    return j.dump(2) + "\n";
}

FeatureSchema load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open schema file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return schema_from_json_text(ss.str());
}

}  // namespace nfb
