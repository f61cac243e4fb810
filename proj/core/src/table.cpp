#include "fsoqos/table.hpp"

#include <cmath>
#include <stdexcept>

namespace fsoqos {

LabeledTable::LabeledTable(std::vector<std::string> feature_names, std::vector<double> features,
                           std::vector<double> targets, std::vector<std::string> groups)
    : feature_names_(std::move(feature_names)),
      features_(std::move(features)),
      targets_(std::move(targets)),
      groups_(std::move(groups)) {
    validate();
}

void LabeledTable::validate() const {
    if (feature_names_.empty()) throw std::domain_error("table needs at least one feature column");
    if (features_.size() != targets_.size() * feature_names_.size()) {
        throw std::domain_error("feature matrix size does not match rows x columns");
    }
    if (!groups_.empty() && groups_.size() != targets_.size()) {
        throw std::domain_error("group labels must cover every row");
    }
    for (double v : features_) {
        if (!std::isfinite(v)) throw std::domain_error("non-finite feature value");
    }
    for (double v : targets_) {
        if (!std::isfinite(v)) throw std::domain_error("non-finite target value");
    }
}

LabeledTable LabeledTable::subset(std::span<const std::size_t> indices) const {
    std::vector<double> features;
    std::vector<double> targets;
    std::vector<std::string> groups;
    features.reserve(indices.size() * cols());
    targets.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= rows()) throw std::out_of_range("row index out of range");
        auto r = row(i);
        features.insert(features.end(), r.begin(), r.end());
        targets.push_back(targets_[i]);
        if (has_groups()) groups.push_back(groups_[i]);
    }
    return LabeledTable(feature_names_, std::move(features), std::move(targets), std::move(groups));
}

LabeledTable LabeledTable::with_targets(std::vector<double> targets) const {
    return LabeledTable(feature_names_, features_, std::move(targets), groups_);
}

LabeledTable LabeledTable::concat(const LabeledTable& other) const {
    if (other.feature_names_ != feature_names_) throw std::domain_error("cannot concatenate tables with different features");
    if (has_groups() != other.has_groups() && !empty() && !other.empty()) {
        throw std::domain_error("cannot concatenate grouped and ungrouped tables");
    }
    auto features = features_;
    features.insert(features.end(), other.features_.begin(), other.features_.end());
    auto targets = targets_;
    targets.insert(targets.end(), other.targets_.begin(), other.targets_.end());
    auto groups = groups_;
    groups.insert(groups.end(), other.groups_.begin(), other.groups_.end());
    return LabeledTable(feature_names_, std::move(features), std::move(targets), std::move(groups));
}

void require_dimension(std::span<const double> x, std::size_t expected) {
    if (x.size() != expected) {
        throw std::domain_error("feature vector has " + std::to_string(x.size()) + " entries, model expects " +
                                std::to_string(expected));
    }
}

}  // namespace fsoqos
