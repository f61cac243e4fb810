#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fsoqos {

/// Feature matrix (row-major, m x k) with one real target per row.
///
/// `groups` optionally labels each row (the station a row came from); it is
/// carried through subsetting but never used as a feature.
class LabeledTable {
public:
    LabeledTable() = default;
    LabeledTable(std::vector<std::string> feature_names, std::vector<double> features, std::vector<double> targets,
                 std::vector<std::string> groups = {});

    std::size_t rows() const noexcept { return targets_.size(); }
    std::size_t cols() const noexcept { return feature_names_.size(); }
    bool empty() const noexcept { return targets_.empty(); }

    std::span<const double> row(std::size_t i) const { return {features_.data() + i * cols(), cols()}; }
    double at(std::size_t i, std::size_t j) const { return features_[i * cols() + j]; }
    double target(std::size_t i) const { return targets_[i]; }

    const std::vector<double>& features() const noexcept { return features_; }
    const std::vector<double>& targets() const noexcept { return targets_; }
    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
    const std::vector<std::string>& groups() const noexcept { return groups_; }
    bool has_groups() const noexcept { return !groups_.empty(); }

    /// Rows in the given order (duplicates allowed).
    LabeledTable subset(std::span<const std::size_t> indices) const;
    LabeledTable with_targets(std::vector<double> targets) const;
    /// Rows appended from `other`; feature names must match.
    LabeledTable concat(const LabeledTable& other) const;

private:
    void validate() const;

    std::vector<std::string> feature_names_;
    std::vector<double> features_;
    std::vector<double> targets_;
    std::vector<std::string> groups_;
};

/// Throws std::domain_error if x does not have `expected` entries.
void require_dimension(std::span<const double> x, std::size_t expected);

}  // namespace fsoqos
