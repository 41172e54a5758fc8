#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cat/dataset.hpp"
#include "cat/expected.hpp"

namespace cat {

struct AgeGroup {
    std::string label;
    int min_age = 0;  // inclusive
    int max_age = 0;  // inclusive

    [[nodiscard]] bool contains(int age) const noexcept { return age >= min_age && age <= max_age; }
    friend bool operator==(const AgeGroup&, const AgeGroup&) = default;
};

inline constexpr std::string_view kUnassigned = "unassigned";

/// "3-6,10-13" -> two groups labelled "3-6" and "10-13". Rejects overlaps.
Expected<std::vector<AgeGroup>, std::string> parse_age_bands(std::string_view spec);
std::vector<AgeGroup> default_age_bands();

/// Age per student id: the age field, or birth date against the session date.
std::map<std::string, std::optional<int>> student_ages(const Dataset& ds);

/// Integer half-up rounding of num/den for non-negative values.
std::int64_t round_half_up(std::int64_t num, std::int64_t den);
/// Whole minutes, half-up.
std::int64_t to_minutes(std::int64_t ms);

// ---------------------------------------------------------------------------

struct TimeRow {
    std::string category;  // GF, G, PF, P or Total
    std::size_t students = 0;
    std::int64_t avg_min = 0;
    std::int64_t min_min = 0;
    std::int64_t max_min = 0;
    friend bool operator==(const TimeRow&, const TimeRow&) = default;
};

struct TimeReport {
    std::vector<TimeRow> rows;
    std::vector<std::string> notices;
};

/// Validation-module time per student and interaction category.
TimeReport time_by_interaction(const Dataset& ds);

// ---------------------------------------------------------------------------

struct SuccessCell {
    int solved = 0;
    int attempted = 0;
    /// "3/6 (50%)", or "0/0 (—)".
    [[nodiscard]] std::string text() const;
    friend bool operator==(const SuccessCell&, const SuccessCell&) = default;
};

struct SuccessReport {
    std::vector<std::string> groups;   // band labels, plus "unassigned" when needed
    std::vector<std::string> schemas;  // validation schema ids in first-seen order
    std::map<std::string, std::map<std::string, SuccessCell>> cells;  // schema -> group -> cell
    std::map<std::string, int> group_sizes;
    std::vector<std::string> notices;

    [[nodiscard]] SuccessCell at(const std::string& schema, const std::string& group) const;
};

SuccessReport success_by_schema(const Dataset& ds, const std::vector<AgeGroup>& groups);

// ---------------------------------------------------------------------------

inline constexpr std::string_view kInteractionOrder[] = {"GF", "G", "PF", "P"};
inline constexpr std::string_view kDimensionOrder[] = {"D0", "D1", "D2"};

struct StrategyGroup {
    std::string label;
    int records = 0;
    std::map<std::string, std::map<std::string, int>> counts;   // dimension -> interaction -> n
    std::map<std::string, std::map<std::string, int>> percent;  // same keys, sums to 100
};

struct StrategyReport {
    std::vector<StrategyGroup> groups;
    std::vector<std::string> notices;
    std::vector<std::string> warnings;
};

StrategyReport strategy_distribution(const Dataset& ds, const std::vector<AgeGroup>& groups);

// ---------------------------------------------------------------------------

enum class ReportFormat { text, csv, json };

std::optional<ReportFormat> parse_report_format(std::string_view s) noexcept;

std::string render(const TimeReport& r, ReportFormat f);
std::string render(const SuccessReport& r, ReportFormat f);
std::string render(const StrategyReport& r, ReportFormat f);

}  // namespace cat
