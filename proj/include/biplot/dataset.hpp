#pragma once

#include <string>
#include <vector>

#include "biplot/types.hpp"

namespace biplot {

/// Tabular numeric data plus one ordered time column and one group column.
/// The numeric block is guaranteed finite; the time variable has at least two
/// levels with a defined total order; p >= 2.
struct Dataset {
    Matrix numeric_block;                     // n x p
    std::vector<std::string> time_labels;     // length n
    std::vector<std::string> group_labels;    // length n
    std::vector<std::string> variable_names;  // length p
    std::vector<std::string> column_units;    // length p, may be empty strings
    std::vector<std::string> time_levels;     // distinct levels, in level order
    std::vector<std::string> group_levels;    // distinct groups, first-appearance order

    Index n() const { return numeric_block.rows(); }
    Index p() const { return numeric_block.cols(); }
};

/// Rows of one level of the time variable, in original row order.
struct TimeSlice {
    std::string level;
    std::vector<Index> row_indices;

    Index count() const { return static_cast<Index>(row_indices.size()); }
};

/// Parse an RFC-4180 CSV file (UTF-8, header row) into a Dataset. `time_var`
/// names the ordered category column; `group_var` the grouping column, or ""
/// for a single implicit group. All remaining columns must parse as finite
/// real numbers. Level order is natural ascending when every time label is an
/// integer or an ISO date, first-appearance order otherwise; `level_order`
/// overrides with an explicit permutation of the observed levels.
Dataset ingest_csv(const std::string& path, const std::string& time_var,
                   const std::string& group_var,
                   const std::vector<std::string>& level_order = {});

/// Same parsing starting from an in-memory CSV text.
Dataset ingest_csv_text(const std::string& text, const std::string& source_name,
                        const std::string& time_var, const std::string& group_var,
                        const std::vector<std::string>& level_order = {});

/// One TimeSlice per level, in level order; slices partition the rows.
std::vector<TimeSlice> slice_by_time(const Dataset& d);

/// Low-level CSV record reader shared with style/target ingestion.
std::vector<std::vector<std::string>> parse_csv_records(const std::string& text,
                                                        const std::string& source_name);

/// Full-match finite double parse (surrounding blanks tolerated).
bool parse_strict_double(const std::string& s, double& out);

}  // namespace biplot
