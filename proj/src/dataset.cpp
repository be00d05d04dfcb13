#include "biplot/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "biplot/errors.hpp"

namespace biplot {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failure: " + path);
    return ss.str();
}

bool parse_integer(const std::string& s, long long& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    if (b == e) return false;
    auto [ptr, ec] = std::from_chars(b, e, out);
    return ec == std::errc{} && ptr == e;
}

// ISO calendar date YYYY-MM-DD, encoded as a sortable integer.
bool parse_iso_date(const std::string& s, long long& key) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    auto digits = [](const std::string& str, size_t from, size_t len, long long& v) {
        v = 0;
        for (size_t i = from; i < from + len; ++i) {
            if (str[i] < '0' || str[i] > '9') return false;
            v = v * 10 + (str[i] - '0');
        }
        return true;
    };
    long long y, m, d;
    if (!digits(s, 0, 4, y) || !digits(s, 5, 2, m) || !digits(s, 8, 2, d)) return false;
    if (m < 1 || m > 12 || d < 1 || d > 31) return false;
    key = y * 10000 + m * 100 + d;
    return true;
}

}  // namespace

bool parse_strict_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    const char* ee = e;
    while (ee > b && (ee[-1] == ' ' || ee[-1] == '\t')) --ee;
    if (b == ee) return false;
    auto [ptr, ec] = std::from_chars(b, ee, out);
    return ec == std::errc{} && ptr == ee && std::isfinite(out);
}

std::vector<std::vector<std::string>> parse_csv_records(const std::string& text,
                                                        const std::string& source_name) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    size_t line = 1;

    size_t i = 0;
    // strip a UTF-8 BOM if present
    if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
        static_cast<unsigned char>(text[1]) == 0xBB &&
        static_cast<unsigned char>(text[2]) == 0xBF) {
        i = 3;
    }

    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(fields));
        fields.clear();
    };

    for (; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field.empty() && !field_started) {
                    in_quotes = true;
                    field_started = true;
                } else {
                    throw DataError(source_name + ": stray quote at line " +
                                    std::to_string(line));
                }
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') {
                    end_record();
                    ++line;
                    ++i;
                } else {
                    field += c;  // lone CR kept as data
                }
                break;
            case '\n':
                end_record();
                ++line;
                break;
            default:
                field += c;
                field_started = true;
                break;
        }
    }
    if (in_quotes) throw DataError(source_name + ": unterminated quoted field");
    if (field_started || !field.empty() || !fields.empty()) end_record();
    return records;
}

namespace {

std::vector<std::string> ordered_distinct(const std::vector<std::string>& labels) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& l : labels) {
        if (seen.insert(l).second) out.push_back(l);
    }
    return out;
}

// Natural ascending order when every level parses uniformly as an integer or
// as an ISO date; first-appearance order otherwise.
std::vector<std::string> natural_level_order(std::vector<std::string> levels) {
    std::vector<std::pair<long long, std::string>> keyed;
    keyed.reserve(levels.size());
    bool all_int = true;
    for (const auto& l : levels) {
        long long v;
        if (!parse_integer(l, v)) {
            all_int = false;
            break;
        }
        keyed.emplace_back(v, l);
    }
    if (!all_int) {
        keyed.clear();
        for (const auto& l : levels) {
            long long v;
            if (!parse_iso_date(l, v)) return levels;  // first appearance
            keyed.emplace_back(v, l);
        }
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::string> out;
    out.reserve(keyed.size());
    for (auto& [k, l] : keyed) out.push_back(std::move(l));
    return out;
}

}  // namespace

Dataset ingest_csv_text(const std::string& text, const std::string& source_name,
                        const std::string& time_var, const std::string& group_var,
                        const std::vector<std::string>& level_order) {
    auto records = parse_csv_records(text, source_name);
    if (records.empty()) throw DataError(source_name + ": empty file");

    const auto& header = records.front();
    auto find_col = [&](const std::string& name) -> Index {
        for (size_t j = 0; j < header.size(); ++j) {
            if (header[j] == name) return static_cast<Index>(j);
        }
        throw DataError(source_name + ": no column named \"" + name + "\"");
    };

    const Index time_col = find_col(time_var);
    const Index group_col = group_var.empty() ? Index{-1} : find_col(group_var);
    if (group_col == time_col && !group_var.empty())
        throw ConfigError("time and group variables name the same column: " + time_var);

    std::vector<Index> numeric_cols;
    for (Index j = 0; j < static_cast<Index>(header.size()); ++j) {
        if (j != time_col && j != group_col) numeric_cols.push_back(j);
    }
    if (numeric_cols.size() < 2)
        throw DataError(source_name + ": a biplot needs at least 2 numeric columns, got " +
                        std::to_string(numeric_cols.size()));

    const Index n = static_cast<Index>(records.size()) - 1;
    if (n < 1) throw DataError(source_name + ": no data rows");
    const Index p = static_cast<Index>(numeric_cols.size());

    Dataset d;
    d.numeric_block.resize(n, p);
    d.time_labels.reserve(n);
    d.group_labels.reserve(n);
    for (Index j : numeric_cols) d.variable_names.push_back(header[j]);
    d.column_units.assign(p, "");

    for (Index r = 0; r < n; ++r) {
        const auto& rec = records[r + 1];
        if (rec.size() != header.size())
            throw DataError(source_name + ": row " + std::to_string(r + 2) + " has " +
                            std::to_string(rec.size()) + " fields, expected " +
                            std::to_string(header.size()));
        d.time_labels.push_back(rec[time_col]);
        d.group_labels.push_back(group_col < 0 ? std::string("all") : rec[group_col]);
        for (Index jj = 0; jj < p; ++jj) {
            const std::string& cell = rec[numeric_cols[jj]];
            double v;
            if (!parse_strict_double(cell, v))
                throw DataError(source_name + ": cell \"" + cell + "\" at row " +
                                std::to_string(r + 2) + ", column \"" +
                                header[numeric_cols[jj]] + "\" is not a finite number");
            d.numeric_block(r, jj) = v;
        }
    }

    auto observed = ordered_distinct(d.time_labels);
    if (observed.size() < 2)
        throw DataError(source_name + ": time variable \"" + time_var + "\" has " +
                        std::to_string(observed.size()) +
                        " level(s); at least 2 are required");

    if (!level_order.empty()) {
        std::unordered_set<std::string> seen(observed.begin(), observed.end());
        std::unordered_set<std::string> used;
        for (const auto& l : level_order) {
            if (!seen.count(l))
                throw ConfigError("--level-order names unknown level \"" + l +
                                  "\" (would produce an empty slice)");
            if (!used.insert(l).second)
                throw ConfigError("--level-order repeats level \"" + l + "\"");
        }
        if (level_order.size() != observed.size())
            throw ConfigError("--level-order lists " + std::to_string(level_order.size()) +
                              " levels but the data has " + std::to_string(observed.size()));
        d.time_levels = level_order;
    } else {
        d.time_levels = natural_level_order(observed);
    }
    d.group_levels = ordered_distinct(d.group_labels);
    return d;
}

Dataset ingest_csv(const std::string& path, const std::string& time_var,
                   const std::string& group_var,
                   const std::vector<std::string>& level_order) {
    return ingest_csv_text(read_file(path), path, time_var, group_var, level_order);
}

std::vector<TimeSlice> slice_by_time(const Dataset& d) {
    std::unordered_map<std::string, size_t> slot;
    for (size_t i = 0; i < d.time_levels.size(); ++i) slot[d.time_levels[i]] = i;

    std::vector<TimeSlice> slices(d.time_levels.size());
    for (size_t i = 0; i < d.time_levels.size(); ++i) slices[i].level = d.time_levels[i];
    for (Index r = 0; r < d.n(); ++r) {
        auto it = slot.find(d.time_labels[r]);
        if (it == slot.end())
            throw DataError("row " + std::to_string(r + 1) + " has time label \"" +
                            d.time_labels[r] + "\" outside the level order");
        slices[it->second].row_indices.push_back(r);
    }
    for (const auto& s : slices) {
        if (s.row_indices.empty())
            throw DataError("time level \"" + s.level + "\" has no rows");
    }
    return slices;
}

}  // namespace biplot
