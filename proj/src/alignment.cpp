#include "biplot/alignment.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "biplot/errors.hpp"

namespace biplot {

ReflectAxis parse_reflect_axis(const std::string& token) {
    if (token == "x") return ReflectAxis::X;
    if (token == "y") return ReflectAxis::Y;
    if (token == "xy") return ReflectAxis::XY;
    throw ConfigError("--reflect must be one of x, y, xy; got \"" + token + "\"");
}

BiplotState apply_reflection(const BiplotState& state, ReflectAxis axis) {
    BiplotState out = state;
    if (axis == ReflectAxis::X || axis == ReflectAxis::XY) {
        out.Z.col(1) = -out.Z.col(1);
        out.V.col(1) = -out.V.col(1);
    }
    if (axis == ReflectAxis::Y || axis == ReflectAxis::XY) {
        out.Z.col(0) = -out.Z.col(0);
        out.V.col(0) = -out.V.col(0);
    }
    return out;
}

std::vector<BiplotState> reflect_at_levels(const std::vector<BiplotState>& states,
                                           const std::vector<std::string>& align_time,
                                           ReflectAxis axis) {
    std::unordered_set<std::string> known;
    for (const auto& s : states) known.insert(s.level);
    for (const auto& level : align_time) {
        if (!known.count(level)) {
            std::string valid;
            for (const auto& s : states) {
                if (!valid.empty()) valid += ", ";
                valid += s.level;
            }
            throw ConfigError("--align-time names unknown level \"" + level +
                              "\"; valid levels: " + valid);
        }
    }
    std::unordered_set<std::string> wanted(align_time.begin(), align_time.end());
    std::vector<BiplotState> out;
    out.reserve(states.size());
    for (const auto& s : states)
        out.push_back(wanted.count(s.level) ? apply_reflection(s, axis) : s);
    return out;
}

std::vector<Index> canonical_row_order(const BiplotState& state,
                                       const std::vector<std::string>& group_levels) {
    std::unordered_map<std::string, size_t> rank;
    for (size_t i = 0; i < group_levels.size(); ++i) rank.emplace(group_levels[i], i);

    // unlisted groups sort after listed ones, by name
    std::map<std::string, size_t> extra;
    for (const auto& g : state.group_of_row)
        if (!rank.count(g)) extra.emplace(g, 0);
    size_t next = group_levels.size();
    for (auto& [name, r] : extra) r = next++;

    std::vector<Index> order(state.group_of_row.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Index>(i);
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        const auto& ga = state.group_of_row[static_cast<size_t>(a)];
        const auto& gb = state.group_of_row[static_cast<size_t>(b)];
        const size_t ra = rank.count(ga) ? rank.at(ga) : extra.at(ga);
        const size_t rb = rank.count(gb) ? rank.at(gb) : extra.at(gb);
        return ra < rb;
    });
    return order;
}

namespace {

Config permuted_rows(const Config& Z, const std::vector<Index>& order) {
    Config out(Z.rows(), 2);
    for (Index i = 0; i < out.rows(); ++i) out.row(i) = Z.row(order[static_cast<size_t>(i)]);
    return out;
}

std::map<std::string, Index> group_counts(const BiplotState& s) {
    std::map<std::string, Index> counts;
    for (const auto& g : s.group_of_row) ++counts[g];
    return counts;
}

void check_balance(const std::vector<BiplotState>& states) {
    const auto ref = group_counts(states.front());
    std::string offending;
    for (size_t i = 1; i < states.size(); ++i) {
        if (group_counts(states[i]) != ref) {
            if (!offending.empty()) offending += ", ";
            offending += states[i].level;
        }
    }
    if (!offending.empty())
        throw DataError("alignment on samples requires balanced slices with matched "
                        "(group, ordinal) rows; level(s) " + offending +
                        " do not match level " + states.front().level);
}

void apply_to_state(BiplotState& st, const SimilarityTransform& T) {
    st.Z = apply_transform(T, st.Z);           // translation applies to samples
    st.V = T.s * (st.V * T.Q);                 // vectors are directional: no translation
}

}  // namespace

AlignmentResult align_series(const std::vector<BiplotState>& states,
                             const std::optional<BiplotState>& target,
                             const std::vector<std::string>& group_levels,
                             const AlignOptions& opts) {
    if (states.empty()) throw DataError("align_series: no states");
    if (!target && states.size() < 2)
        throw DataError("align_series: consensus alignment needs at least 2 states");

    const bool on_samples = opts.align_on == AlignOn::Samples;

    std::vector<Config> configs;
    configs.reserve(states.size());
    if (on_samples) {
        check_balance(states);
        for (const auto& s : states)
            configs.push_back(permuted_rows(s.Z, canonical_row_order(s, group_levels)));
    } else {
        for (size_t i = 1; i < states.size(); ++i) {
            if (states[i].V.rows() != states.front().V.rows())
                throw DataError("alignment on variables: level " + states[i].level +
                                " has a different variable count");
        }
        for (const auto& s : states) configs.push_back(s.V);
    }

    AlignmentResult res;
    res.aligned_states = states;

    if (target) {
        Config target_config;
        if (on_samples) {
            if (target->Z.rows() != configs.front().rows())
                throw DataError("target has " + std::to_string(target->Z.rows()) +
                                " rows, slices have " + std::to_string(configs.front().rows()));
            if (group_counts(*target) != group_counts(states.front()))
                throw DataError("target group composition does not match the slices");
            target_config = permuted_rows(target->Z, canonical_row_order(*target, group_levels));
        } else {
            if (target->V.rows() != configs.front().rows())
                throw DataError("target has " + std::to_string(target->V.rows()) +
                                " variables, slices have " +
                                std::to_string(configs.front().rows()));
            target_config = target->V;
        }

        res.target_supplied = true;
        res.consensus = target_config;
        double rss_before = 0.0, rss_after = 0.0;
        for (size_t i = 0; i < states.size(); ++i) {
            rss_before += (configs[i] - target_config).squaredNorm();
            auto T = orthogonal_procrustes(configs[i], target_config, /*allow_scale=*/true);
            if (!on_samples) T.t.setZero();
            res.transforms.push_back(T);
            res.aligned_configs.push_back(apply_transform(T, configs[i]));
            rss_after += (res.aligned_configs.back() - target_config).squaredNorm();
            apply_to_state(res.aligned_states[i], T);
        }
        res.iterations = 1;
        res.final_rss = rss_after;
        res.rss_history = {rss_before, rss_after};
        res.converged = true;
        return res;
    }

    GpaResult gpa = gpa_consensus(configs, GpaOptions{opts.gpa_tol, opts.gpa_max_iter});
    res.consensus = gpa.consensus;
    res.aligned_configs = std::move(gpa.aligned);
    res.transforms = std::move(gpa.transforms);
    res.iterations = gpa.iterations;
    res.final_rss = gpa.final_rss;
    res.converged = gpa.converged;
    res.rss_history = std::move(gpa.rss_history);
    for (size_t i = 0; i < states.size(); ++i) {
        auto T = res.transforms[i];
        if (!on_samples) T.t.setZero();
        res.transforms[i] = T;
        apply_to_state(res.aligned_states[i], T);
    }
    return res;
}

}  // namespace biplot
