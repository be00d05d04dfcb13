#include "biplot/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "biplot/animation.hpp"
#include "biplot/errors.hpp"
#include "biplot/gif.hpp"
#include "biplot/render.hpp"
#include "biplot/serialize.hpp"

namespace fs = std::filesystem;

namespace biplot {

std::string subcommand_name(Subcommand s) {
    switch (s) {
        case Subcommand::Moveplot: return "moveplot";
        case Subcommand::Moveplot2: return "moveplot2";
        case Subcommand::Moveplot3: return "moveplot3";
        case Subcommand::Evaluate: return "evaluate";
    }
    return "?";
}

namespace {

// Artifacts are gathered in memory and written together at the end, so a
// failing run leaves no partial outputs behind.
class OutputStager {
public:
    void stage(std::string path, std::string bytes) {
        staged_.emplace_back(std::move(path), std::move(bytes));
    }

    std::vector<std::string> write_all() {
        std::vector<std::string> written;
        try {
            for (const auto& [path, bytes] : staged_) {
                const fs::path p(path);
                if (p.has_parent_path()) fs::create_directories(p.parent_path());
                std::ofstream f(path, std::ios::binary | std::ios::trunc);
                if (!f) throw IoError("cannot open output file: " + path);
                f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
                f.close();
                if (!f) throw IoError("write failure: " + path);
                written.push_back(path);
            }
        } catch (...) {
            std::error_code ec;
            for (const auto& p : written) fs::remove(p, ec);
            throw;
        }
        return written;
    }

private:
    std::vector<std::pair<std::string, std::string>> staged_;
};

std::string resolve_format(const RunConfig& cfg) {
    std::string f = cfg.format;
    if (f.empty()) f = cfg.move ? "gif" : "facet";
    if (f != "facet" && f != "svg" && f != "gif" && f != "json")
        throw ConfigError("--format must be one of svg, gif, json, facet; got \"" + f + "\"");
    if (!cfg.move && (f == "gif" || f == "json"))
        throw ConfigError("--format " + f + " requires --move");
    if (cfg.move && f == "facet")
        throw ConfigError("--format facet requires --move=false");
    return f;
}

void validate(const RunConfig& cfg) {
    if (cfg.input.empty()) throw ConfigError("--input is required");
    if (cfg.time_var.empty()) throw ConfigError("--time-var is required");
    if (cfg.shadow && cfg.hulls)
        throw ConfigError("--shadow is available only when --hulls is disabled");
    if (!(cfg.scale_var > 0.0)) throw ConfigError("--scale-var must be positive");
    if (cfg.subcommand != Subcommand::Moveplot2) {
        if (!cfg.align_time.empty())
            throw ConfigError("--align-time is only valid for moveplot2");
        if (!cfg.reflect.empty()) throw ConfigError("--reflect is only valid for moveplot2");
    } else {
        if (!cfg.align_time.empty() && cfg.reflect.empty())
            throw ConfigError("--align-time requires --reflect");
        if (!cfg.reflect.empty() && cfg.align_time.empty())
            throw ConfigError("--reflect requires --align-time");
    }
    if (cfg.subcommand != Subcommand::Moveplot3 && cfg.subcommand != Subcommand::Evaluate) {
        if (!cfg.target.empty())
            throw ConfigError("--target is only valid for moveplot3 and evaluate");
    }
    if (cfg.align_on != "samples" && cfg.align_on != "variables")
        throw ConfigError("--align-on must be samples or variables; got \"" + cfg.align_on +
                          "\"");
    if (cfg.gpa_max_iter < 1) throw ConfigError("--gpa-max-iter must be >= 1");
    if (!(cfg.gpa_tol >= 0.0)) throw ConfigError("--gpa-tol must be >= 0");
    if (cfg.pause_frames < 1) throw ConfigError("--pause-frames must be >= 1");
    if (cfg.transition_frames < 0) throw ConfigError("--transition-frames must be >= 0");
    if (!(cfg.fps > 0.0)) throw ConfigError("--fps must be positive");
    if (cfg.facet_cols < 1) throw ConfigError("--facet-cols must be >= 1");
    if (cfg.global_standardize && cfg.subcommand == Subcommand::Moveplot)
        throw ConfigError("--global-standardize applies to per-slice pipelines only");
}

std::string default_out(const RunConfig& cfg, const std::string& format) {
    const std::string base = subcommand_name(cfg.subcommand);
    if (cfg.subcommand == Subcommand::Evaluate) return "evaluation";
    if (format == "facet") return base + ".svg";
    if (format == "gif") return base + ".gif";
    if (format == "json") return base + "_frames.json";
    return base + "_frames";  // per-frame svg directory
}

std::string eval_prefix(const std::string& out_path) {
    fs::path p(out_path);
    fs::path stem = p.parent_path() / p.stem();
    return stem.string() + "_eval";
}

std::string frame_file_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%06d.svg", index);
    return buf;
}

}  // namespace

BiplotState load_target_state(const std::string& path, const std::string& group_var,
                              const std::string& time_var,
                              const std::vector<std::string>& vars, bool scaled) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open target file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const auto records = parse_csv_records(ss.str(), path);
    if (records.size() < 2) throw DataError(path + ": target needs a header and data rows");

    const auto& header = records.front();
    Index group_col = -1;
    std::vector<Index> var_cols(vars.size(), -1);
    for (size_t j = 0; j < header.size(); ++j) {
        if (!group_var.empty() && header[j] == group_var) group_col = static_cast<Index>(j);
        else if (!time_var.empty() && header[j] == time_var) continue;  // ignored if present
        else {
            const auto it = std::find(vars.begin(), vars.end(), header[j]);
            if (it == vars.end())
                throw DataError(path + ": unexpected column \"" + header[j] + "\"");
            var_cols[static_cast<size_t>(it - vars.begin())] = static_cast<Index>(j);
        }
    }
    if (!group_var.empty() && group_col < 0)
        throw DataError(path + ": no column named \"" + group_var + "\"");
    for (size_t k = 0; k < vars.size(); ++k)
        if (var_cols[k] < 0) throw DataError(path + ": missing variable column \"" + vars[k] + "\"");

    const Index n = static_cast<Index>(records.size()) - 1;
    Matrix X(n, static_cast<Index>(vars.size()));
    std::vector<std::string> groups;
    groups.reserve(static_cast<size_t>(n));
    for (Index r = 0; r < n; ++r) {
        const auto& rec = records[static_cast<size_t>(r) + 1];
        if (rec.size() != header.size())
            throw DataError(path + ": row " + std::to_string(r + 2) + " has " +
                            std::to_string(rec.size()) + " fields, expected " +
                            std::to_string(header.size()));
        groups.push_back(group_col < 0 ? std::string("all") : rec[static_cast<size_t>(group_col)]);
        for (size_t k = 0; k < vars.size(); ++k) {
            const std::string& cell = rec[static_cast<size_t>(var_cols[k])];
            double v;
            if (!parse_strict_double(cell, v))
                throw DataError(path + ": cell \"" + cell + "\" at row " + std::to_string(r + 2) +
                                ", column \"" + vars[k] + "\" is not a finite number");
            X(r, static_cast<Index>(k)) = v;
        }
    }

    BiplotState st = pca_biplot(X, scaled, "target");
    st.variable_names = vars;
    st.group_of_row = std::move(groups);
    return st;
}

RunOutcome run_pipeline(const RunConfig& cfg, std::ostream& summary_out) {
    validate(cfg);
    const std::string format = resolve_format(cfg);
    const std::string out_path = cfg.out.empty() ? default_out(cfg, format) : cfg.out;

    RenderStyle style = cfg.style_file.empty() ? default_style() : load_style(cfg.style_file);

    RunOutcome outcome;
    outcome.dataset = ingest_csv(cfg.input, cfg.time_var, cfg.group_var, cfg.level_order);
    const Dataset& d = outcome.dataset;
    if (d.group_levels.size() > style.group_palette.size())
        std::cerr << "warning: " << d.group_levels.size() << " groups exceed the "
                  << style.group_palette.size() << "-color palette; colors will repeat\n";

    const auto slices = slice_by_time(d);
    const auto slice_mode = cfg.global_standardize ? SliceStandardization::Global
                                                   : SliceStandardization::WithinSlice;

    FrameMode frame_mode = FrameMode::Dynamic;
    switch (cfg.subcommand) {
        case Subcommand::Moveplot: {
            frame_mode = FrameMode::Fixed;
            const BiplotState global = pca_biplot(d.numeric_block, cfg.scaled, "global");
            auto states = project_slices(global, d, slices);
            for (auto& s : states) s.variable_names = d.variable_names;
            outcome.states = std::move(states);
            break;
        }
        case Subcommand::Moveplot2: {
            outcome.states = per_slice_pca(d, slices, cfg.scaled, slice_mode);
            if (!cfg.align_time.empty())
                outcome.states = reflect_at_levels(outcome.states, cfg.align_time,
                                                   parse_reflect_axis(cfg.reflect));
            break;
        }
        case Subcommand::Moveplot3:
        case Subcommand::Evaluate: {
            outcome.states = per_slice_pca(d, slices, cfg.scaled, slice_mode);
            std::optional<BiplotState> target;
            if (!cfg.target.empty())
                target = load_target_state(cfg.target, cfg.group_var, cfg.time_var,
                                           d.variable_names, cfg.scaled);
            AlignOptions opts;
            opts.align_on = cfg.align_on == "samples" ? AlignOn::Samples : AlignOn::Variables;
            opts.gpa_tol = cfg.gpa_tol;
            opts.gpa_max_iter = cfg.gpa_max_iter;
            outcome.alignment = align_series(outcome.states, target, d.group_levels, opts);
            outcome.states = outcome.alignment->aligned_states;
            outcome.report = evaluate_series(*outcome.alignment);
            break;
        }
    }

    OutputStager stager;
    const bool eval_only = cfg.subcommand == Subcommand::Evaluate;

    if (eval_only) {
        stager.stage(out_path + ".csv", format_measures_csv(*outcome.report));
        stager.stage(out_path + ".json", format_measures_json(*outcome.report));
        if (cfg.charts) {
            const auto charts = render_measure_charts(*outcome.report, style);
            stager.stage(out_path + "_fit.svg", charts.fit_svg);
            stager.stage(out_path + "_bias.svg", charts.bias_svg);
        }
    } else {
        if (!cfg.move) {
            std::vector<Frame> frames;
            const auto legend = legend_of(outcome.states, d.group_levels);
            frames.reserve(outcome.states.size());
            for (const auto& s : outcome.states)
                frames.push_back(
                    make_state_frame(s, cfg.scale_var, cfg.hulls, d.group_levels, legend));
            stager.stage(out_path, render_facets(frames, style, cfg.facet_cols));
        } else {
            TimelineOptions topts;
            topts.pause_frames = cfg.pause_frames;
            topts.transition_frames = cfg.transition_frames;
            topts.fps = cfg.fps;
            topts.scale_var = cfg.scale_var;
            topts.hulls = cfg.hulls;
            topts.shadow = cfg.shadow;
            topts.shadow_decay = cfg.shadow_decay;
            const FrameSequence seq =
                build_timeline(outcome.states, frame_mode, topts, d.group_levels);
            if (format == "gif") {
                stager.stage(out_path, encode_gif(seq, style, compute_viewport(seq)));
            } else if (format == "json") {
                stager.stage(out_path, export_frames_json(seq));
            } else {  // per-frame svg files
                const Viewport vp = compute_viewport(seq);
                for (const auto& f : seq.frames) {
                    stager.stage((fs::path(out_path) / frame_file_name(f.index)).string(),
                                 render_frame_svg(f, style, vp));
                }
            }
        }
        if (cfg.emit_eval && outcome.report) {
            const std::string prefix = eval_prefix(out_path);
            stager.stage(prefix + ".csv", format_measures_csv(*outcome.report));
            stager.stage(prefix + ".json", format_measures_json(*outcome.report));
            if (cfg.charts) {
                const auto charts = render_measure_charts(*outcome.report, style);
                stager.stage(prefix + "_fit.svg", charts.fit_svg);
                stager.stage(prefix + "_bias.svg", charts.bias_svg);
            }
        }
    }

    outcome.artifacts = stager.write_all();
    print_run_summary(cfg, d, outcome.states,
                      outcome.alignment ? &*outcome.alignment : nullptr,
                      outcome.report ? &*outcome.report : nullptr, outcome.artifacts,
                      summary_out);
    return outcome;
}

int run(const RunConfig& cfg, std::ostream& summary_out, std::ostream& err) {
    try {
        run_pipeline(cfg, summary_out);
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

void print_run_summary(const RunConfig& cfg, const Dataset& d,
                       const std::vector<BiplotState>& states,
                       const AlignmentResult* alignment, const EvaluationReport* report,
                       const std::vector<std::string>& artifacts, std::ostream& out) {
    out << "== " << subcommand_name(cfg.subcommand) << " ==\n";
    out << "input: " << cfg.input << " (n=" << d.n() << ", p=" << d.p() << ")\n";
    out << "time: " << cfg.time_var << ", " << d.time_levels.size() << " levels ("
        << d.time_levels.front() << " .. " << d.time_levels.back() << ")\n";
    out << "groups: " << (cfg.group_var.empty() ? "(none)" : cfg.group_var) << ", "
        << d.group_levels.size() << " group(s)\n";
    out << "slices:\n";
    char buf[128];
    for (const auto& s : states) {
        std::snprintf(buf, sizeof(buf), "  %s: n=%lld, ev = %.1f%% + %.1f%%\n",
                      s.level.c_str(), static_cast<long long>(s.Z.rows()),
                      100.0 * s.explained_variance(0), 100.0 * s.explained_variance(1));
        out << buf;
    }
    if (alignment) {
        out << "alignment: " << (alignment->target_supplied ? "fixed target" : "gpa consensus")
            << ", " << alignment->iterations << " iteration(s), final rss = ";
        std::snprintf(buf, sizeof(buf), "%.6e", alignment->final_rss);
        out << buf << (alignment->converged ? "" : " (did not converge)") << "\n";
    }
    if (!artifacts.empty()) {
        out << "outputs:\n";
        for (const auto& a : artifacts) out << "  " << a << "\n";
    }
    if (report && cfg.subcommand == Subcommand::Evaluate) {
        out << "measures:\n" << format_measures_table(*report);
    }
}

}  // namespace biplot
