#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "biplot/pipeline.hpp"

namespace {

using biplot::RunConfig;
using biplot::Subcommand;

void add_data_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--input", cfg.input, "input CSV (RFC-4180, header row)")->required();
    sub->add_option("--time-var", cfg.time_var, "ordered category column")->required();
    sub->add_option("--group-var", cfg.group_var, "grouping column")->required();
    sub->add_option("--level-order", cfg.level_order,
                    "explicit time level order (comma separated)")
        ->delimiter(',');
    sub->add_flag("--scaled,!--no-scaled", cfg.scaled,
                  "standardize variables to unit variance (default on)");
}

void add_output_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--format", cfg.format, "svg|gif|json|facet (default: facet, gif with --move)");
    sub->add_option("--out", cfg.out, "output path (directory for --format svg)");
    sub->add_option("--style", cfg.style_file, "style JSON file");
    sub->add_option("--facet-cols", cfg.facet_cols, "facet grid columns (default 4)");
}

void add_animation_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_flag("--move", cfg.move, "animate (default: static facet sheet)");
    sub->add_flag("--hulls", cfg.hulls, "draw per-group convex hulls");
    sub->add_flag("--shadow", cfg.shadow, "faded traces of previous states (needs no hulls)");
    sub->add_option("--shadow-decay", cfg.shadow_decay, "shadow opacity decay per state (0,1)");
    sub->add_option("--scale-var", cfg.scale_var, "multiplier for variable vectors");
    sub->add_option("--pause-frames", cfg.pause_frames, "frames held at each state");
    sub->add_option("--transition-frames", cfg.transition_frames, "frames between states");
    sub->add_option("--fps", cfg.fps, "animation frames per second");
}

void add_gpa_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--target", cfg.target, "target CSV; absent = consensus alignment");
    sub->add_option("--align-on", cfg.align_on, "samples|variables (default samples)");
    sub->add_option("--gpa-tol", cfg.gpa_tol, "GPA convergence tolerance on the RSS decrease");
    sub->add_option("--gpa-max-iter", cfg.gpa_max_iter, "GPA iteration cap");
    sub->add_flag("--global-standardize", cfg.global_standardize,
                  "standardize once globally instead of within each slice");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"animated PCA biplots over an ordered category"};
    app.require_subcommand(1);

    RunConfig cfg;

    auto* mp = app.add_subcommand(
        "moveplot", "fixed variable frame: one global PCA, sliced sample scores");
    add_data_flags(mp, cfg);
    add_animation_flags(mp, cfg);
    add_output_flags(mp, cfg);

    auto* mp2 = app.add_subcommand(
        "moveplot2", "dynamic frame: per-slice PCA with manual reflection correction");
    add_data_flags(mp2, cfg);
    add_animation_flags(mp2, cfg);
    add_output_flags(mp2, cfg);
    mp2->add_option("--align-time", cfg.align_time, "levels to reflect (comma separated)")
        ->delimiter(',');
    mp2->add_option("--reflect", cfg.reflect, "reflection axis: x|y|xy");
    mp2->add_flag("--global-standardize", cfg.global_standardize,
                  "standardize once globally instead of within each slice");

    auto* mp3 = app.add_subcommand(
        "moveplot3", "dynamic frame: per-slice PCA with Procrustes alignment");
    add_data_flags(mp3, cfg);
    add_animation_flags(mp3, cfg);
    add_output_flags(mp3, cfg);
    add_gpa_flags(mp3, cfg);
    mp3->add_flag("--emit-eval", cfg.emit_eval, "also write the evaluation CSV/JSON");
    mp3->add_flag("--charts", cfg.charts, "with --emit-eval, also write fit/bias charts");

    auto* ev = app.add_subcommand(
        "evaluate", "moveplot3 pipeline, emitting only measures and charts");
    add_data_flags(ev, cfg);
    add_output_flags(ev, cfg);
    add_gpa_flags(ev, cfg);
    ev->add_flag("--charts", cfg.charts, "also write fit/bias line charts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (mp->parsed()) cfg.subcommand = Subcommand::Moveplot;
    if (mp2->parsed()) cfg.subcommand = Subcommand::Moveplot2;
    if (mp3->parsed()) cfg.subcommand = Subcommand::Moveplot3;
    if (ev->parsed()) cfg.subcommand = Subcommand::Evaluate;

    return biplot::run(cfg, std::cout, std::cerr);
}
