#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "biplot/alignment.hpp"
#include "biplot/dataset.hpp"
#include "biplot/evaluation.hpp"
#include "biplot/pca.hpp"

namespace biplot {

enum class Subcommand { Moveplot, Moveplot2, Moveplot3, Evaluate };

std::string subcommand_name(Subcommand s);

struct RunConfig {
    Subcommand subcommand = Subcommand::Moveplot;

    // data
    std::string input;
    std::string time_var;
    std::string group_var;
    std::vector<std::string> level_order;
    bool scaled = true;
    bool global_standardize = false;  // per-slice pipelines only

    // display toggles
    bool move = false;  // animation instead of facet sheet
    bool hulls = false;
    bool shadow = false;
    double scale_var = 1.0;

    // manual correction (moveplot2)
    std::vector<std::string> align_time;
    std::string reflect;

    // automated alignment (moveplot3 / evaluate)
    std::string target;  // optional CSV path; empty = consensus
    std::string align_on = "samples";
    double gpa_tol = 1e-10;
    int gpa_max_iter = 100;

    // animation
    int pause_frames = 10;
    int transition_frames = 30;
    double fps = 20.0;
    double shadow_decay = 0.6;

    // output
    std::string format;  // "", "facet", "svg", "gif", "json"
    std::string out;
    std::string style_file;
    int facet_cols = 4;
    bool emit_eval = false;
    bool charts = false;
};

struct RunOutcome {
    Dataset dataset;
    std::vector<BiplotState> states;
    std::optional<AlignmentResult> alignment;
    std::optional<EvaluationReport> report;
    std::vector<std::string> artifacts;  // paths written, in order
};

/// Execute the configured pipeline, write all artifacts (none on error), and
/// print the run summary to `summary_out`. Throws biplot::Error subclasses.
RunOutcome run_pipeline(const RunConfig& cfg, std::ostream& summary_out);

/// run_pipeline with errors mapped to exit codes (0 success, 2 config,
/// 3 data, 4 numeric, 5 io); error text goes to `err`.
int run(const RunConfig& cfg, std::ostream& summary_out, std::ostream& err);

/// One-line-per-stage run summary; the evaluate subcommand appends the
/// measures table.
void print_run_summary(const RunConfig& cfg, const Dataset& d,
                       const std::vector<BiplotState>& states,
                       const AlignmentResult* alignment, const EvaluationReport* report,
                       const std::vector<std::string>& artifacts, std::ostream& out);

/// Load a target CSV (group column plus the same numeric variables as `vars`,
/// an optional ignored time column) and build its biplot configuration.
BiplotState load_target_state(const std::string& path, const std::string& group_var,
                              const std::string& time_var,
                              const std::vector<std::string>& vars, bool scaled);

}  // namespace biplot
