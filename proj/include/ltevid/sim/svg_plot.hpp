#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ltevid/errors.hpp"
#include "ltevid/sim/sweep.hpp"

namespace ltevid::sim {

enum class PlotAxis { ebno, harq, modulation };

std::string_view axis_name(PlotAxis a);
std::optional<PlotAxis> parse_plot_axis(std::string_view text);

/// Numeric RunRecord columns that can be plotted, by CSV name.
bool is_plot_metric(std::string_view metric);
/// ContractError for unknown names.
double metric_value(const RunRecord& r, std::string_view metric);

/// A series (one video) mixes values of a field other than the x axis.
class GroupingError : public ContractError {
public:
    GroupingError(const std::string& what, std::vector<std::string> fields)
        : ContractError(what), fields_(std::move(fields)) {}
    const std::vector<std::string>& fields() const noexcept { return fields_; }

private:
    std::vector<std::string> fields_;
};

struct PlotOptions {
    /// Plot log10 of the metric (values <= 0 are floored at 1e-12).
    bool log_y = false;
    std::string title;
    int width = 640;
    int height = 400;
};

/// Self-contained SVG line chart, one polyline per video. A series with one
/// point gets a marker only.
std::string render_plot(const std::vector<RunRecord>& records, PlotAxis axis, std::string_view metric,
                        const PlotOptions& options = {});

void emit_plot(const std::vector<RunRecord>& records, PlotAxis axis, std::string_view metric,
               const std::filesystem::path& path, const PlotOptions& options = {});

/// The configured axis, else the first of ebno, harq, modulation with more
/// than one value, else ebno.
PlotAxis default_axis(const ExperimentConfig& cfg);

/// One plot per metric and per combination of the other swept axes, named
/// <stem>_<metric>_vs_<axis>[_<partition>].svg. Returns the written paths.
std::vector<std::filesystem::path> emit_plots(const std::vector<RunRecord>& records, PlotAxis axis,
                                              const std::vector<std::string>& metrics,
                                              const std::filesystem::path& dir, const std::string& stem);

}  // namespace ltevid::sim
