#ifndef SQZAMP_SWEEP_HPP
#define SQZAMP_SWEEP_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sqzamp/metrics.hpp"
#include "sqzamp/oracle.hpp"

namespace sqzamp {

enum class AxisScale { linear, log };

struct SweepAxis {
    std::string parameter;
    double start = 0.0;
    double stop = 1.0;
    int count = 2;
    AxisScale scale = AxisScale::linear;
};

struct SweepSpec {
    SweepAxis axis1;
    std::optional<SweepAxis> axis2;
    ChainSetup fixed;
    SignalModel signal = default_signal();
    std::vector<std::string> outputs;  // empty -> defaults for the scheme
};

// Closed set of sweepable parameter names. l_det is stored as
// eta_det = 1 - l_det.
const std::vector<std::string>& sweep_parameter_names();
void apply_parameter(ChainSetup& setup, const std::string& name, double value);

// Known output metric names.
const std::vector<std::string>& metric_names();
double metric_value(const MetricsReport& report, const std::string& name);

std::vector<double> axis_values(const SweepAxis& axis);

// Full-precision, locale-independent 9-significant-digit float formatting
// used in every CSV cell.
std::string format_csv_value(double v);

// Writes the sweep as CSV (header row, LF endings, axis-major order).
void run_sweep(const SweepSpec& spec, std::ostream& out);
void run_sweep_to_file(const SweepSpec& spec,
                       const std::filesystem::path& out_path);

enum class FigureId { fig3, fig4a, fig4b, fig4c, fig5a, fig5b, fig5c, fig6 };

FigureId figure_id_from_string(const std::string& s);
const char* figure_id_name(FigureId id);

struct FigureOptions {
    double theta_max = 0.1;  // radians (100 mrad)
    double l_det_max = 1.0;
    std::vector<double> gain_set{1.0, 2.0, 5.0, 10.0, 50.0};
    int axis_points = 101;
};

// Writes one CSV per panel plus a metadata JSON into out_dir; returns the
// paths written.
std::vector<std::filesystem::path> run_figure(FigureId id,
                                              const std::filesystem::path& out_dir,
                                              const FigureOptions& opts = {});

struct OracleCheckResult {
    OracleEstimate estimate{};
    QuadVariance expected{};
    double z_minus = 0.0;
    double z_plus = 0.0;
    bool pass = false;
};

// Compares the Monte Carlo estimate against the analytic chain variance.
// `bias` is a test hook added to both estimated variances.
OracleCheckResult oracle_check(const ChainSetup& setup, const OracleConfig& cfg,
                               double bias = 0.0);

const char* version_string();

}  // namespace sqzamp

#endif  // SQZAMP_SWEEP_HPP
