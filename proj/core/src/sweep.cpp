#include "sqzamp/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "sqzamp/errors.hpp"

namespace sqzamp {

const char* version_string() { return "0.1.0"; }

const std::vector<std::string>& sweep_parameter_names() {
    static const std::vector<std::string> names = {
        "eta_det",   "eta_prop",  "eta_opo",   "eta_opa", "g_opo",
        "g_opa",     "theta_opo", "theta_opa", "l_det"};
    return names;
}

namespace {

std::string joined_parameter_names() {
    std::string all;
    for (const std::string& n : sweep_parameter_names()) {
        if (!all.empty()) all += ", ";
        all += n;
    }
    return all;
}

CavityParams& ensure_opa(ChainSetup& setup) {
    if (!setup.opa) {
        setup.opa = CavityParams(0.98, 1.0);
    }
    return *setup.opa;
}

}  // namespace

void apply_parameter(ChainSetup& setup, const std::string& name,
                     double value) {
    if (name == "eta_det") {
        setup.efficiencies =
            ChannelEfficiencies(setup.efficiencies.eta_prop, value);
    } else if (name == "l_det") {
        setup.efficiencies =
            ChannelEfficiencies(setup.efficiencies.eta_prop, 1.0 - value);
    } else if (name == "eta_prop") {
        setup.efficiencies =
            ChannelEfficiencies(value, setup.efficiencies.eta_det);
    } else if (name == "eta_opo") {
        setup.opo = CavityParams(value, setup.opo.gain);
    } else if (name == "eta_opa") {
        CavityParams& opa = ensure_opa(setup);
        opa = CavityParams(value, opa.gain);
    } else if (name == "g_opo") {
        setup.opo = CavityParams(setup.opo.escape_efficiency, value);
    } else if (name == "g_opa") {
        CavityParams& opa = ensure_opa(setup);
        opa = CavityParams(opa.escape_efficiency, value);
    } else if (name == "theta_opo") {
        setup.theta_opo = PhaseNoiseAngle(value);
    } else if (name == "theta_opa") {
        setup.theta_opa = PhaseNoiseAngle(value);
    } else {
        throw std::invalid_argument("unknown parameter '" + name +
                                    "'; known parameters: " +
                                    joined_parameter_names());
    }
}

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names = {
        "v_minus",  "v_plus",      "v_minus_db", "v_plus_db", "v_eff",
        "v_eff_db", "eta_eff",     "snr_conv",   "snr_conv_db",
        "snr_amp",  "snr_amp_db",  "epsilon",    "epsilon_db"};
    return names;
}

double metric_value(const MetricsReport& report, const std::string& name) {
    auto required = [&](const std::optional<double>& v) {
        if (!v) {
            throw std::invalid_argument("metric '" + name +
                                        "' requires an amplified setup");
        }
        return *v;
    };
    if (name == "v_minus") return report.detected.v_minus;
    if (name == "v_plus") return report.detected.v_plus;
    if (name == "v_minus_db") return to_decibels(report.detected.v_minus);
    if (name == "v_plus_db") return to_decibels(report.detected.v_plus);
    if (name == "v_eff") return required(report.v_eff);
    if (name == "v_eff_db") return to_decibels(required(report.v_eff));
    if (name == "eta_eff") return required(report.eta_eff);
    if (name == "snr_conv") return report.snr_conv;
    if (name == "snr_conv_db") return to_decibels(report.snr_conv);
    if (name == "snr_amp") return required(report.snr_amp);
    if (name == "snr_amp_db") return to_decibels(required(report.snr_amp));
    if (name == "epsilon") return required(report.epsilon);
    if (name == "epsilon_db") return to_decibels(required(report.epsilon));
    std::string all;
    for (const std::string& n : metric_names()) {
        if (!all.empty()) all += ", ";
        all += n;
    }
    throw std::invalid_argument("unknown metric '" + name +
                                "'; known metrics: " + all);
}

std::vector<double> axis_values(const SweepAxis& axis) {
    if (axis.count < 2) {
        throw std::invalid_argument("axis count must be >= 2");
    }
    if (!(axis.start < axis.stop)) {
        throw std::invalid_argument("axis start must be < stop");
    }
    if (axis.scale == AxisScale::log && axis.start <= 0.0) {
        throw std::invalid_argument("log axis requires start > 0");
    }
    std::vector<double> values(axis.count);
    const int last = axis.count - 1;
    for (int i = 0; i <= last; ++i) {
        const double t = static_cast<double>(i) / last;
        if (axis.scale == AxisScale::linear) {
            values[i] = axis.start + t * (axis.stop - axis.start);
        } else {
            values[i] = axis.start *
                        std::pow(axis.stop / axis.start, t);
        }
    }
    values.front() = axis.start;
    values.back() = axis.stop;
    return values;
}

std::string format_csv_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

namespace {

std::vector<std::string> default_outputs(const ChainSetup& setup) {
    if (setup.amplified()) {
        return {"v_minus",  "v_minus_db", "v_eff",       "v_eff_db",
                "eta_eff",  "snr_conv_db", "snr_amp_db", "epsilon_db"};
    }
    return {"v_minus", "v_plus", "v_minus_db", "v_plus_db", "snr_conv_db"};
}

}  // namespace

void run_sweep(const SweepSpec& spec, std::ostream& out) {
    const std::vector<double> values1 = axis_values(spec.axis1);
    std::vector<double> values2{0.0};
    if (spec.axis2) {
        values2 = axis_values(*spec.axis2);
    }

    // Validate parameter names and resolve default outputs at the first
    // grid point before writing anything.
    ChainSetup probe = spec.fixed;
    apply_parameter(probe, spec.axis1.parameter, values1.front());
    if (spec.axis2) {
        apply_parameter(probe, spec.axis2->parameter, values2.front());
    }
    const std::vector<std::string> outputs =
        spec.outputs.empty() ? default_outputs(probe) : spec.outputs;
    (void)compute_metrics(probe, spec.signal);  // validate metric inputs early
    for (const std::string& name : outputs) {
        (void)metric_value(compute_metrics(probe, spec.signal), name);
    }

    out << spec.axis1.parameter;
    if (spec.axis2) {
        out << "," << spec.axis2->parameter;
    }
    for (const std::string& name : outputs) {
        out << "," << name;
    }
    out << "\n";

    for (double v1 : values1) {
        for (double v2 : values2) {
            ChainSetup setup = spec.fixed;
            apply_parameter(setup, spec.axis1.parameter, v1);
            if (spec.axis2) {
                apply_parameter(setup, spec.axis2->parameter, v2);
            }
            const MetricsReport report = compute_metrics(setup, spec.signal);
            out << format_csv_value(v1);
            if (spec.axis2) {
                out << "," << format_csv_value(v2);
            }
            for (const std::string& name : outputs) {
                out << "," << format_csv_value(metric_value(report, name));
            }
            out << "\n";
        }
    }
    if (!out) {
        throw IoError("run_sweep: stream write failed");
    }
}

void run_sweep_to_file(const SweepSpec& spec,
                       const std::filesystem::path& out_path) {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
        throw IoError("cannot open output file: " + out_path.string());
    }
    run_sweep(spec, file);
    if (!file) {
        throw IoError("write failed: " + out_path.string());
    }
}

FigureId figure_id_from_string(const std::string& s) {
    if (s == "fig3") return FigureId::fig3;
    if (s == "fig4a") return FigureId::fig4a;
    if (s == "fig4b") return FigureId::fig4b;
    if (s == "fig4c") return FigureId::fig4c;
    if (s == "fig5a") return FigureId::fig5a;
    if (s == "fig5b") return FigureId::fig5b;
    if (s == "fig5c") return FigureId::fig5c;
    if (s == "fig6") return FigureId::fig6;
    throw std::invalid_argument(
        "unknown figure id '" + s +
        "'; expected one of fig3, fig4a, fig4b, fig4c, fig5a, fig5b, fig5c, "
        "fig6");
}

const char* figure_id_name(FigureId id) {
    switch (id) {
        case FigureId::fig3: return "fig3";
        case FigureId::fig4a: return "fig4a";
        case FigureId::fig4b: return "fig4b";
        case FigureId::fig4c: return "fig4c";
        case FigureId::fig5a: return "fig5a";
        case FigureId::fig5b: return "fig5b";
        case FigureId::fig5c: return "fig5c";
        case FigureId::fig6: return "fig6";
    }
    return "?";
}

namespace {

// Tabulated default parameters.
ChainSetup preset_base(double g_opo, std::optional<double> g_opa) {
    ChainSetup setup;
    setup.opo = CavityParams(0.98, g_opo);
    if (g_opa) {
        setup.opa = CavityParams(0.98, *g_opa);
    }
    setup.efficiencies = ChannelEfficiencies(0.99, 0.7);
    return setup;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw IoError("cannot open output file: " + path.string());
    }
    file << content;
    if (!file) {
        throw IoError("write failed: " + path.string());
    }
}

nlohmann::json setup_to_json(const ChainSetup& setup) {
    nlohmann::json j;
    j["eta_opo"] = setup.opo.escape_efficiency;
    j["g_opo"] = setup.opo.gain.value;
    if (setup.opa) {
        j["eta_opa"] = setup.opa->escape_efficiency;
        j["g_opa"] = setup.opa->gain.value;
    }
    j["eta_prop"] = setup.efficiencies.eta_prop;
    j["eta_det"] = setup.efficiencies.eta_det;
    j["theta_opo"] = setup.theta_opo.theta;
    j["theta_opa"] = setup.theta_opa.theta;
    j["phase_noise_mode"] =
        setup.phase_noise_mode == PhaseNoiseMode::deterministic
            ? "deterministic"
            : "gaussian_rms";
    return j;
}

struct Panel {
    std::string csv;
    nlohmann::json meta;
};

Panel figure_gain_family(FigureId id, const FigureOptions& opts,
                         const std::string& output) {
    // V_eff (fig3) or epsilon (fig6) versus detection loss, one curve per
    // OPA gain.
    std::ostringstream csv;
    csv << "l_det,g_opa," << output << "\n";
    SweepAxis loss_axis{"l_det", 0.0, opts.l_det_max, opts.axis_points,
                        AxisScale::linear};
    for (double g_opa : opts.gain_set) {
        for (double l_det : axis_values(loss_axis)) {
            ChainSetup setup = preset_base(5.2, g_opa);
            apply_parameter(setup, "l_det", l_det);
            double value;
            if (output == "epsilon_db") {
                value = to_decibels(snr_enhancement(setup));
            } else {
                value = to_decibels(effective_squeezing(setup));
            }
            csv << format_csv_value(l_det) << "," << format_csv_value(g_opa)
                << "," << format_csv_value(value) << "\n";
        }
    }
    nlohmann::json meta;
    meta["fixed"] = setup_to_json(preset_base(5.2, std::nullopt));
    meta["g_opa_set"] = opts.gain_set;
    meta["axes"] = {{"l_det", {0.0, opts.l_det_max}}};
    meta["output"] = output;
    (void)id;
    return {csv.str(), meta};
}

Panel figure_eta_eff(FigureId id, const FigureOptions& opts) {
    // eta_eff over the (eta_opa, eta_det) plane for a fixed OPA gain; the
    // infinite-gain panel uses the analytic limit eta_eff = eta_opa.
    const bool infinite = id == FigureId::fig4c;
    const double g_opa = id == FigureId::fig4a ? 1.0 : 10.0;

    std::ostringstream csv;
    csv << "eta_opa,eta_det,eta_eff\n";
    SweepAxis unit{"eta_opa", 0.0, 1.0, opts.axis_points, AxisScale::linear};
    for (double eta_opa : axis_values(unit)) {
        for (double eta_det : axis_values(unit)) {
            double value;
            if (infinite) {
                value = effective_efficiency_infinite_gain(
                    CavityParams(eta_opa, 1.0));
            } else {
                value = effective_efficiency(CavityParams(eta_opa, g_opa),
                                             eta_det);
            }
            csv << format_csv_value(eta_opa) << ","
                << format_csv_value(eta_det) << "," << format_csv_value(value)
                << "\n";
        }
    }
    nlohmann::json meta;
    meta["g_opa"] = infinite ? nlohmann::json("infinity")
                             : nlohmann::json(g_opa);
    meta["axes"] = {{"eta_opa", {0.0, 1.0}}, {"eta_det", {0.0, 1.0}}};
    meta["output"] = "eta_eff";
    return {csv.str(), meta};
}

Panel figure_phase_noise(FigureId id, const FigureOptions& opts) {
    // V_eff over (theta, l_det); one phase-noise source at a time.
    const double g_opa = id == FigureId::fig5a ? 1.0 : 5.2;
    const std::string theta_name =
        id == FigureId::fig5c ? "theta_opa" : "theta_opo";

    std::ostringstream csv;
    csv << theta_name << ",l_det,v_eff_db\n";
    SweepAxis theta_axis{theta_name, 0.0, opts.theta_max, opts.axis_points,
                         AxisScale::linear};
    SweepAxis loss_axis{"l_det", 0.0, opts.l_det_max, opts.axis_points,
                        AxisScale::linear};
    for (double theta : axis_values(theta_axis)) {
        for (double l_det : axis_values(loss_axis)) {
            ChainSetup setup = preset_base(5.2, g_opa);
            apply_parameter(setup, theta_name, theta);
            apply_parameter(setup, "l_det", l_det);
            csv << format_csv_value(theta) << "," << format_csv_value(l_det)
                << ","
                << format_csv_value(
                       to_decibels(effective_squeezing_with_noise(setup)))
                << "\n";
        }
    }
    nlohmann::json meta;
    meta["fixed"] = setup_to_json(preset_base(5.2, g_opa));
    meta["axes"] = {{theta_name, {0.0, opts.theta_max}},
                    {"l_det", {0.0, opts.l_det_max}}};
    meta["output"] = "v_eff_db";
    return {csv.str(), meta};
}

}  // namespace

std::vector<std::filesystem::path> run_figure(
    FigureId id, const std::filesystem::path& out_dir,
    const FigureOptions& opts) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory: " + out_dir.string());
    }

    Panel panel;
    switch (id) {
        case FigureId::fig3:
            panel = figure_gain_family(id, opts, "v_eff_db");
            break;
        case FigureId::fig6:
            panel = figure_gain_family(id, opts, "epsilon_db");
            break;
        case FigureId::fig4a:
        case FigureId::fig4b:
        case FigureId::fig4c:
            panel = figure_eta_eff(id, opts);
            break;
        case FigureId::fig5a:
        case FigureId::fig5b:
        case FigureId::fig5c:
            panel = figure_phase_noise(id, opts);
            break;
    }

    panel.meta["preset"] = figure_id_name(id);
    panel.meta["version"] = version_string();

    const std::filesystem::path csv_path =
        out_dir / (std::string(figure_id_name(id)) + ".csv");
    const std::filesystem::path meta_path =
        out_dir / (std::string(figure_id_name(id)) + "_meta.json");
    write_text_file(csv_path, panel.csv);
    write_text_file(meta_path, panel.meta.dump(2) + "\n");
    return {csv_path, meta_path};
}

OracleCheckResult oracle_check(const ChainSetup& setup, const OracleConfig& cfg,
                               double bias) {
    ChainSetup configured = setup;
    configured.phase_noise_mode = cfg.phase_noise_mode;

    OracleCheckResult result;
    result.expected = chain_variance(configured);
    result.estimate = estimate_variance(configured, cfg);
    result.estimate.v_minus_hat += bias;
    result.estimate.v_plus_hat += bias;
    result.z_minus = (result.estimate.v_minus_hat - result.expected.v_minus) /
                     result.estimate.stderr_minus;
    result.z_plus = (result.estimate.v_plus_hat - result.expected.v_plus) /
                    result.estimate.stderr_plus;
    result.pass = std::abs(result.z_minus) < 4.0 &&
                  std::abs(result.z_plus) < 4.0;
    return result;
}

}  // namespace sqzamp
