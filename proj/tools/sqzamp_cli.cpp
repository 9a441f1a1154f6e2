// Command-line front end: single-point reports, 1D/2D parameter sweeps,
// figure-reproduction presets, and Monte Carlo oracle checks.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sqzamp/errors.hpp"
#include "sqzamp/sweep.hpp"

namespace {

using nlohmann::json;
using namespace sqzamp;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitOracleFail = 3;

struct PointConfig {
    double eta_opo = 0.98;
    double g_opo = 1.8;
    std::optional<double> eta_opa;
    std::optional<double> g_opa;
    double eta_prop = 0.99;
    double eta_det = 0.7;
    std::optional<double> l_det;
    double theta_opo = 0.0;
    double theta_opa = 0.0;
    std::string phase_noise_mode = "deterministic";
    double p_sig = std::pow(10.0, 0.1);
};

void check_range(const char* field, double v, double lo, double hi) {
    if (!std::isfinite(v) || v < lo || v > hi) {
        std::ostringstream msg;
        msg << field << ": value " << v << " outside [" << lo << ", " << hi
            << "]";
        throw std::invalid_argument(msg.str());
    }
}

PhaseNoiseMode parse_mode(const std::string& s) {
    if (s == "deterministic") return PhaseNoiseMode::deterministic;
    if (s == "gaussian_rms") return PhaseNoiseMode::gaussian_rms;
    throw std::invalid_argument(
        "phase_noise_mode: expected 'deterministic' or 'gaussian_rms', got '" +
        s + "'");
}

ChainSetup make_setup(const PointConfig& cfg) {
    check_range("eta_opo", cfg.eta_opo, 0.0, 1.0);
    check_range("eta_prop", cfg.eta_prop, 0.0, 1.0);
    double eta_det = cfg.eta_det;
    if (cfg.l_det) {
        check_range("l_det", *cfg.l_det, 0.0, 1.0);
        eta_det = 1.0 - *cfg.l_det;
    }
    check_range("eta_det", eta_det, 0.0, 1.0);
    if (!std::isfinite(cfg.g_opo) || cfg.g_opo < 1.0) {
        throw std::invalid_argument("g_opo: gain must be >= 1");
    }

    ChainSetup setup;
    setup.opo = CavityParams(cfg.eta_opo, cfg.g_opo);
    if (cfg.g_opa || cfg.eta_opa) {
        const double eta_opa = cfg.eta_opa.value_or(0.98);
        const double g_opa = cfg.g_opa.value_or(1.0);
        check_range("eta_opa", eta_opa, 0.0, 1.0);
        if (!std::isfinite(g_opa) || g_opa < 1.0) {
            throw std::invalid_argument("g_opa: gain must be >= 1");
        }
        setup.opa = CavityParams(eta_opa, g_opa);
    }
    setup.efficiencies = ChannelEfficiencies(cfg.eta_prop, eta_det);
    setup.theta_opo = PhaseNoiseAngle(cfg.theta_opo);
    setup.theta_opa = PhaseNoiseAngle(cfg.theta_opa);
    setup.phase_noise_mode = parse_mode(cfg.phase_noise_mode);
    return setup;
}

// Config file values fill in anything the command line did not set
// explicitly; flags always win.
void merge_config_file(const std::string& path, const CLI::App& cmd,
                       PointConfig& cfg) {
    std::ifstream file(path);
    if (!file) {
        throw IoError("cannot open config file: " + path);
    }
    json j;
    try {
        file >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config file parse error: " +
                                    std::string(e.what()));
    }

    auto take = [&](const char* key, const char* flag, auto& slot) {
        using Slot = std::remove_reference_t<decltype(slot)>;
        if (!j.contains(key)) return;
        const CLI::Option* opt = cmd.get_option_no_throw(flag);
        if (opt != nullptr && opt->count() > 0) return;  // flag wins
        try {
            if constexpr (std::is_same_v<Slot, std::optional<double>>) {
                slot = j.at(key).get<double>();
            } else {
                slot = j.at(key).get<typename std::decay_t<Slot>>();
            }
        } catch (const json::exception&) {
            throw std::invalid_argument(std::string(key) +
                                        ": invalid value in config file");
        }
    };
    take("eta_opo", "--eta-opo", cfg.eta_opo);
    take("g_opo", "--g-opo", cfg.g_opo);
    take("eta_opa", "--eta-opa", cfg.eta_opa);
    take("g_opa", "--g-opa", cfg.g_opa);
    take("eta_prop", "--eta-prop", cfg.eta_prop);
    take("eta_det", "--eta-det", cfg.eta_det);
    take("l_det", "--l-det", cfg.l_det);
    take("theta_opo", "--theta-opo", cfg.theta_opo);
    take("theta_opa", "--theta-opa", cfg.theta_opa);
    take("phase_noise_mode", "--phase-noise-mode", cfg.phase_noise_mode);
    take("p_sig", "--p-sig", cfg.p_sig);

    for (auto it = j.begin(); it != j.end(); ++it) {
        static const std::vector<std::string> known = {
            "eta_opo", "g_opo",     "eta_opa",   "g_opa",
            "eta_prop", "eta_det",  "l_det",     "theta_opo",
            "theta_opa", "phase_noise_mode", "p_sig", "oracle"};
        if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
            throw std::invalid_argument("config file: unknown key '" +
                                        it.key() + "'");
        }
    }
}

void add_point_options(CLI::App& cmd, PointConfig& cfg) {
    cmd.add_option("--eta-opo", cfg.eta_opo, "OPO escape efficiency");
    cmd.add_option("--g-opo", cfg.g_opo, "OPO nonlinear gain (>= 1)");
    cmd.add_option("--eta-opa", cfg.eta_opa,
                   "OPA escape efficiency (implies amplified scheme)");
    cmd.add_option("--g-opa", cfg.g_opa,
                   "OPA nonlinear gain (implies amplified scheme)");
    cmd.add_option("--eta-prop", cfg.eta_prop,
                   "propagation efficiency between OPO and OPA");
    cmd.add_option("--eta-det", cfg.eta_det, "detection efficiency");
    cmd.add_option("--l-det", cfg.l_det,
                   "detection loss (stored as eta_det = 1 - l_det)");
    cmd.add_option("--theta-opo", cfg.theta_opo,
                   "OPO phase-noise angle [rad]");
    cmd.add_option("--theta-opa", cfg.theta_opa,
                   "OPA phase-noise angle [rad]");
    cmd.add_option("--phase-noise-mode", cfg.phase_noise_mode,
                   "deterministic | gaussian_rms");
    cmd.add_option("--p-sig", cfg.p_sig,
                   "signal power in vacuum units (default 1 dB above vacuum)");
}

std::string db2(double db) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", db);
    return buf;
}

json report_to_json(const MetricsReport& r) {
    json j;
    j["p_sig"] = r.p_sig;
    j["amplified"] = r.amplified;
    j["v_minus"] = r.detected.v_minus;
    j["v_plus"] = r.detected.v_plus;
    j["v_minus_db"] = to_decibels(r.detected.v_minus);
    j["v_plus_db"] = to_decibels(r.detected.v_plus);
    j["snr_conv"] = r.snr_conv;
    j["snr_conv_db"] = to_decibels(r.snr_conv);
    if (r.amplified) {
        j["v_eff"] = *r.v_eff;
        j["v_eff_db"] = to_decibels(*r.v_eff);
        j["eta_eff"] = *r.eta_eff;
        j["snr_amp"] = *r.snr_amp;
        j["snr_amp_db"] = to_decibels(*r.snr_amp);
        j["epsilon"] = *r.epsilon;
        j["epsilon_db"] = to_decibels(*r.epsilon);
    }
    j["version"] = version_string();
    return j;
}

void print_report_text(const MetricsReport& r, std::ostream& out) {
    out << "scheme            : " << (r.amplified ? "amplified" : "conventional")
        << "\n";
    out << "p_sig             : " << r.p_sig << " ("
        << db2(to_decibels(r.p_sig)) << " dB)\n";
    out << "v_minus           : " << r.detected.v_minus << " ("
        << db2(to_decibels(r.detected.v_minus)) << " dB)\n";
    out << "v_plus            : " << r.detected.v_plus << " ("
        << db2(to_decibels(r.detected.v_plus)) << " dB)\n";
    out << "snr_conv          : " << r.snr_conv << " ("
        << db2(to_decibels(r.snr_conv)) << " dB)\n";
    if (r.amplified) {
        out << "v_eff             : " << *r.v_eff << " ("
            << db2(to_decibels(*r.v_eff)) << " dB)\n";
        out << "eta_eff           : " << *r.eta_eff << "\n";
        out << "snr_amp           : " << *r.snr_amp << " ("
            << db2(to_decibels(*r.snr_amp)) << " dB)\n";
        out << "epsilon           : " << *r.epsilon << " ("
            << db2(to_decibels(*r.epsilon)) << " dB)\n";
    }
}

SweepAxis parse_axis(const std::string& text) {
    // name:start:stop:count[:log|:linear]
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() < 4 || parts.size() > 5) {
        throw std::invalid_argument(
            "axis spec must be name:start:stop:count[:log], got '" + text +
            "'");
    }
    SweepAxis axis;
    axis.parameter = parts[0];
    try {
        axis.start = std::stod(parts[1]);
        axis.stop = std::stod(parts[2]);
        axis.count = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw std::invalid_argument("axis spec has non-numeric fields: '" +
                                    text + "'");
    }
    if (parts.size() == 5) {
        if (parts[4] == "log") {
            axis.scale = AxisScale::log;
        } else if (parts[4] == "linear") {
            axis.scale = AxisScale::linear;
        } else {
            throw std::invalid_argument("axis scale must be linear or log");
        }
    }
    return axis;
}

int run(int argc, char** argv) {
    CLI::App app{"Squeezed-state amplification noise model"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::uint64_t seed = 42;
    std::uint64_t samples = 1'000'000;
    app.add_option("--config", config_path, "JSON config file")
        ->configurable(false);
    app.add_option("--out", out_path, "output path");
    app.add_option("--seed", seed, "random seed for oracle runs");
    app.add_option("--samples", samples, "Monte Carlo sample count");
    app.add_option("--format", format, "csv | json (point reports)");

    PointConfig point_cfg;
    CLI::App* point = app.add_subcommand("point", "evaluate a single setup");
    add_point_options(*point, point_cfg);

    PointConfig sweep_fixed;
    std::string axis1_text;
    std::string axis2_text;
    std::string outputs_text;
    CLI::App* sweep = app.add_subcommand("sweep", "run a 1D/2D parameter sweep");
    add_point_options(*sweep, sweep_fixed);
    sweep->add_option("--axis1", axis1_text,
                      "primary axis, name:start:stop:count[:log]")
        ->required();
    sweep->add_option("--axis2", axis2_text,
                      "optional secondary axis, same format");
    sweep->add_option("--outputs", outputs_text,
                      "comma-separated metric names");

    std::string figure_id_text;
    FigureOptions fig_opts;
    std::vector<double> gain_set;
    CLI::App* figure =
        app.add_subcommand("figure", "write a figure-reproduction dataset");
    figure->add_option("id", figure_id_text, "fig3|fig4a|fig4b|fig4c|fig5a|fig5b|fig5c|fig6")
        ->required();
    figure->add_option("--theta-max", fig_opts.theta_max,
                       "phase-noise axis maximum [rad]");
    figure->add_option("--l-det-max", fig_opts.l_det_max,
                       "detection-loss axis maximum");
    figure->add_option("--g-opa-set", gain_set, "OPA gain values")
        ->delimiter(',');
    figure->add_option("--points", fig_opts.axis_points, "points per axis");

    PointConfig oracle_point;
    std::uint64_t batch = 65536;
    std::string oracle_mode;
    double bias = 0.0;
    CLI::App* oracle = app.add_subcommand(
        "oracle-check", "compare Monte Carlo estimates with closed forms");
    add_point_options(*oracle, oracle_point);
    oracle->add_option("--batch", batch, "accumulation batch size");
    oracle->add_option("--bias", bias, "test hook: bias added to estimates")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (point->parsed()) {
            if (!config_path.empty()) {
                merge_config_file(config_path, *point, point_cfg);
            }
            const ChainSetup setup = make_setup(point_cfg);
            const MetricsReport report =
                compute_metrics(setup, SignalModel(point_cfg.p_sig));
            std::ostream* out = &std::cout;
            std::ofstream file;
            if (!out_path.empty()) {
                file.open(out_path, std::ios::binary);
                if (!file) {
                    throw IoError("cannot open output file: " + out_path);
                }
                out = &file;
            }
            if (format == "json") {
                *out << report_to_json(report).dump(2) << "\n";
            } else {
                print_report_text(report, *out);
            }
            if (!*out) {
                throw IoError("write failed");
            }
        } else if (sweep->parsed()) {
            if (!config_path.empty()) {
                merge_config_file(config_path, *sweep, sweep_fixed);
            }
            SweepSpec spec;
            spec.axis1 = parse_axis(axis1_text);
            if (!axis2_text.empty()) {
                spec.axis2 = parse_axis(axis2_text);
            }
            spec.fixed = make_setup(sweep_fixed);
            spec.signal = SignalModel(sweep_fixed.p_sig);
            if (!outputs_text.empty()) {
                std::stringstream ss(outputs_text);
                std::string name;
                while (std::getline(ss, name, ',')) {
                    spec.outputs.push_back(name);
                }
            }
            if (out_path.empty()) {
                run_sweep(spec, std::cout);
            } else {
                run_sweep_to_file(spec, out_path);
            }
        } else if (figure->parsed()) {
            if (!gain_set.empty()) {
                fig_opts.gain_set = gain_set;
            }
            const FigureId id = figure_id_from_string(figure_id_text);
            const std::filesystem::path dir =
                out_path.empty() ? std::filesystem::path(".")
                                 : std::filesystem::path(out_path);
            for (const auto& path : run_figure(id, dir, fig_opts)) {
                std::cout << path.string() << "\n";
            }
        } else if (oracle->parsed()) {
            if (!config_path.empty()) {
                merge_config_file(config_path, *oracle, oracle_point);
            }
            const ChainSetup setup = make_setup(oracle_point);
            OracleConfig cfg;
            cfg.n_samples = samples;
            cfg.seed = seed;
            cfg.batch_size = batch;
            cfg.phase_noise_mode = setup.phase_noise_mode;
            const OracleCheckResult result = oracle_check(setup, cfg, bias);
            std::printf("expected   v_minus=%.9g v_plus=%.9g\n",
                        result.expected.v_minus, result.expected.v_plus);
            std::printf("estimated  v_minus=%.9g (se %.3g)  v_plus=%.9g (se %.3g)\n",
                        result.estimate.v_minus_hat,
                        result.estimate.stderr_minus,
                        result.estimate.v_plus_hat,
                        result.estimate.stderr_plus);
            std::printf("z-scores   z_minus=%.3f z_plus=%.3f\n",
                        result.z_minus, result.z_plus);
            std::printf("%s\n", result.pass ? "PASS" : "FAIL");
            if (!result.pass) {
                return kExitOracleFail;
            }
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
