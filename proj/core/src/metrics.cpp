#include "sqzamp/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sqzamp {

SignalModel::SignalModel(double p) : p_sig(p) {
    if (!(p > 0.0) || !std::isfinite(p)) {
        throw std::domain_error("signal power must be positive and finite");
    }
}

SignalModel default_signal() { return SignalModel(std::pow(10.0, 0.1)); }

double to_decibels(double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::domain_error("dB conversion requires a positive value");
    }
    return 10.0 * std::log10(v);
}

double from_decibels(double db) { return std::pow(10.0, db / 10.0); }

double effective_efficiency(const CavityParams& opa, double eta_det) {
    if (!std::isfinite(eta_det) || eta_det < 0.0 || eta_det > 1.0) {
        throw std::domain_error("eta_det must lie in [0,1]");
    }
    const double x = opa.pump().value;
    const double eta_opa = opa.escape_efficiency;
    const double num = eta_det * std::pow(2.0 * eta_opa + x - 1.0, 2);
    const double den =
        (1.0 - x) * (1.0 - x) + 4.0 * x * eta_det * eta_opa;
    return num / den;
}

double effective_efficiency_infinite_gain(const CavityParams& opa) {
    return opa.escape_efficiency;
}

namespace {

const CavityParams& require_opa(const ChainSetup& setup, const char* fn) {
    if (!setup.amplified()) {
        throw std::invalid_argument(std::string(fn) + ": setup has no OPA");
    }
    return *setup.opa;
}

}  // namespace

double effective_squeezing(const ChainSetup& setup) {
    const CavityParams& opa = require_opa(setup, "effective_squeezing");
    if (setup.has_phase_noise()) {
        throw std::invalid_argument(
            "effective_squeezing: closed form requires zero phase noise; use "
            "effective_squeezing_with_noise");
    }
    const double x_o = setup.opo.pump().value;
    const double eta_eff = effective_efficiency(opa, setup.efficiencies.eta_det);
    return 1.0 - 4.0 * x_o * setup.eta_sqz_tilde() * eta_eff /
                     ((1.0 + x_o) * (1.0 + x_o));
}

double effective_squeezing_infinite_gain(const ChainSetup& setup) {
    const CavityParams& opa =
        require_opa(setup, "effective_squeezing_infinite_gain");
    const double x_o = setup.opo.pump().value;
    return 1.0 - 4.0 * x_o * setup.eta_sqz_tilde() *
                     effective_efficiency_infinite_gain(opa) /
                     ((1.0 + x_o) * (1.0 + x_o));
}

double effective_squeezing_with_noise(const ChainSetup& setup) {
    require_opa(setup, "effective_squeezing_with_noise");
    const double numerator = chain_variance(setup).v_minus;
    ChainSetup vacuum_seeded = setup;
    vacuum_seeded.opo.gain = NonlinearGain(1.0);  // x_opo = 0
    vacuum_seeded.theta_opo = PhaseNoiseAngle(0.0);
    const double denominator = chain_variance(vacuum_seeded).v_minus;
    return numerator / denominator;
}

double snr_conventional(const ChainSetup& setup, const SignalModel& sig) {
    if (setup.amplified()) {
        throw std::invalid_argument("snr_conventional: setup carries an OPA");
    }
    const QuadVariance v = chain_variance(setup);
    return setup.efficiencies.eta_det * sig.p_sig / v.v_minus;
}

double snr_amplified(const ChainSetup& setup, const SignalModel& sig) {
    const CavityParams& opa = require_opa(setup, "snr_amplified");
    const double x_a = opa.pump().value;
    const double signal_gain =
        std::pow(2.0 * opa.escape_efficiency / (1.0 - x_a) - 1.0, 2);
    const QuadVariance v = chain_variance(setup);
    return setup.efficiencies.eta_prop * setup.efficiencies.eta_det *
           signal_gain * sig.p_sig / v.v_minus;
}

double snr_enhancement(const ChainSetup& setup) {
    const CavityParams& opa = require_opa(setup, "snr_enhancement");
    const double x_a = opa.pump().value;
    const double signal_gain =
        std::pow(2.0 * opa.escape_efficiency / (1.0 - x_a) - 1.0, 2);

    ChainSetup conv = setup;
    conv.opa.reset();
    conv.theta_opa = PhaseNoiseAngle(0.0);
    const double v_conv = chain_variance(conv).v_minus;
    const double v_amp = chain_variance(setup).v_minus;
    return setup.efficiencies.eta_prop * signal_gain * v_conv / v_amp;
}

MetricsReport compute_metrics(const ChainSetup& setup, const SignalModel& sig) {
    MetricsReport report;
    report.p_sig = sig.p_sig;
    report.amplified = setup.amplified();
    report.detected = chain_variance(setup);

    ChainSetup conv = setup;
    conv.opa.reset();
    conv.theta_opa = PhaseNoiseAngle(0.0);
    report.snr_conv = snr_conventional(conv, sig);

    if (setup.amplified()) {
        report.v_eff = effective_squeezing_with_noise(setup);
        report.eta_eff =
            effective_efficiency(*setup.opa, setup.efficiencies.eta_det);
        report.snr_amp = snr_amplified(setup, sig);
        report.epsilon = snr_enhancement(setup);
    }
    return report;
}

}  // namespace sqzamp
