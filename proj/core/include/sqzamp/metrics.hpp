#ifndef SQZAMP_METRICS_HPP
#define SQZAMP_METRICS_HPP

#include <optional>

#include "sqzamp/chain.hpp"

namespace sqzamp {

// Scalar signal power in vacuum-variance units.
struct SignalModel {
    double p_sig = 1.0;

    SignalModel() = default;
    explicit SignalModel(double p);
};

// Default signal of 1 dB above vacuum.
SignalModel default_signal();

double to_decibels(double v);
double from_decibels(double db);

// Equivalent single-beamsplitter efficiency seen by the input squeezing
// after amplification.
double effective_efficiency(const CavityParams& opa, double eta_det);
// Analytic G -> infinity limit (eta_det drops out entirely).
double effective_efficiency_infinite_gain(const CavityParams& opa);

// Effective measurable squeezing, closed form; requires zero phase noise.
double effective_squeezing(const ChainSetup& setup);
// Same quantity in the analytic infinite-OPA-gain limit.
double effective_squeezing_infinite_gain(const ChainSetup& setup);
// General route: V_minus of the rotated amplified chain referenced to the
// vacuum-seeded chain (x_opo = 0, theta_opo = 0).
double effective_squeezing_with_noise(const ChainSetup& setup);

// SNRs; phase-noise aware through chain_variance. The signal itself is not
// rotated, only the noise ellipse.
double snr_conventional(const ChainSetup& setup, const SignalModel& sig);
double snr_amplified(const ChainSetup& setup, const SignalModel& sig);
// epsilon = SNR_amp / SNR_conv; independent of the signal power.
double snr_enhancement(const ChainSetup& setup);

struct MetricsReport {
    QuadVariance detected{};  // variance at the photodiode of the active scheme
    double snr_conv = 0.0;
    std::optional<double> v_eff{};
    std::optional<double> eta_eff{};
    std::optional<double> snr_amp{};
    std::optional<double> epsilon{};
    double p_sig = 1.0;
    bool amplified = false;
};

MetricsReport compute_metrics(const ChainSetup& setup, const SignalModel& sig);

}  // namespace sqzamp

#endif  // SQZAMP_METRICS_HPP
