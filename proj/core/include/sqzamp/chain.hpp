#ifndef SQZAMP_CHAIN_HPP
#define SQZAMP_CHAIN_HPP

#include <optional>
#include <span>
#include <vector>

#include "sqzamp/quadrature.hpp"

namespace sqzamp {

// Vacuum-noise entry ports of the detection chain.
enum class Port { in, lo, prop, la, det };

const char* port_name(Port p);

struct ChannelEfficiencies {
    double eta_prop = 1.0;
    double eta_det = 1.0;

    ChannelEfficiencies() = default;
    ChannelEfficiencies(double eta_prop, double eta_det);
};

enum class PhaseNoiseMode { deterministic, gaussian_rms };

// Full experiment description. The conventional scheme is encoded by an
// absent OPA.
struct ChainSetup {
    CavityParams opo{};
    std::optional<CavityParams> opa{};
    ChannelEfficiencies efficiencies{};
    PhaseNoiseAngle theta_opo{};
    PhaseNoiseAngle theta_opa{};
    PhaseNoiseMode phase_noise_mode = PhaseNoiseMode::deterministic;

    bool amplified() const { return opa.has_value(); }
    // eta_sqz = eta_opo * eta_det (conventional squeezing efficiency)
    double eta_sqz() const {
        return opo.escape_efficiency * efficiencies.eta_det;
    }
    // eta_sqz_tilde = eta_opo * eta_prop (amplified-scheme squeezing efficiency)
    double eta_sqz_tilde() const {
        return opo.escape_efficiency * efficiencies.eta_prop;
    }
    bool has_phase_noise() const {
        return theta_opo.theta != 0.0 || theta_opa.theta != 0.0;
    }
};

// One labeled transfer matrix from a vacuum entry port to the detector.
struct ChannelTransfer {
    Port port;
    Mat2 matrix;
};

// Pair of vacuum-normalized output variances.
struct QuadVariance {
    double v_minus = 1.0;
    double v_plus = 1.0;

    QuadVariance() = default;
    QuadVariance(double v_minus, double v_plus);

    double uncertainty_product() const { return v_minus * v_plus; }
};

// Three channels (in, lo, det) of the conventional scheme, with the OPO
// rotation applied when theta_opo != 0.
std::vector<ChannelTransfer> conventional_chain(const ChainSetup& setup);

// Five channels (in, lo, prop, la, det) of the amplified scheme.
std::vector<ChannelTransfer> amplified_chain(const ChainSetup& setup);

// V_i = sum over channels of the squared row magnitudes, assuming unit
// variance uncorrelated vacuum at every port.
QuadVariance variance_from_chain(std::span<const ChannelTransfer> channels);

// Closed forms; both require zero phase-noise angles.
QuadVariance conventional_variance(const ChainSetup& setup);
QuadVariance amplified_variance(const ChainSetup& setup);

// V_minus*cos^2(theta) + V_plus*sin^2(theta)
double phase_noise_projection(const QuadVariance& v, PhaseNoiseAngle theta);

// Exact expectation of the projection over theta ~ Normal(0, theta_rms).
double gaussian_phase_average(const QuadVariance& v, PhaseNoiseAngle theta_rms);

// Detected variance of the setup's active scheme, honoring the phase-noise
// mode: deterministic angles enter the rotated chain directly; gaussian_rms
// averages the rotated chain exactly over Normal(0, theta) angles.
QuadVariance chain_variance(const ChainSetup& setup);

}  // namespace sqzamp

#endif  // SQZAMP_CHAIN_HPP
