#include "sqzamp/chain.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sqzamp {

const char* port_name(Port p) {
    switch (p) {
        case Port::in:
            return "in";
        case Port::lo:
            return "lo";
        case Port::prop:
            return "prop";
        case Port::la:
            return "la";
        case Port::det:
            return "det";
    }
    return "?";
}

ChannelEfficiencies::ChannelEfficiencies(double eta_prop, double eta_det)
    : eta_prop(eta_prop), eta_det(eta_det) {
    for (double eta : {eta_prop, eta_det}) {
        if (!std::isfinite(eta) || eta < 0.0 || eta > 1.0) {
            throw std::domain_error("efficiency must lie in [0,1], got " +
                                    std::to_string(eta));
        }
    }
}

QuadVariance::QuadVariance(double v_minus, double v_plus)
    : v_minus(v_minus), v_plus(v_plus) {
    if (!(v_minus > 0.0) || !(v_plus > 0.0) || !std::isfinite(v_minus) ||
        !std::isfinite(v_plus)) {
        throw std::domain_error("variances must be positive and finite");
    }
    if (v_minus * v_plus < 1.0 - 1e-9) {
        throw std::domain_error("variance pair violates the uncertainty bound");
    }
}

std::vector<ChannelTransfer> conventional_chain(const ChainSetup& setup) {
    if (setup.amplified()) {
        throw std::invalid_argument(
            "conventional_chain: setup carries an OPA; use amplified_chain");
    }
    const auto [m_in, m_l] = opo_matrices(setup.opo);
    const double eta_det = setup.efficiencies.eta_det;
    const double root_det = std::sqrt(eta_det);
    const PhaseNoiseAngle t = setup.theta_opo;
    return {
        {Port::in, root_det * conjugate_rotation(m_in, t)},
        {Port::lo, root_det * conjugate_rotation(m_l, t)},
        {Port::det, std::sqrt(1.0 - eta_det) * Mat2::identity()},
    };
}

std::vector<ChannelTransfer> amplified_chain(const ChainSetup& setup) {
    if (!setup.amplified()) {
        throw std::invalid_argument(
            "amplified_chain: setup has no OPA; use conventional_chain");
    }
    const auto [mo_in, mo_l] = opo_matrices(setup.opo);
    const auto [ma_in, ma_l] = opa_matrices(*setup.opa);
    const double eta_prop = setup.efficiencies.eta_prop;
    const double eta_det = setup.efficiencies.eta_det;

    const Mat2 r_opo = rotation(setup.theta_opo);
    const Mat2 r_opa = rotation(setup.theta_opa);
    const Mat2 r_opo_inv{r_opo.m11, r_opo.m21, r_opo.m12, r_opo.m22};
    const Mat2 r_opa_inv{r_opa.m11, r_opa.m21, r_opa.m12, r_opa.m22};

    const double s_through = std::sqrt(eta_prop * eta_det);
    const Mat2 amp_sandwich = r_opa * ma_in;  // shared left factor

    return {
        {Port::in, s_through * (amp_sandwich * r_opo * mo_in * r_opo_inv *
                                r_opa_inv)},
        {Port::lo, s_through * (amp_sandwich * r_opo * mo_l * r_opo_inv *
                                r_opa_inv)},
        {Port::prop, std::sqrt((1.0 - eta_prop) * eta_det) *
                         (amp_sandwich * r_opa_inv)},
        {Port::la,
         std::sqrt(eta_det) * (r_opa * ma_l * r_opa_inv)},
        {Port::det, std::sqrt(1.0 - eta_det) * Mat2::identity()},
    };
}

QuadVariance variance_from_chain(std::span<const ChannelTransfer> channels) {
    if (channels.empty()) {
        throw std::invalid_argument("variance_from_chain: empty channel list");
    }
    double v_minus = 0.0;
    double v_plus = 0.0;
    for (const ChannelTransfer& ch : channels) {
        const Mat2& m = ch.matrix;
        v_minus += std::norm(m.m11) + std::norm(m.m12);
        v_plus += std::norm(m.m21) + std::norm(m.m22);
    }
    return QuadVariance(v_minus, v_plus);
}

namespace {

void require_no_rotation(const ChainSetup& setup, const char* fn) {
    if (setup.has_phase_noise()) {
        throw std::invalid_argument(
            std::string(fn) +
            ": closed form requires zero phase-noise angles; use "
            "variance_from_chain or phase_noise_projection instead");
    }
}

}  // namespace

QuadVariance conventional_variance(const ChainSetup& setup) {
    require_no_rotation(setup, "conventional_variance");
    if (setup.amplified()) {
        throw std::invalid_argument(
            "conventional_variance: setup carries an OPA");
    }
    const double x = setup.opo.pump().value;
    const double eta_sqz = setup.eta_sqz();
    const double sq = 1.0 + x;
    const double anti = 1.0 - x;
    return QuadVariance(1.0 - 4.0 * x * eta_sqz / (sq * sq),
                        1.0 + 4.0 * x * eta_sqz / (anti * anti));
}

QuadVariance amplified_variance(const ChainSetup& setup) {
    require_no_rotation(setup, "amplified_variance");
    if (!setup.amplified()) {
        throw std::invalid_argument("amplified_variance: setup has no OPA");
    }
    const double x_o = setup.opo.pump().value;
    const double x_a = setup.opa->pump().value;
    const double eta_opa = setup.opa->escape_efficiency;
    const double eta_det = setup.efficiencies.eta_det;
    const double denom_a = (1.0 - x_a) * (1.0 - x_a);
    const double v_minus =
        1.0 + 4.0 * x_a * eta_det * eta_opa / denom_a -
        4.0 * x_o * setup.eta_sqz_tilde() / ((1.0 + x_o) * (1.0 + x_o)) *
            (eta_det * std::pow(2.0 * eta_opa + x_a - 1.0, 2) / denom_a);
    // No closed form is used for the anti-squeezed quadrature of the
    // amplified scheme; it is defined by chain assembly.
    const QuadVariance assembled = variance_from_chain(amplified_chain(setup));
    return QuadVariance(v_minus, assembled.v_plus);
}

double phase_noise_projection(const QuadVariance& v, PhaseNoiseAngle theta) {
    const double c = std::cos(theta.theta);
    const double s = std::sin(theta.theta);
    return v.v_minus * c * c + v.v_plus * s * s;
}

double gaussian_phase_average(const QuadVariance& v,
                              PhaseNoiseAngle theta_rms) {
    if (theta_rms.theta < 0.0) {
        throw std::domain_error("RMS phase noise must be non-negative");
    }
    const double damp = std::exp(-2.0 * theta_rms.theta * theta_rms.theta);
    return 0.5 * (v.v_minus * (1.0 + damp) + v.v_plus * (1.0 - damp));
}

namespace {

QuadVariance deterministic_chain_variance(const ChainSetup& setup) {
    const auto channels =
        setup.amplified() ? amplified_chain(setup) : conventional_chain(setup);
    return variance_from_chain(channels);
}

// The chain variance is a trigonometric polynomial of harmonic order <= 4 in
// each rotation angle, so a 16-point circular quadrature per angle with
// Gaussian-damped harmonics gives the exact Normal(0, sigma) expectation.
constexpr int kFourierPoints = 16;
constexpr int kMaxHarmonic = 4;

void gaussian_weights(double sigma, double* w) {
    for (int m = 0; m < kFourierPoints; ++m) {
        const double theta =
            2.0 * std::numbers::pi * m / static_cast<double>(kFourierPoints);
        double acc = 1.0;
        for (int k = 1; k <= kMaxHarmonic; ++k) {
            acc += 2.0 * std::exp(-0.5 * k * k * sigma * sigma) *
                   std::cos(k * theta);
        }
        w[m] = acc / kFourierPoints;
    }
}

}  // namespace

QuadVariance chain_variance(const ChainSetup& setup) {
    if (setup.phase_noise_mode == PhaseNoiseMode::deterministic ||
        !setup.has_phase_noise()) {
        return deterministic_chain_variance(setup);
    }

    const double sigma_o = setup.theta_opo.theta;
    const double sigma_a = setup.theta_opa.theta;
    if (sigma_o < 0.0 || sigma_a < 0.0) {
        throw std::domain_error("RMS phase noise must be non-negative");
    }

    double w_o[kFourierPoints];
    double w_a[kFourierPoints];
    gaussian_weights(sigma_o, w_o);
    gaussian_weights(sigma_a, w_a);

    ChainSetup point = setup;
    point.phase_noise_mode = PhaseNoiseMode::deterministic;

    const int n_o = sigma_o > 0.0 ? kFourierPoints : 1;
    const int n_a = sigma_a > 0.0 ? kFourierPoints : 1;
    double v_minus = 0.0;
    double v_plus = 0.0;
    for (int mo = 0; mo < n_o; ++mo) {
        point.theta_opo = PhaseNoiseAngle(
            sigma_o > 0.0 ? 2.0 * std::numbers::pi * mo / kFourierPoints : 0.0);
        const double wo = sigma_o > 0.0 ? w_o[mo] : 1.0;
        for (int ma = 0; ma < n_a; ++ma) {
            point.theta_opa = PhaseNoiseAngle(
                sigma_a > 0.0 ? 2.0 * std::numbers::pi * ma / kFourierPoints
                              : 0.0);
            const double wa = sigma_a > 0.0 ? w_a[ma] : 1.0;
            const QuadVariance v = deterministic_chain_variance(point);
            v_minus += wo * wa * v.v_minus;
            v_plus += wo * wa * v.v_plus;
        }
    }
    return QuadVariance(v_minus, v_plus);
}

}  // namespace sqzamp
