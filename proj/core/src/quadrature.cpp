#include "sqzamp/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sqzamp {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw std::domain_error(std::string(name) + " must be finite");
    }
}

}  // namespace

Mat2 Mat2::inverse() const {
    const complexd det = determinant();
    if (std::abs(det) == 0.0) {
        throw std::runtime_error("Mat2::inverse: singular matrix");
    }
    const complexd inv = 1.0 / det;
    return {inv * m22, -inv * m12, -inv * m21, inv * m11};
}

double Mat2::max_abs() const {
    return std::max(std::max(std::abs(m11), std::abs(m12)),
                    std::max(std::abs(m21), std::abs(m22)));
}

double Mat2::max_imag_abs() const {
    return std::max(std::max(std::abs(m11.imag()), std::abs(m12.imag())),
                    std::max(std::abs(m21.imag()), std::abs(m22.imag())));
}

NonlinearGain::NonlinearGain(double g) : value(g) {
    require_finite(g, "gain");
    if (g < 1.0) {
        throw std::domain_error("gain must be >= 1, got " + std::to_string(g));
    }
}

PumpParameter::PumpParameter(double x) : value(x) {
    require_finite(x, "pump parameter");
    if (x < 0.0) {
        throw std::domain_error("pump parameter must be >= 0, got " +
                                std::to_string(x));
    }
    if (x > kThresholdGuard) {
        throw std::domain_error(
            "pump parameter too close to oscillation threshold: " +
            std::to_string(x));
    }
}

CavityParams::CavityParams(double escape_efficiency, NonlinearGain gain)
    : escape_efficiency(escape_efficiency), gain(gain) {
    require_finite(escape_efficiency, "escape efficiency");
    if (escape_efficiency < 0.0 || escape_efficiency > 1.0) {
        throw std::domain_error("escape efficiency must lie in [0,1], got " +
                                std::to_string(escape_efficiency));
    }
    (void)pump();  // threshold guard
}

PumpParameter CavityParams::pump() const { return pump_from_gain(gain); }

CavityRates::CavityRates(double kappa_in, double kappa_l, double coupling_q,
                         double pump_phase)
    : kappa_in(kappa_in),
      kappa_l(kappa_l),
      kappa_total(kappa_in + kappa_l),
      coupling_q(coupling_q),
      pump_phase(pump_phase) {
    require_finite(kappa_in, "kappa_in");
    require_finite(kappa_l, "kappa_l");
    require_finite(coupling_q, "coupling_q");
    if (kappa_in < 0.0 || kappa_l < 0.0 || coupling_q < 0.0) {
        throw std::domain_error("cavity rates must be non-negative");
    }
    if (kappa_total <= 0.0) {
        throw std::domain_error("total decay rate must be positive");
    }
    if (coupling_q > kThresholdGuard * kappa_total) {
        throw std::domain_error("coupling at or above oscillation threshold");
    }
    if (pump_phase != 0.0) {
        throw std::domain_error("nonzero pump phase is not supported");
    }
}

FrequencyOffset::FrequencyOffset(double w) : omega(w) {
    require_finite(w, "sideband frequency");
}

PhaseNoiseAngle::PhaseNoiseAngle(double t) : theta(t) {
    require_finite(t, "phase noise angle");
}

PumpParameter pump_from_gain(NonlinearGain g) {
    return PumpParameter(1.0 - 1.0 / std::sqrt(g.value));
}

NonlinearGain gain_from_pump(PumpParameter x) {
    const double d = 1.0 - x.value;
    return NonlinearGain(1.0 / (d * d));
}

namespace {

// Shared body for the two orientations: entries are
//   input: 2*eta/(1 -+ x) - 1,  loss: 2*sqrt(eta*(1-eta))/(1 -+ x)
// with the squeezed/anti-squeezed roles swapped between OPO and OPA.
std::pair<Mat2, Mat2> cavity_matrices(const CavityParams& p,
                                      SqueezeOrientation orientation) {
    const double eta = p.escape_efficiency;
    const double x = p.pump().value;
    const double denom_sq = orientation == SqueezeOrientation::opo ? 1.0 + x
                                                                   : 1.0 - x;
    const double denom_anti = orientation == SqueezeOrientation::opo ? 1.0 - x
                                                                     : 1.0 + x;
    const double loss_num = 2.0 * std::sqrt(eta * (1.0 - eta));
    Mat2 m_in = Mat2::diagonal(2.0 * eta / denom_sq - 1.0,
                               2.0 * eta / denom_anti - 1.0);
    Mat2 m_l = Mat2::diagonal(loss_num / denom_sq, loss_num / denom_anti);
    return {m_in, m_l};
}

}  // namespace

std::pair<Mat2, Mat2> opo_matrices(const CavityParams& p) {
    return cavity_matrices(p, SqueezeOrientation::opo);
}

std::pair<Mat2, Mat2> opa_matrices(const CavityParams& p) {
    return cavity_matrices(p, SqueezeOrientation::opa);
}

Mat2 rotation(PhaseNoiseAngle theta) {
    const double c = std::cos(theta.theta);
    const double s = std::sin(theta.theta);
    return {c, -s, s, c};
}

Mat2 conjugate_rotation(const Mat2& m, PhaseNoiseAngle theta) {
    if (theta.theta == 0.0) {
        return m;
    }
    const Mat2 r = rotation(theta);
    // R^-1 = R^T for a rotation.
    const Mat2 rt{r.m11, r.m21, r.m12, r.m22};
    return r * m * rt;
}

CavityRates cavity_rates_from_params(const CavityParams& p,
                                     double kappa_total) {
    if (!(kappa_total > 0.0) || !std::isfinite(kappa_total)) {
        throw std::domain_error("kappa_total must be positive and finite");
    }
    const double eta = p.escape_efficiency;
    const double x = p.pump().value;
    return CavityRates(eta * kappa_total, (1.0 - eta) * kappa_total,
                       x * kappa_total);
}

std::pair<Mat2, Mat2> freq_output_transfer(const CavityRates& r,
                                           FrequencyOffset omega,
                                           SqueezeOrientation orientation) {
    const complexd i_unit(0.0, 1.0);
    const double q =
        orientation == SqueezeOrientation::opo ? r.coupling_q : -r.coupling_q;

    // Field-basis intracavity matrix, phi = 0.
    const Mat2 m_a{-r.kappa_total, q, q, -r.kappa_total};
    const Mat2 resolvent_arg = Mat2{i_unit * omega.omega, 0.0, 0.0,
                                    i_unit * omega.omega} -
                               m_a;
    const double det_mag = std::abs(resolvent_arg.determinant());
    if (det_mag == 0.0 ||
        resolvent_arg.max_abs() * resolvent_arg.max_abs() / det_mag > 1e12) {
        throw std::runtime_error(
            "freq_output_transfer: resolvent ill-conditioned");
    }
    const Mat2 resolvent = resolvent_arg.inverse();

    // Quadrature conversion Gamma and its inverse.
    const Mat2 gamma{-i_unit, i_unit, 1.0, 1.0};
    const Mat2 gamma_inv = gamma.inverse();

    const Mat2 core = gamma * resolvent * gamma_inv;
    const Mat2 in_tf = (2.0 * r.kappa_in) * core - Mat2::identity();
    const Mat2 loss_tf = (2.0 * std::sqrt(r.kappa_in * r.kappa_l)) * core;
    return {in_tf, loss_tf};
}

}  // namespace sqzamp
