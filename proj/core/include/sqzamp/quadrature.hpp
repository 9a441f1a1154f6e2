#ifndef SQZAMP_QUADRATURE_HPP
#define SQZAMP_QUADRATURE_HPP

#include <complex>
#include <utility>

namespace sqzamp {

using complexd = std::complex<double>;

// Pump parameters closer to threshold than this are rejected outright.
inline constexpr double kThresholdGuard = 1.0 - 1e-9;

// 2x2 complex matrix acting on quadrature columns ordered (X_minus, X_plus),
// i.e. (phase, amplitude). Entries are real for all zero-frequency results
// but stored complex so the sideband solver shares the same type.
struct Mat2 {
    complexd m11{0.0}, m12{0.0}, m21{0.0}, m22{0.0};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {}; }
    static Mat2 diagonal(complexd a, complexd d) { return {a, 0.0, 0.0, d}; }

    complexd determinant() const { return m11 * m22 - m12 * m21; }
    complexd trace() const { return m11 + m22; }
    Mat2 inverse() const;

    // Largest entry magnitude; used for conditioning checks.
    double max_abs() const;
    double max_imag_abs() const;

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
                a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
    }
    friend Mat2 operator*(complexd s, const Mat2& a) {
        return {s * a.m11, s * a.m12, s * a.m21, s * a.m22};
    }
    friend Mat2 operator*(double s, const Mat2& a) { return complexd(s) * a; }
    friend Mat2 operator+(const Mat2& a, const Mat2& b) {
        return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
    }
    friend Mat2 operator-(const Mat2& a, const Mat2& b) {
        return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
    }
};

// Nonlinear gain G of an OPO or OPA; G = 1 means the amplifier is off.
struct NonlinearGain {
    double value = 1.0;

    NonlinearGain() = default;
    explicit NonlinearGain(double g);
};

// Normalized pump parameter x = 1 - 1/sqrt(G), in [0, 1); x -> 1 is the
// oscillation threshold.
struct PumpParameter {
    double value = 0.0;

    PumpParameter() = default;
    explicit PumpParameter(double x);
};

// Escape efficiency and gain of one nonlinear cavity.
struct CavityParams {
    double escape_efficiency = 1.0;
    NonlinearGain gain{};

    CavityParams() = default;
    CavityParams(double escape_efficiency, NonlinearGain gain);
    CavityParams(double escape_efficiency, double gain_value)
        : CavityParams(escape_efficiency, NonlinearGain(gain_value)) {}

    PumpParameter pump() const;
};

// Decay-rate parameterization of the same cavity. pump_phase is fixed to 0;
// nonzero values are rejected so the intracavity matrix stays real.
struct CavityRates {
    double kappa_in = 0.0;
    double kappa_l = 0.0;
    double kappa_total = 0.0;
    double coupling_q = 0.0;
    double pump_phase = 0.0;

    CavityRates() = default;
    CavityRates(double kappa_in, double kappa_l, double coupling_q,
                double pump_phase = 0.0);
};

// Sideband angular frequency in the same normalized units as CavityRates.
struct FrequencyOffset {
    double omega = 0.0;

    FrequencyOffset() = default;
    explicit FrequencyOffset(double w);
};

// Rotation angle; interpreted as a fixed offset or an RMS standard
// deviation depending on the phase-noise mode of the enclosing setup.
struct PhaseNoiseAngle {
    double theta = 0.0;

    PhaseNoiseAngle() = default;
    explicit PhaseNoiseAngle(double t);
};

enum class SqueezeOrientation {
    opo,  // squeezes X_minus
    opa   // amplifies X_minus (orthogonal squeezing angle)
};

// x = 1 - 1/sqrt(G)
PumpParameter pump_from_gain(NonlinearGain g);
// G = 1/(1-x)^2
NonlinearGain gain_from_pump(PumpParameter x);

// Input-port (reflection) and loss-port (transmission) transfer matrices of
// a single cavity at zero sideband frequency. The OPO squeezes X_minus, the
// OPA the orthogonal quadrature.
std::pair<Mat2, Mat2> opo_matrices(const CavityParams& p);
std::pair<Mat2, Mat2> opa_matrices(const CavityParams& p);

Mat2 rotation(PhaseNoiseAngle theta);
// R(theta) * m * R(theta)^-1
Mat2 conjugate_rotation(const Mat2& m, PhaseNoiseAngle theta);

// Bridge from the (eta, x) parameterization to decay rates:
// kappa_in = eta*kappa, kappa_l = (1-eta)*kappa, q = x*kappa.
CavityRates cavity_rates_from_params(const CavityParams& p,
                                     double kappa_total = 1.0);

// Frequency-domain single-cavity solver. Returns the (input, loss) quadrature
// transfer matrices at sideband frequency omega; at omega = 0 this reduces to
// opo_matrices / opa_matrices per the orientation flag.
std::pair<Mat2, Mat2> freq_output_transfer(const CavityRates& r,
                                           FrequencyOffset omega,
                                           SqueezeOrientation orientation);

}  // namespace sqzamp

#endif  // SQZAMP_QUADRATURE_HPP
