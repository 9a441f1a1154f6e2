#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sqzamp/quadrature.hpp"

using namespace sqzamp;

namespace {

// Independent scalar oracle for the pump/gain relation, evaluated in long
// double to decouple it from the implementation path.
long double pump_oracle(long double g) { return 1.0L - 1.0L / std::sqrt(g); }

double diag_entry_sq(double eta, double g) {
    return 2.0 * eta / (1.0 + (double)pump_oracle(g)) - 1.0;
}
double diag_entry_anti(double eta, double g) {
    return 2.0 * eta / (1.0 - (double)pump_oracle(g)) - 1.0;
}

}  // namespace

TEST_CASE("pump_from_gain matches the scalar oracle") {
    CHECK(pump_from_gain(NonlinearGain(1.0)).value == 0.0);
    CHECK(pump_from_gain(NonlinearGain(1.8)).value ==
          doctest::Approx((double)pump_oracle(1.8L)).epsilon(1e-14));
    CHECK(pump_from_gain(NonlinearGain(1.8)).value ==
          doctest::Approx(0.25464400750007).epsilon(1e-10));
    CHECK(pump_from_gain(NonlinearGain(5.2)).value ==
          doctest::Approx(0.56147099032606).epsilon(1e-10));
}

TEST_CASE("gain_from_pump inverts the relation") {
    CHECK(gain_from_pump(PumpParameter(0.0)).value == 1.0);
    CHECK(gain_from_pump(PumpParameter(0.5)).value == doctest::Approx(4.0));
    CHECK(gain_from_pump(PumpParameter(0.68377223398316)).value ==
          doctest::Approx(10.0).epsilon(1e-10));
}

TEST_CASE("pump/gain round trip over the admissible range") {
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> log_gain(0.0, std::log(1e6));
    for (int i = 0; i < 2000; ++i) {
        const double g = std::exp(log_gain(gen));
        const double back =
            gain_from_pump(pump_from_gain(NonlinearGain(g))).value;
        CHECK(std::abs(back - g) / g < 1e-12);
    }
    std::uniform_real_distribution<double> pump(0.0, 1.0 - 1e-3);
    for (int i = 0; i < 2000; ++i) {
        const double x = pump(gen);
        const double back =
            pump_from_gain(gain_from_pump(PumpParameter(x))).value;
        CHECK(std::abs(back - x) <= 1e-12 * std::max(x, 1.0));
    }
}

TEST_CASE("pump/gain domain errors") {
    CHECK_THROWS_AS(NonlinearGain(0.5), std::domain_error);
    CHECK_THROWS_AS(NonlinearGain(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(PumpParameter(1.0), std::domain_error);
    CHECK_THROWS_AS(PumpParameter(-0.1), std::domain_error);
    CHECK_THROWS_AS(PumpParameter(1.0 - 1e-12), std::domain_error);
}

TEST_CASE("opo_matrices") {
    SUBCASE("lossless passive mirror") {
        auto [m_in, m_l] = opo_matrices(CavityParams(1.0, 1.0));
        CHECK(m_in.m11 == complexd(1.0));
        CHECK(m_in.m22 == complexd(1.0));
        CHECK(m_in.m12 == complexd(0.0));
        CHECK(m_l.max_abs() == 0.0);
    }
    SUBCASE("impedance-matched passive cavity") {
        auto [m_in, m_l] = opo_matrices(CavityParams(0.5, 1.0));
        CHECK(m_in.max_abs() == doctest::Approx(0.0));
        CHECK(std::norm(m_l.m11) + std::norm(m_l.m22) ==
              doctest::Approx(2.0));
    }
    SUBCASE("pumped cavity, eta=0.98 G=1.8") {
        auto [m_in, m_l] = opo_matrices(CavityParams(0.98, 1.8));
        CHECK(m_in.m11.real() ==
              doctest::Approx(diag_entry_sq(0.98, 1.8)).epsilon(1e-13));
        CHECK(m_in.m11.real() == doctest::Approx(0.5621955).epsilon(1e-6));
        CHECK(m_in.m22.real() ==
              doctest::Approx(diag_entry_anti(0.98, 1.8)).epsilon(1e-13));
        CHECK(m_in.m12 == complexd(0.0));
        CHECK(m_in.m21 == complexd(0.0));
        // Cross-check against the conventional-variance closed form at
        // eta_det = 1: V_minus = m11^2 + ml11^2.
        const double x = pump_from_gain(NonlinearGain(1.8)).value;
        const double v_closed = 1.0 - 4.0 * x * 0.98 / ((1 + x) * (1 + x));
        CHECK(std::norm(m_in.m11) + std::norm(m_l.m11) ==
              doctest::Approx(v_closed).epsilon(1e-13));
    }
}

TEST_CASE("opa_matrices swap the squeezed/anti-squeezed roles") {
    SUBCASE("trivial") {
        auto [m_in, m_l] = opa_matrices(CavityParams(1.0, 1.0));
        CHECK(m_in.m11 == complexd(1.0));
        CHECK(m_l.max_abs() == 0.0);
    }
    SUBCASE("eta=0.98 G=2.4 amplifies X_minus") {
        auto [m_in, m_l] = opa_matrices(CavityParams(0.98, 2.4));
        CHECK(m_in.m11.real() ==
              doctest::Approx(diag_entry_anti(0.98, 2.4)).epsilon(1e-13));
        CHECK(m_in.m11.real() == doctest::Approx(2.03641894).epsilon(1e-6));
        CHECK(m_in.m22.real() ==
              doctest::Approx(diag_entry_sq(0.98, 2.4)).epsilon(1e-13));
        CHECK(std::norm(m_in.m11) == doctest::Approx(4.14700211).epsilon(1e-5));
    }
    SUBCASE("impedance matched under gain") {
        // 2*eta + x - 1 = 0 at G = 10 gives eta = (1 - x)/2.
        const double x = pump_from_gain(NonlinearGain(10.0)).value;
        auto [m_in, m_l] = opa_matrices(CavityParams((1.0 - x) / 2.0, 10.0));
        CHECK(std::abs(m_in.m11) < 1e-12);
    }
}

TEST_CASE("rotation matrices") {
    CHECK(rotation(PhaseNoiseAngle(0.0)).m11 == complexd(1.0));
    CHECK(rotation(PhaseNoiseAngle(0.0)).m12 == complexd(0.0));

    const Mat2 quarter = rotation(PhaseNoiseAngle(std::numbers::pi / 2.0));
    CHECK(quarter.m11.real() == doctest::Approx(0.0));
    CHECK(quarter.m12.real() == doctest::Approx(-1.0));
    CHECK(quarter.m21.real() == doctest::Approx(1.0));

    const Mat2 small = rotation(PhaseNoiseAngle(0.01));
    CHECK(small.m11.real() == doctest::Approx(std::cos(0.01)).epsilon(1e-15));
    CHECK(small.m12.real() == doctest::Approx(-std::sin(0.01)).epsilon(1e-15));
    CHECK(small.m21.real() == doctest::Approx(std::sin(0.01)).epsilon(1e-15));

    std::mt19937 gen(11);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        const Mat2 r = rotation(PhaseNoiseAngle(angle(gen)));
        CHECK(std::abs(r.determinant() - complexd(1.0)) < 1e-14);
        // orthogonality: R * R^T = I
        const Mat2 rt{r.m11, r.m21, r.m12, r.m22};
        const Mat2 prod = r * rt;
        CHECK(std::abs(prod.m11 - complexd(1.0)) < 1e-14);
        CHECK(std::abs(prod.m12) < 1e-14);
    }
}

TEST_CASE("conjugate_rotation") {
    const Mat2 m = Mat2::diagonal(0.5622, 1.6306);
    SUBCASE("theta = 0 is the identity conjugation") {
        const Mat2 r = conjugate_rotation(m, PhaseNoiseAngle(0.0));
        CHECK(r.m11 == m.m11);
        CHECK(r.m22 == m.m22);
    }
    SUBCASE("identity is invariant") {
        const Mat2 r =
            conjugate_rotation(Mat2::identity(), PhaseNoiseAngle(0.7));
        CHECK(std::abs(r.m11 - complexd(1.0)) < 1e-15);
        CHECK(std::abs(r.m12) < 1e-15);
    }
    SUBCASE("explicit 2x2 oracle for a diagonal matrix") {
        const double theta = 0.05;
        const Mat2 r = conjugate_rotation(m, PhaseNoiseAngle(theta));
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        // R diag(a,d) R^T = [[a c^2 + d s^2, (a-d) c s], [(a-d) c s, ...]]
        const double a = 0.5622, d = 1.6306;
        CHECK(r.m11.real() == doctest::Approx(a * c * c + d * s * s));
        CHECK(r.m12.real() == doctest::Approx((a - d) * c * s));
        CHECK(r.m21.real() == doctest::Approx((a - d) * c * s));
        CHECK(std::abs(r.determinant() - m.determinant()) < 1e-14);
        CHECK(std::abs(r.trace() - m.trace()) < 1e-14);
    }
}

TEST_CASE("cavity_rates_from_params") {
    const CavityRates r1 = cavity_rates_from_params(CavityParams(0.98, 1.0));
    CHECK(r1.kappa_in == doctest::Approx(0.98));
    CHECK(r1.kappa_l == doctest::Approx(0.02));
    CHECK(r1.coupling_q == 0.0);
    CHECK(r1.pump_phase == 0.0);

    const CavityRates r2 =
        cavity_rates_from_params(CavityParams(1.0, 4.0), 2.0);
    CHECK(r2.kappa_in == doctest::Approx(2.0));
    CHECK(r2.kappa_l == doctest::Approx(0.0));
    CHECK(r2.coupling_q == doctest::Approx(1.0));

    const CavityRates r3 =
        cavity_rates_from_params(CavityParams(0.5, 1.8), 1.0);
    CHECK(r3.kappa_in == doctest::Approx(0.5));
    CHECK(r3.coupling_q == doctest::Approx(0.2546440075).epsilon(1e-9));

    CHECK_THROWS_AS(cavity_rates_from_params(CavityParams(0.5, 2.0), 0.0),
                    std::domain_error);
    CHECK_THROWS_AS(CavityRates(0.5, 0.5, 0.1, 0.3), std::domain_error);
}

TEST_CASE("freq_output_transfer reduces to the closed forms at zero offset") {
    const double etas[] = {0.0, 0.25, 0.5, 0.98, 1.0};
    const double gains[] = {1.0, 1.8, 5.2, 10.0};
    for (double eta : etas) {
        for (double g : gains) {
            const CavityParams p(eta, g);
            const CavityRates rates = cavity_rates_from_params(p);
            for (auto orientation :
                 {SqueezeOrientation::opo, SqueezeOrientation::opa}) {
                auto [f_in, f_l] = freq_output_transfer(
                    rates, FrequencyOffset(0.0), orientation);
                auto [c_in, c_l] = orientation == SqueezeOrientation::opo
                                       ? opo_matrices(p)
                                       : opa_matrices(p);
                CHECK((f_in - c_in).max_abs() < 1e-10);
                CHECK((f_l - c_l).max_abs() < 1e-10);
                CHECK(f_in.max_imag_abs() < 1e-12);
            }
        }
    }
}

TEST_CASE("freq_output_transfer limits") {
    SUBCASE("lossless passive cavity is transparent at resonance") {
        auto [f_in, f_l] =
            freq_output_transfer(cavity_rates_from_params(CavityParams(1.0, 1.0)),
                                 FrequencyOffset(0.0), SqueezeOrientation::opo);
        CHECK((f_in - Mat2::identity()).max_abs() < 1e-12);
        CHECK(f_l.max_abs() < 1e-12);
    }
    SUBCASE("far outside the linewidth everything reflects promptly") {
        auto [f_in, f_l] = freq_output_transfer(
            cavity_rates_from_params(CavityParams(0.7, 3.0)),
            FrequencyOffset(1e8), SqueezeOrientation::opo);
        CHECK((f_in + Mat2::identity()).max_abs() < 1e-6);
        CHECK(f_l.max_abs() < 1e-6);
    }
}

TEST_CASE("passive cavity conserves photon number at any offset") {
    const double etas[] = {0.1, 0.5, 0.9};
    const double omegas[] = {0.0, 0.3, 1.0, 7.0};
    for (double eta : etas) {
        for (double omega : omegas) {
            auto [f_in, f_l] = freq_output_transfer(
                cavity_rates_from_params(CavityParams(eta, 1.0)),
                FrequencyOffset(omega), SqueezeOrientation::opo);
            // diagonal, and |in|^2 + |loss|^2 = 1 per quadrature
            CHECK(std::abs(f_in.m12) < 1e-12);
            CHECK(std::norm(f_in.m11) + std::norm(f_l.m11) ==
                  doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::norm(f_in.m22) + std::norm(f_l.m22) ==
                  doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    // q = 0 input transfer at resonance is (2 eta - 1) I
    auto [f_in, f_l] = freq_output_transfer(
        cavity_rates_from_params(CavityParams(0.3, 1.0)), FrequencyOffset(0.0),
        SqueezeOrientation::opo);
    CHECK(f_in.m11.real() == doctest::Approx(2.0 * 0.3 - 1.0).epsilon(1e-12));
}

TEST_CASE("lossless pumped cavity is minimum uncertainty at resonance") {
    for (double g : {1.3, 2.0, 5.2, 20.0}) {
        auto [f_in, f_l] = freq_output_transfer(
            cavity_rates_from_params(CavityParams(1.0, g)),
            FrequencyOffset(0.0), SqueezeOrientation::opo);
        CHECK(std::abs(f_in.m11) * std::abs(f_in.m22) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}
