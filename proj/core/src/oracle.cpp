#include "sqzamp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqzamp {

namespace rng {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t stream_word(std::uint64_t seed, std::uint32_t port,
                          std::uint64_t sample, std::uint32_t draw) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ (0xd1b54a32d192ed03ULL * (sample + 1)));
    h = mix64(h ^ (0x8cb92ba72f3d8dd7ULL * (port + 1)));
    h = mix64(h ^ (0x9e3779b97f4a7c15ULL * (draw + 1)));
    return h;
}

double uniform01(std::uint64_t seed, std::uint32_t port, std::uint64_t sample,
                 std::uint32_t draw) {
    // (0,1): offset by half an ulp so log() below never sees zero.
    return (static_cast<double>(stream_word(seed, port, sample, draw) >> 11) +
            0.5) *
           0x1.0p-53;
}

double standard_normal(std::uint64_t seed, std::uint32_t port,
                       std::uint64_t sample, std::uint32_t pair) {
    const double u1 = uniform01(seed, port, sample, 2 * pair);
    const double u2 = uniform01(seed, port, sample, 2 * pair + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace rng

namespace {

constexpr std::uint32_t kMinSamples = 10'000;

std::uint32_t port_id(Port p) {
    switch (p) {
        case Port::in:
            return 0;
        case Port::lo:
            return 1;
        case Port::prop:
            return 2;
        case Port::la:
            return 3;
        case Port::det:
            return 4;
    }
    return 0;
}
constexpr std::uint32_t kThetaOpoPort = 5;
constexpr std::uint32_t kThetaOpaPort = 6;

struct RealChannel {
    std::uint32_t port;
    double m11, m12, m21, m22;
};

std::vector<RealChannel> realize(const std::vector<ChannelTransfer>& channels) {
    std::vector<RealChannel> out;
    out.reserve(channels.size());
    for (const ChannelTransfer& ch : channels) {
        out.push_back({port_id(ch.port), ch.matrix.m11.real(),
                       ch.matrix.m12.real(), ch.matrix.m21.real(),
                       ch.matrix.m22.real()});
    }
    return out;
}

struct Accumulator {
    double sum_m = 0.0, sum_p = 0.0, sumsq_m = 0.0, sumsq_p = 0.0;

    void add(const Accumulator& batch) {
        // Compensated addition so the batch reduction order cannot shift
        // results at the reporting precision.
        kahan(sum_m, c_sum_m, batch.sum_m);
        kahan(sum_p, c_sum_p, batch.sum_p);
        kahan(sumsq_m, c_sumsq_m, batch.sumsq_m);
        kahan(sumsq_p, c_sumsq_p, batch.sumsq_p);
    }

    OracleEstimate finish(std::uint64_t n) const {
        const double nd = static_cast<double>(n);
        const double var_m = (sumsq_m - sum_m * sum_m / nd) / (nd - 1.0);
        const double var_p = (sumsq_p - sum_p * sum_p / nd) / (nd - 1.0);
        const double scale = std::sqrt(2.0 / (nd - 1.0));
        return {var_m, var_p, var_m * scale, var_p * scale, n};
    }

  private:
    double c_sum_m = 0.0, c_sum_p = 0.0, c_sumsq_m = 0.0, c_sumsq_p = 0.0;

    static void kahan(double& total, double& comp, double value) {
        const double y = value - comp;
        const double t = total + y;
        comp = (t - total) - y;
        total = t;
    }
};

class ChainSampler {
  public:
    ChainSampler(const ChainSetup& setup, const OracleConfig& cfg)
        : setup_(setup), seed_(cfg.seed) {
        gaussian_ = cfg.phase_noise_mode == PhaseNoiseMode::gaussian_rms &&
                    setup.has_phase_noise();
        if (!gaussian_) {
            ChainSetup fixed = setup;
            fixed.phase_noise_mode = PhaseNoiseMode::deterministic;
            fixed_channels_ = realize(build(fixed));
        }
    }

    void sample(std::uint64_t index, double& out_m, double& out_p) const {
        const std::vector<RealChannel>* channels = &fixed_channels_;
        std::vector<RealChannel> local;
        if (gaussian_) {
            ChainSetup jitter = setup_;
            jitter.phase_noise_mode = PhaseNoiseMode::deterministic;
            if (setup_.theta_opo.theta != 0.0) {
                jitter.theta_opo = PhaseNoiseAngle(
                    setup_.theta_opo.theta *
                    rng::standard_normal(seed_, kThetaOpoPort, index, 0));
            }
            if (setup_.theta_opa.theta != 0.0) {
                jitter.theta_opa = PhaseNoiseAngle(
                    setup_.theta_opa.theta *
                    rng::standard_normal(seed_, kThetaOpaPort, index, 0));
            }
            local = realize(build(jitter));
            channels = &local;
        }
        out_m = 0.0;
        out_p = 0.0;
        for (const RealChannel& ch : *channels) {
            const double xm = rng::standard_normal(seed_, ch.port, index, 0);
            const double xp = rng::standard_normal(seed_, ch.port, index, 1);
            out_m += ch.m11 * xm + ch.m12 * xp;
            out_p += ch.m21 * xm + ch.m22 * xp;
        }
    }

  private:
    static std::vector<ChannelTransfer> build(const ChainSetup& s) {
        return s.amplified() ? amplified_chain(s) : conventional_chain(s);
    }

    ChainSetup setup_;
    std::uint64_t seed_;
    bool gaussian_ = false;
    std::vector<RealChannel> fixed_channels_;
};

void validate_config(const OracleConfig& cfg) {
    if (cfg.n_samples < kMinSamples) {
        throw std::invalid_argument(
            "oracle config: n_samples must be at least 10^4");
    }
    if (cfg.batch_size == 0) {
        throw std::invalid_argument("oracle config: batch_size must be > 0");
    }
}

}  // namespace

OracleEstimate estimate_variance(const ChainSetup& setup,
                                 const OracleConfig& cfg) {
    validate_config(cfg);
    const ChainSampler sampler(setup, cfg);

    Accumulator total;
    std::uint64_t done = 0;
    while (done < cfg.n_samples) {
        const std::uint64_t batch_end =
            std::min(done + cfg.batch_size, cfg.n_samples);
        Accumulator batch;
        for (std::uint64_t i = done; i < batch_end; ++i) {
            double m = 0.0, p = 0.0;
            sampler.sample(i, m, p);
            batch.sum_m += m;
            batch.sum_p += p;
            batch.sumsq_m += m * m;
            batch.sumsq_p += p * p;
        }
        total.add(batch);
        done = batch_end;
    }
    return total.finish(cfg.n_samples);
}

std::vector<OracleEstimate> convergence_report(
    const ChainSetup& setup, const OracleConfig& cfg,
    const std::vector<std::uint64_t>& checkpoints) {
    validate_config(cfg);
    if (checkpoints.empty()) {
        throw std::invalid_argument("convergence_report: no checkpoints");
    }
    for (std::size_t i = 1; i < checkpoints.size(); ++i) {
        if (checkpoints[i] <= checkpoints[i - 1]) {
            throw std::invalid_argument(
                "convergence_report: checkpoints must be strictly ascending");
        }
    }
    if (checkpoints.back() > cfg.n_samples) {
        throw std::invalid_argument(
            "convergence_report: checkpoint exceeds n_samples");
    }

    const ChainSampler sampler(setup, cfg);
    std::vector<OracleEstimate> reports;
    reports.reserve(checkpoints.size());

    Accumulator total;
    std::uint64_t done = 0;
    for (std::uint64_t checkpoint : checkpoints) {
        while (done < checkpoint) {
            const std::uint64_t batch_end =
                std::min({done + cfg.batch_size, checkpoint});
            Accumulator batch;
            for (std::uint64_t i = done; i < batch_end; ++i) {
                double m = 0.0, p = 0.0;
                sampler.sample(i, m, p);
                batch.sum_m += m;
                batch.sum_p += p;
                batch.sumsq_m += m * m;
                batch.sumsq_p += p * p;
            }
            total.add(batch);
            done = batch_end;
        }
        reports.push_back(total.finish(done));
    }
    return reports;
}

}  // namespace sqzamp
