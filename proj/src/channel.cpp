#include "cvqkd/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace cvqkd {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

double transmittance(const LinkParams& link) {
    require(link.length_km >= 0.0, "fibre length must be >= 0");
    require(link.loss_db_per_km >= 0.0, "loss coefficient must be >= 0");
    return std::pow(10.0, -link.loss_db_per_km * link.length_km / 10.0);
}

NoiseBudget noise_budget(const LinkParams& link, const DetectorParams& det) {
    require(link.excess_noise >= 0.0, "excess noise must be >= 0");
    require(det.efficiency > 0.0 && det.efficiency <= 1.0, "detector efficiency must be in (0, 1]");
    require(det.electronic_noise >= 0.0, "electronic noise must be >= 0");

    const double t = transmittance(link);
    const double eta = det.efficiency;
    const bool het = det.mode == Detection::Heterodyne;

    NoiseBudget budget;
    budget.transmittance = t;
    budget.mode = det.mode;
    budget.efficiency = eta;
    budget.chi_line = 1.0 / t - 1.0 + link.excess_noise;
    budget.chi_det = het ? (1.0 + (1.0 - eta) + 2.0 * det.electronic_noise) / eta
                         : ((1.0 - eta) + det.electronic_noise) / eta;
    budget.chi_total = budget.chi_line + budget.chi_det / t;

    if (eta < 1.0) {
        const double n = het ? (eta * budget.chi_det - 1.0) / (1.0 - eta)
                             : eta * budget.chi_det / (1.0 - eta);
        require(n >= 1.0, "detector parameters imply an EPR variance below 1");
        budget.epr_variance = n;
    }
    return budget;
}

QuadratureStats simulate_quadratures(const ModulationScheme& scheme,
                                     const LinkParams& link,
                                     const DetectorParams& det,
                                     std::size_t n_samples,
                                     std::uint64_t seed) {
    require(n_samples >= 10000, "need at least 1e4 samples");

    const NoiseBudget budget = noise_budget(link, det);
    const double gain = std::sqrt(det.efficiency * budget.transmittance);
    const double noise_sd =
        std::sqrt(det.efficiency * budget.transmittance * (1.0 + budget.chi_total));

    std::mt19937_64 rng(seed);
    auto uniform01 = [&rng]() {
        // 53-bit mantissa draw; keeps the stream implementation-independent
        return (rng() >> 11) * 0x1.0p-53;
    };
    auto normal = [&](double sd) {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    };

    // Alice's x-quadrature signal: 2 Re(beta_k) for PSK, N(0, V_A) for Gaussian.
    auto draw_signal = [&]() {
        if (scheme.kind == ModulationKind::Gaussian) {
            return normal(std::sqrt(scheme.modulation_variance()));
        }
        const int k = static_cast<int>(uniform01() * scheme.n_states) % scheme.n_states;
        return 2.0 * scheme.alpha * std::cos(2.0 * kPi * k / scheme.n_states);
    };

    double sum_a = 0.0, sum_b = 0.0, sum_aa = 0.0, sum_bb = 0.0, sum_ab = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double xa = draw_signal();
        const double xb = gain * xa + normal(noise_sd);
        sum_a += xa;
        sum_b += xb;
        sum_aa += xa * xa;
        sum_bb += xb * xb;
        sum_ab += xa * xb;
    }

    const double n = static_cast<double>(n_samples);
    const double mean_a = sum_a / n, mean_b = sum_b / n;
    const double var_a = sum_aa / n - mean_a * mean_a;
    const double var_b = sum_bb / n - mean_b * mean_b;
    const double cov_ab = sum_ab / n - mean_a * mean_b;

    QuadratureStats stats;
    stats.v_b = var_b;
    stats.v_b_given_a = var_a > 0.0 ? var_b - cov_ab * cov_ab / var_a : var_b;
    stats.std_error = var_b * std::sqrt(2.0 / (n - 1.0));
    stats.seed = seed;
    stats.n_samples = n_samples;
    return stats;
}

}  // namespace cvqkd
