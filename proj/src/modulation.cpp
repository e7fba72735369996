#include "cvqkd/modulation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cvqkd {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

ModulationScheme ModulationScheme::psk(int n_states, double alpha) {
    require(n_states >= 2, "PSK constellation needs at least 2 states");
    require(alpha >= 0.0, "coherent amplitude must be >= 0");
    return {ModulationKind::Psk, n_states, alpha};
}

ModulationScheme ModulationScheme::psk_from_variance(int n_states, double v_a) {
    require(v_a >= 0.0, "modulation variance must be >= 0");
    return psk(n_states, std::sqrt(v_a / 2.0));
}

ModulationScheme ModulationScheme::gaussian(double v_a) {
    require(v_a >= 0.0, "modulation variance must be >= 0");
    return {ModulationKind::Gaussian, 0, std::sqrt(v_a / 2.0)};
}

PskSpectrum psk_eigenvalues(int n_states, double alpha) {
    require(n_states >= 2, "PSK constellation needs at least 2 states");
    require(alpha >= 0.0, "coherent amplitude must be >= 0");

    const double x = alpha * alpha;
    PskSpectrum spec;
    spec.alpha = alpha;
    spec.n_states = n_states;
    spec.lambdas.assign(n_states, 0.0);

    if (x == 0.0) {
        spec.lambdas[0] = 1.0;
        return spec;
    }

    const double log_x = std::log(x);
    for (int k = 0; k < n_states; ++k) {
        double sum = 0.0;
        // Poisson mass on m = k, k+N, k+2N, ...; factorials in log space.
        for (int m = k;; m += n_states) {
            const double term = std::exp(-x + m * log_x - std::lgamma(m + 1.0));
            sum += term;
            if (term < 1e-18 * sum && m > x) break;
        }
        spec.lambdas[k] = sum;
    }
    return spec;
}

PskSpectrum psk8_eigenvalues_closed(double alpha) {
    require(alpha >= 0.0, "coherent amplitude must be >= 0");
    const double x = alpha * alpha;
    const double r2 = std::sqrt(2.0);
    const double c = std::cos(x), ch = std::cosh(x);
    const double s = std::sin(x), sh = std::sinh(x);
    const double c2 = std::cos(x / r2), ch2 = std::cosh(x / r2);
    const double s2 = std::sin(x / r2), sh2 = std::sinh(x / r2);
    const double e = 0.25 * std::exp(-x);

    PskSpectrum spec;
    spec.alpha = alpha;
    spec.n_states = 8;
    spec.lambdas = {
        e * (ch + c + 2.0 * c2 * ch2),
        e * (sh + s + r2 * c2 * sh2 + r2 * s2 * ch2),
        e * (ch - c + 2.0 * s2 * sh2),
        e * (sh - s - r2 * c2 * sh2 + r2 * s2 * ch2),
        e * (ch + c - 2.0 * c2 * ch2),
        e * (sh + s - r2 * c2 * sh2 - r2 * s2 * ch2),
        e * (ch - c - 2.0 * s2 * sh2),
        e * (sh - s + r2 * c2 * sh2 - r2 * s2 * ch2),
    };
    return spec;
}

double correlation_z(int n_states, double alpha) {
    require(alpha >= 0.0, "coherent amplitude must be >= 0");
    if (alpha == 0.0) return 0.0;  // every term's limit vanishes

    const auto spec = psk_eigenvalues(n_states, alpha);
    const auto& lam = spec.lambdas;
    double sum = 0.0;
    for (int k = 0; k < n_states; ++k) {
        const double prev = lam[(k + n_states - 1) % n_states];
        if (prev <= 0.0) continue;  // underflowed class, term limit is 0
        sum += prev * std::sqrt(prev / lam[k]);
    }
    return 2.0 * alpha * alpha * sum;
}

double gaussian_correlation(double v_a) {
    require(v_a >= 0.0, "modulation variance must be >= 0");
    const double v = v_a + 1.0;
    return std::sqrt(v * v - 1.0);
}

SourceCovariance source_covariance(const ModulationScheme& scheme) {
    const double v_a = scheme.modulation_variance();
    SourceCovariance cov;
    cov.x = cov.y = 1.0 + v_a;
    cov.z = scheme.kind == ModulationKind::Gaussian
                ? gaussian_correlation(v_a)
                : correlation_z(scheme.n_states, scheme.alpha);
    return cov;
}

}  // namespace cvqkd
