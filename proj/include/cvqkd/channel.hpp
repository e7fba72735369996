#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "cvqkd/modulation.hpp"

namespace cvqkd {

struct LinkParams {
    double length_km = 0.0;
    double loss_db_per_km = 0.2;  // mu
    double excess_noise = 0.0;    // epsilon, shot-noise units at channel input
};

enum class Detection { Homodyne, Heterodyne };

struct DetectorParams {
    Detection mode = Detection::Homodyne;
    double efficiency = 1.0;        // eta in (0, 1]
    double electronic_noise = 0.0;  // eps_ele, shot-noise units
};

/// Input-referred noise decomposition of a link + detector:
///   chi_line  = 1/T - 1 + eps
///   chi_det   = [(1-eta) + eps_ele]/eta            (homodyne)
///             = [1 + (1-eta) + 2 eps_ele]/eta       (heterodyne)
///   chi_total = chi_line + chi_det/T
/// epr_variance is the variance N of the EPR state modelling the trusted
/// detector noise; it diverges at eta = 1 and is absent there, in which case
/// the covariance conditioning bypasses the beamsplitter detector model.
struct NoiseBudget {
    double transmittance = 1.0;
    double chi_line = 0.0;
    double chi_det = 0.0;
    double chi_total = 0.0;
    std::optional<double> epr_variance;
    Detection mode = Detection::Homodyne;
    double efficiency = 1.0;
};

/// T = 10^(-mu L / 10).
double transmittance(const LinkParams& link);

/// Full noise budget; throws std::invalid_argument on eta outside (0,1] or
/// negative noise parameters, or if the implied EPR variance would be < 1.
NoiseBudget noise_budget(const LinkParams& link, const DetectorParams& det);

/// Empirical x-quadrature statistics from a Monte-Carlo run of the
/// Gaussianized channel model (signal mean sqrt(eta T) x_A, additive noise of
/// variance eta T (1 + chi_total) in measured units).
struct QuadratureStats {
    double v_b = 0.0;           // total variance
    double v_b_given_a = 0.0;   // conditional variance after regressing on x_A
    double std_error = 0.0;     // standard error of the variance estimates
    std::uint64_t seed = 0;
    std::size_t n_samples = 0;
};

/// Deterministic under a fixed seed (xoshiro-free: mt19937_64 + Box-Muller,
/// no library-dependent distributions). Requires n_samples >= 1e4.
QuadratureStats simulate_quadratures(const ModulationScheme& scheme,
                                     const LinkParams& link,
                                     const DetectorParams& det,
                                     std::size_t n_samples,
                                     std::uint64_t seed);

}  // namespace cvqkd
