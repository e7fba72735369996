#pragma once

#include <vector>

namespace cvqkd {

enum class ModulationKind { Psk, Gaussian };

/// What Alice sends: an N-state PSK constellation of amplitude alpha, or the
/// Gaussian reference of the same modulation variance. Quadratures are in
/// shot-noise units (vacuum variance 1), so V_A = 2*alpha^2 and V = V_A + 1.
struct ModulationScheme {
    ModulationKind kind = ModulationKind::Psk;
    int n_states = 8;    // PSK constellation size; unused for Gaussian
    double alpha = 0.0;  // coherent amplitude, >= 0

    static ModulationScheme psk(int n_states, double alpha);
    static ModulationScheme psk_from_variance(int n_states, double v_a);
    static ModulationScheme gaussian(double v_a);

    double modulation_variance() const { return 2.0 * alpha * alpha; }
    double ensemble_variance() const { return modulation_variance() + 1.0; }
};

/// Eigenvalues of the equal-weight PSK ensemble density operator,
/// lambda_k = Poisson(alpha^2) mass on the residue class k (mod N).
struct PskSpectrum {
    std::vector<double> lambdas;
    double alpha = 0.0;
    int n_states = 0;
};

/// Entries of the two-mode source covariance [[X*I2, Z*sz], [Z*sz, Y*I2]]
/// with sz = diag(1, -1).
struct SourceCovariance {
    double x = 1.0;
    double y = 1.0;
    double z = 0.0;
};

/// Residue-class Poisson spectrum for an N-state constellation. The series for
/// each class is summed until the next term falls below 1e-18 of the partial
/// sum. Throws std::invalid_argument for alpha < 0 or n_states < 2.
PskSpectrum psk_eigenvalues(int n_states, double alpha);

/// The eight 8-state eigenvalues in closed form (cosh/cos combinations);
/// retained as an independent cross-check of psk_eigenvalues(8, alpha).
PskSpectrum psk8_eigenvalues_closed(double alpha);

/// Quadrature correlation Z_N = 2 alpha^2 sum_k lambda_{k-1}^{3/2} / sqrt(lambda_k)
/// (cyclic index). Defined as 0 at alpha = 0 by its limit.
double correlation_z(int n_states, double alpha);

/// Gaussian-modulation correlation Z_G = sqrt(V^2 - 1), V = V_A + 1.
double gaussian_correlation(double v_a);

/// X = Y = 1 + V_A; Z is the scheme's correlation (PSK or Gaussian).
SourceCovariance source_covariance(const ModulationScheme& scheme);

}  // namespace cvqkd
