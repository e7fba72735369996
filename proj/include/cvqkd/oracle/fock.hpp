#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cvqkd/modulation.hpp"

// Brute-force ground truth in a truncated number basis. Everything the
// analytic modulation layer claims (spectra, ladder relations, correlations,
// purification structure) is rebuilt here from raw coherent-state vectors and
// dense matrices, with no shared code path. Test support: this library is
// linked by the test suites and the `validate` subcommand, never by the sweep.
namespace cvqkd::fock {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FockState {
    Vector amplitudes;  // length n_max + 1
    int n_max = 0;
};

struct FockOperator {
    Matrix entries;
    bool hermitian = false;
};

/// Two-mode pure state sum_{m,n} c(m,n) |m>|n>.
struct TwoModeState {
    Matrix amplitudes;
};

/// n_max = max(32, ceil(x + 10 sqrt(x) + 20)) keeps the neglected coherent
/// tail mass below 1e-15 for x = alpha^2 <= 25.
int default_truncation(double alpha);

/// c_n = e^{-|beta|^2/2} beta^n / sqrt(n!). Throws TruncationError if the tail
/// mass beyond n_max is not < 1e-15.
FockState coherent_fock(Complex beta, int n_max);

/// Equal-weight mixture of the N coherent projectors at phases 2 pi k / N.
FockOperator mixture_density(int n_states, double alpha, int n_max);

/// Ensemble eigenstate supported on Fock levels == k (mod N), renormalized in
/// the truncated space.
FockState phi_state(int k, int n_states, double alpha, int n_max);

/// |Psi_8> = sum_k sqrt(lambda_k) |phi_k>|phi_k> for the 8-state ensemble.
TwoModeState purification(double alpha, int n_max);

/// The 8 orthonormal measurement states (1/(2 sqrt 2)) sum_m e^{i k m pi/4} |phi_m>.
std::vector<FockState> psi_measurement_states(double alpha, int n_max);

/// Index of the coherent state (phase 2 pi j / 8) that projecting mode 1 of
/// |Psi_8> onto psi_k leaves in mode 2.
int psi_paired_coherent_index(int k);

/// <Psi| ab + a+b+ |Psi> on the truncated two-mode state.
double numeric_correlation(const TwoModeState& state);

/// Two-mode squeezed vacuum of quadrature variance v (Gaussian benchmark).
TwoModeState two_mode_squeezed(double v, int n_max);

/// Truncated annihilation matrix, a(m, m+1) = sqrt(m+1).
Matrix annihilation(int n_max);

/// Reduced density matrix of one mode of a two-mode pure state (mode = 0 or 1).
Matrix reduced_density(const TwoModeState& state, int mode);

/// <n> of a (normalized) state.
double mean_photon(const FockState& state);

/// <2 a+a + 1> on mode 0 of a two-mode state: its quadrature variance.
double quadrature_variance_mode0(const TwoModeState& state);

/// Eigenvalues of a mixture density sorted into residue classes by maximal
/// overlap of the eigenvectors with the analytic phi states. Entry k is the
/// numeric eigenvalue matched to class k.
std::vector<double> class_sorted_eigenvalues(const FockOperator& rho, int n_states,
                                             double alpha);

double min_eigenvalue(const FockOperator& rho);

}  // namespace cvqkd::fock
