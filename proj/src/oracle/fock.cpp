#include "cvqkd/oracle/fock.hpp"

#include <cmath>

namespace cvqkd::fock {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTailBound = 1e-15;

/// Poisson tail mass beyond n_max, summed directly (no cancellation).
double poisson_tail(double mean, int n_max) {
    if (mean == 0.0) return 0.0;
    double tail = 0.0;
    const double log_mean = std::log(mean);
    for (int m = n_max + 1;; ++m) {
        const double term = std::exp(-mean + m * log_mean - std::lgamma(m + 1.0));
        tail += term;
        if (term < 1e-3 * kTailBound && m > mean) break;
        if (m > n_max + 2000) break;
    }
    return tail;
}

}  // namespace

int default_truncation(double alpha) {
    const double x = alpha * alpha;
    const int rule = static_cast<int>(std::ceil(x + 10.0 * std::sqrt(x) + 20.0));
    return std::max(32, rule);
}

FockState coherent_fock(Complex beta, int n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    const double mag = std::abs(beta);
    const double tail = poisson_tail(mag * mag, n_max);
    if (tail >= kTailBound)
        throw TruncationError("coherent-state tail mass " + std::to_string(tail) +
                              " exceeds the truncation bound; raise n_max");

    FockState state;
    state.n_max = n_max;
    state.amplitudes = Vector::Zero(n_max + 1);
    if (mag == 0.0) {
        state.amplitudes[0] = 1.0;
        return state;
    }
    const double phase = std::arg(beta);
    const double log_mag = std::log(mag);
    for (int n = 0; n <= n_max; ++n) {
        const double ln_amp = -0.5 * mag * mag + n * log_mag - 0.5 * std::lgamma(n + 1.0);
        state.amplitudes[n] = std::polar(std::exp(ln_amp), phase * n);
    }
    return state;
}

FockOperator mixture_density(int n_states, double alpha, int n_max) {
    if (n_states < 2) throw std::invalid_argument("n_states must be >= 2");
    FockOperator rho;
    rho.hermitian = true;
    rho.entries = Matrix::Zero(n_max + 1, n_max + 1);
    for (int k = 0; k < n_states; ++k) {
        const Complex beta = std::polar(alpha, 2.0 * kPi * k / n_states);
        const Vector v = coherent_fock(beta, n_max).amplitudes;
        rho.entries += (v * v.adjoint()) / static_cast<double>(n_states);
    }
    return rho;
}

FockState phi_state(int k, int n_states, double alpha, int n_max) {
    if (k < 0 || k >= n_states) throw std::invalid_argument("phi_state: k out of range");
    FockState state;
    state.n_max = n_max;
    state.amplitudes = Vector::Zero(n_max + 1);
    if (alpha == 0.0) {
        // Limit state of the class: its lowest Fock level.
        state.amplitudes[k] = 1.0;
        return state;
    }
    const double x = alpha * alpha;
    const double log_alpha = std::log(alpha);
    for (int m = k; m <= n_max; m += n_states)
        state.amplitudes[m] = std::exp(-0.5 * x + m * log_alpha - 0.5 * std::lgamma(m + 1.0));
    const double norm = state.amplitudes.norm();
    if (norm == 0.0) throw TruncationError("phi_state: no support below n_max");
    state.amplitudes /= norm;
    return state;
}

TwoModeState purification(double alpha, int n_max) {
    const auto spectrum = psk_eigenvalues(8, alpha);
    TwoModeState psi;
    psi.amplitudes = Matrix::Zero(n_max + 1, n_max + 1);
    for (int k = 0; k < 8; ++k) {
        const Vector phi = phi_state(k, 8, alpha, n_max).amplitudes;
        psi.amplitudes += std::sqrt(spectrum.lambdas[k]) * (phi * phi.transpose());
    }
    return psi;
}

std::vector<FockState> psi_measurement_states(double alpha, int n_max) {
    std::vector<FockState> states;
    states.reserve(8);
    const double norm = 1.0 / (2.0 * std::sqrt(2.0));
    for (int k = 0; k < 8; ++k) {
        FockState s;
        s.n_max = n_max;
        s.amplitudes = Vector::Zero(n_max + 1);
        for (int m = 0; m < 8; ++m) {
            const Complex phase = std::polar(norm, k * m * kPi / 4.0);
            s.amplitudes += phase * phi_state(m, 8, alpha, n_max).amplitudes;
        }
        states.push_back(std::move(s));
    }
    return states;
}

int psi_paired_coherent_index(int k) { return (8 - (k % 8)) % 8; }

double numeric_correlation(const TwoModeState& state) {
    const Matrix& c = state.amplitudes;
    const int dim = static_cast<int>(c.rows());
    Complex expect_ab = 0.0;
    for (int m = 0; m + 1 < dim; ++m)
        for (int n = 0; n + 1 < dim; ++n)
            expect_ab += std::conj(c(m, n)) * std::sqrt(double(m + 1) * double(n + 1)) *
                         c(m + 1, n + 1);
    return 2.0 * expect_ab.real();
}

TwoModeState two_mode_squeezed(double v, int n_max) {
    if (v < 1.0) throw std::invalid_argument("two_mode_squeezed: variance must be >= 1");
    TwoModeState psi;
    psi.amplitudes = Matrix::Zero(n_max + 1, n_max + 1);
    const double t = std::sqrt((v - 1.0) / (v + 1.0));
    const double head = std::sqrt(1.0 - t * t);
    double coeff = head;
    for (int n = 0; n <= n_max; ++n) {
        psi.amplitudes(n, n) = coeff;
        coeff *= t;
    }
    const double tail = 1.0 - psi.amplitudes.squaredNorm();
    if (tail >= kTailBound)
        throw TruncationError("two-mode squeezed state tail exceeds the truncation bound");
    return psi;
}

Matrix annihilation(int n_max) {
    Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
    for (int m = 0; m < n_max; ++m) a(m, m + 1) = std::sqrt(m + 1.0);
    return a;
}

Matrix reduced_density(const TwoModeState& state, int mode) {
    const Matrix& c = state.amplitudes;
    if (mode == 0) return c * c.adjoint();
    return (c.adjoint() * c).transpose();
}

double mean_photon(const FockState& state) {
    double total = 0.0;
    for (int n = 0; n <= state.n_max; ++n) total += n * std::norm(state.amplitudes[n]);
    return total;
}

double quadrature_variance_mode0(const TwoModeState& state) {
    const Matrix& c = state.amplitudes;
    double n_mean = 0.0;
    for (int m = 0; m < c.rows(); ++m)
        for (int n = 0; n < c.cols(); ++n) n_mean += m * std::norm(c(m, n));
    return 1.0 + 2.0 * n_mean;
}

std::vector<double> class_sorted_eigenvalues(const FockOperator& rho, int n_states,
                                             double alpha) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.entries);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed");

    std::vector<Vector> phis;
    phis.reserve(n_states);
    const int n_max = static_cast<int>(rho.entries.rows()) - 1;
    for (int k = 0; k < n_states; ++k)
        phis.push_back(phi_state(k, n_states, alpha, n_max).amplitudes);

    std::vector<double> by_class(n_states, 0.0);
    const auto& values = solver.eigenvalues();
    for (int i = 0; i < values.size(); ++i) {
        if (values[i] < 1e-14) continue;
        const Vector vec = solver.eigenvectors().col(i);
        int best = 0;
        double best_overlap = 0.0;
        for (int k = 0; k < n_states; ++k) {
            const double ov = std::abs(phis[k].dot(vec));
            if (ov > best_overlap) {
                best_overlap = ov;
                best = k;
            }
        }
        by_class[best] += values[i];
    }
    return by_class;
}

double min_eigenvalue(const FockOperator& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.entries);
    return solver.eigenvalues().minCoeff();
}

}  // namespace cvqkd::fock
