#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cvqkd/channel.hpp"
#include "cvqkd/linalg.hpp"
#include "cvqkd/modulation.hpp"

namespace cvqkd {

/// Raised when a covariance matrix fails a physicality check (symplectic
/// eigenvalue below 1 beyond tolerance, negative discriminant, asymmetry).
struct PhysicalityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Covariance of the (Alice, channel-output) pair, stored as the full
/// symmetric 4x4 matrix in (x_A, p_A, x_B, p_B) ordering.
struct TwoModeCovariance {
    SmallMatrix matrix{4, 4};

    static TwoModeCovariance from_blocks(double a, double b, double c);
    double det_a() const { return matrix.block(0, 0, 2, 2).determinant(); }
    double det_b() const { return matrix.block(2, 2, 2, 2).determinant(); }
    double det_c() const { return matrix.block(0, 2, 2, 2).determinant(); }
};

/// Symmetric 2n x 2n covariance matrix, modes interleaved (x1,p1,x2,p2,...).
struct MultiModeCovariance {
    SmallMatrix matrix;
    std::size_t modes() const { return matrix.rows() / 2; }
};

enum class SpectrumPath { ClosedForm, Matrix };

struct KeyRateReport {
    double mutual_info = 0.0;      // I_AB, bits per pulse
    double holevo_bound = 0.0;     // chi_BE, bits per pulse
    double delta_i = 0.0;          // beta * I_AB - chi_BE
    double delta_i_clamped = 0.0;  // max(0, delta_i)
    std::array<double, 2> nu_channel{1.0, 1.0};
    std::array<double, 3> nu_conditional{1.0, 1.0, 1.0};
    // Closed-form conditional spectrum kept alongside for audit when the
    // matrix path was used with homodyne detection.
    std::optional<std::array<double, 3>> nu_conditional_closed;
    SpectrumPath path = SpectrumPath::Matrix;
    // parameter echo
    ModulationScheme scheme;
    LinkParams link;
    DetectorParams detector;
    double beta = 0.0;
    NoiseBudget budget;
    SourceCovariance source;
};

/// G(x) = (x+1) log2(x+1) - x log2 x, the entropy of a thermal mode with
/// symplectic eigenvalue 2x+1. G(0) = 0 by continuity; x in [-1e-12, 0)
/// clamps to 0, anything more negative is a domain error.
double holevo_g(double x);

/// gamma_AB1 = [[V I2, sqrt(T) Z sz], [sqrt(T) Z sz, T(V + chi_line) I2]].
TwoModeCovariance channel_output_covariance(const SourceCovariance& src,
                                            const NoiseBudget& budget);

/// Closed-form pair { sqrt((Delta +- sqrt(Delta^2 - 4 D)) / 2) } with
/// Delta = det gamma_A + det gamma_B + 2 det sigma_AB and D = det gamma_AB
/// (the standard convention). Throws PhysicalityError if the smaller value
/// falls below 1 - 1e-6.
std::array<double, 2> symplectic_eigenvalues_2mode(const TwoModeCovariance& cov);

/// Symplectic spectrum of an n-mode covariance matrix (n <= 4): moduli of the
/// eigenvalues of Omega*gamma, obtained from the even characteristic-polynomial
/// coefficients (the spectrum of (Omega*gamma)^2 is real), sorted descending.
std::vector<double> symplectic_eigenvalues_general(const MultiModeCovariance& cov);

/// Conditional three-mode spectrum after Bob's measurement.
/// Homodyne: closed forms A = (Delta chi_hom + V sqrt(D) + T(V+chi_line)) / (T(V+chi_T)),
/// B = sqrt(D)(V + sqrt(D) chi_hom) / (T(V+chi_T)), lambda_{3,4} from the usual
/// pair formula, lambda_5 = 1. Heterodyne delegates to the matrix path, which
/// is the authoritative route for that detection.
std::array<double, 3> conditional_spectrum_closed(const SourceCovariance& src,
                                                  const NoiseBudget& budget);

/// Conditional spectrum from the explicit detector model: gamma_AB1 extended
/// by an EPR pair of variance N, beamsplitter of transmittance eta on
/// (B1, F0), modes reordered to (A, F, G | B), then the measurement update
/// gamma' = gamma_AFG - sigma^T H sigma with H the homodyne pseudo-inverse or
/// the heterodyne (gamma_B + I)^-1. At eta = 1 the detector model degenerates
/// and conditioning is applied directly to mode B1.
std::array<double, 3> conditional_spectrum_matrix(const SourceCovariance& src,
                                                  const NoiseBudget& budget);

/// Diagnostic comparison of heterodyne conditional-spectrum routes: the value
/// actually used (matrix path) against two closed-form candidates. The
/// "legacy" candidate mirrors a published variant that mixes homodyne and
/// heterodyne noise terms and may have no real spectrum; the "general-Z"
/// candidate (chi_het throughout, + 2 T Z^2 cross term) matches the matrix
/// path and is unit-tested against it.
struct HetSpectrumComparison {
    double a_matrix = 0.0, b_matrix = 0.0;
    double a_general = 0.0, b_general = 0.0;
    double a_legacy = 0.0, b_legacy = 0.0;
    bool legacy_real = false;                    // legacy discriminant >= 0
    std::array<double, 2> legacy_spectrum{0, 0};  // valid when legacy_real
};
HetSpectrumComparison heterodyne_spectrum_comparison(const SourceCovariance& src,
                                                     const NoiseBudget& budget);

/// I_AB = 1/2 log2((V + chi_T)/(1 + chi_T)); doubled for heterodyne.
double mutual_information(const SourceCovariance& src, const NoiseBudget& budget);

/// Assembles the full report: I_AB, channel and conditional symplectic
/// spectra on the requested path, chi_BE as the entropy difference, and
/// delta_I = beta I_AB - chi_BE (raw and clamped).
KeyRateReport secret_key_rate(const ModulationScheme& scheme, const LinkParams& link,
                              const DetectorParams& det, double beta,
                              SpectrumPath path = SpectrumPath::Matrix);

}  // namespace cvqkd
