#include "cvqkd/keyrate.hpp"

#include <cmath>
#include <string>

namespace cvqkd {

namespace {

constexpr double kNuTolerance = 1e-9;    // physicality slack on nu >= 1
constexpr double kNuHardLimit = 1e-6;    // beyond this the input is rejected

SmallMatrix sigma_z2() {
    SmallMatrix s(2, 2);
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    return s;
}

SmallMatrix scaled_identity2(double v) {
    SmallMatrix m(2, 2);
    m(0, 0) = m(1, 1) = v;
    return m;
}

/// EPR covariance of variance n: [[n I2, sqrt(n^2-1) sz], [sqrt(n^2-1) sz, n I2]].
SmallMatrix epr_covariance(double n) {
    SmallMatrix m(4, 4);
    const double z = std::sqrt(n * n - 1.0);
    m.set_block(0, 0, scaled_identity2(n));
    m.set_block(2, 2, scaled_identity2(n));
    SmallMatrix c = sigma_z2();
    c *= z;
    m.set_block(0, 2, c);
    m.set_block(2, 0, c);
    return m;
}

double clamp_thermal_arg(double nu) { return std::max(0.0, (nu - 1.0) / 2.0); }

std::array<double, 3> sorted3(std::array<double, 3> v) {
    if (v[0] < v[1]) std::swap(v[0], v[1]);
    if (v[1] < v[2]) std::swap(v[1], v[2]);
    if (v[0] < v[1]) std::swap(v[0], v[1]);
    return v;
}

void check_nu(double nu, const char* where) {
    if (nu < 1.0 - kNuHardLimit)
        throw PhysicalityError(std::string(where) + ": symplectic eigenvalue " +
                               std::to_string(nu) + " below 1");
}

/// Conditional A-mode covariance for a direct measurement of mode B of a
/// two-mode matrix (eta = 1 bypass; the EPR detector model degenerates there).
std::array<double, 3> condition_two_mode_directly(const TwoModeCovariance& cov,
                                                  Detection mode) {
    const SmallMatrix gamma_a = cov.matrix.block(0, 0, 2, 2);
    const SmallMatrix gamma_b = cov.matrix.block(2, 2, 2, 2);
    const SmallMatrix sigma = cov.matrix.block(0, 2, 2, 2);

    SmallMatrix h(2, 2);
    if (mode == Detection::Homodyne) {
        h(0, 0) = 1.0 / gamma_b(0, 0);
    } else {
        SmallMatrix g = gamma_b;
        g(0, 0) += 1.0;
        g(1, 1) += 1.0;
        const double det = g.determinant();
        h(0, 0) = g(1, 1) / det;
        h(1, 1) = g(0, 0) / det;
        h(0, 1) = -g(0, 1) / det;
        h(1, 0) = -g(1, 0) / det;
    }
    const SmallMatrix cond = gamma_a - sigma * h * sigma.transposed();
    const double nu = std::sqrt(std::max(0.0, cond.determinant()));
    check_nu(nu, "conditional spectrum (direct)");
    return {std::max(nu, 1.0 - kNuTolerance), 1.0, 1.0};
}

struct ClosedFormInputs {
    double v, t, chi_line, chi_det, chi_total, delta, det_full;
};

ClosedFormInputs closed_form_inputs(const SourceCovariance& src, const NoiseBudget& budget) {
    ClosedFormInputs in;
    in.v = src.x;
    in.t = budget.transmittance;
    in.chi_line = budget.chi_line;
    in.chi_det = budget.chi_det;
    in.chi_total = budget.chi_total;
    const double b = in.t * (in.v + in.chi_line);
    const double c2 = in.t * src.z * src.z;
    in.delta = in.v * in.v + b * b - 2.0 * c2;
    const double d = in.v * b - c2;
    in.det_full = d * d;
    return in;
}

std::array<double, 2> pair_from_invariants(double delta, double det, const char* where) {
    double disc = delta * delta - 4.0 * det;
    const double scale = std::max(1.0, delta * delta);
    if (disc < 0.0) {
        if (disc < -1e-10 * scale)
            throw PhysicalityError(std::string(where) + ": negative discriminant");
        disc = 0.0;
    }
    const double s = std::sqrt(disc);
    const double hi = 0.5 * (delta + s);
    const double lo = 0.5 * (delta - s);
    if (lo < 0.0 && lo > -1e-12 * scale) return {std::sqrt(hi), 0.0};
    return {std::sqrt(hi), std::sqrt(std::max(lo, 0.0))};
}

}  // namespace

TwoModeCovariance TwoModeCovariance::from_blocks(double a, double b, double c) {
    TwoModeCovariance cov;
    cov.matrix.set_block(0, 0, scaled_identity2(a));
    cov.matrix.set_block(2, 2, scaled_identity2(b));
    SmallMatrix off = sigma_z2();
    off *= c;
    cov.matrix.set_block(0, 2, off);
    cov.matrix.set_block(2, 0, off);
    return cov;
}

double holevo_g(double x) {
    if (x < 0.0) {
        if (x < -1e-12) throw std::domain_error("holevo_g: negative argument");
        return 0.0;
    }
    if (x == 0.0) return 0.0;
    return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

TwoModeCovariance channel_output_covariance(const SourceCovariance& src,
                                            const NoiseBudget& budget) {
    const double t = budget.transmittance;
    return TwoModeCovariance::from_blocks(src.x, t * (src.y + budget.chi_line),
                                          std::sqrt(t) * src.z);
}

std::array<double, 2> symplectic_eigenvalues_2mode(const TwoModeCovariance& cov) {
    const double delta = cov.det_a() + cov.det_b() + 2.0 * cov.det_c();
    const double det = cov.matrix.determinant();
    auto nus = pair_from_invariants(delta, det, "two-mode spectrum");
    check_nu(nus[1], "two-mode spectrum");
    return nus;
}

std::vector<double> symplectic_eigenvalues_general(const MultiModeCovariance& cov) {
    const std::size_t n = cov.modes();
    if (n == 0 || n > 4)
        throw std::invalid_argument("symplectic_eigenvalues_general: 1..4 modes");
    const double scale = std::max(1.0, cov.matrix.max_abs());
    if (cov.matrix.asymmetry() > 1e-9 * scale)
        throw PhysicalityError("covariance matrix is not symmetric");

    const SmallMatrix m = symplectic_form(n) * cov.matrix;
    const auto coeffs = characteristic_polynomial(m);

    // Omega*gamma is similar to its negative, so odd coefficients vanish; a
    // residue signals an eigensolver/input problem.
    for (std::size_t k = 1; k < coeffs.size(); k += 2) {
        const double tol = 1e-7 * std::max(1.0, std::pow(scale, static_cast<double>(k)));
        if (std::abs(coeffs[k]) > tol)
            throw PhysicalityError("characteristic polynomial has odd terms");
    }

    // p(x) = prod_i (x^2 + nu_i^2): substituting s = nu^2 gives the monic
    // polynomial prod_i (s - nu_i^2) with alternating even coefficients.
    std::vector<double> monic(n + 1);
    double sign = 1.0;
    for (std::size_t j = 0; j <= n; ++j) {
        monic[j] = sign * coeffs[2 * j];
        sign = -sign;
    }
    auto squares = real_roots(monic);
    std::vector<double> nus;
    nus.reserve(n);
    for (double s : squares) nus.push_back(std::sqrt(std::max(s, 0.0)));
    for (double nu : nus) check_nu(nu, "general spectrum");
    return nus;  // already sorted descending
}

std::array<double, 3> conditional_spectrum_closed(const SourceCovariance& src,
                                                  const NoiseBudget& budget) {
    if (budget.mode == Detection::Heterodyne)
        return conditional_spectrum_matrix(src, budget);

    const auto in = closed_form_inputs(src, budget);
    const double sq_d = std::sqrt(in.det_full);
    const double denom = in.t * (in.v + in.chi_total);
    const double a = (in.delta * in.chi_det + in.v * sq_d + in.t * (in.v + in.chi_line)) / denom;
    const double b = sq_d * (in.v + sq_d * in.chi_det) / denom;
    const auto pair = pair_from_invariants(a, b, "conditional spectrum (closed)");
    check_nu(pair[1], "conditional spectrum (closed)");
    return {pair[0], pair[1], 1.0};
}

namespace {

/// gamma_AFGB: channel output extended by the detector's EPR pair and the
/// efficiency beamsplitter, modes reordered to (A, F, G, B).
SmallMatrix detector_model_covariance(const TwoModeCovariance& gamma_ab,
                                      const NoiseBudget& budget) {
    const double eta = budget.efficiency;
    SmallMatrix full = direct_sum(gamma_ab.matrix, epr_covariance(*budget.epr_variance));

    SmallMatrix bs = SmallMatrix::identity(8);
    const double se = std::sqrt(eta), sr = std::sqrt(1.0 - eta);
    for (int q = 0; q < 2; ++q) {  // x and p rows of modes B1 (2,3) and F0 (4,5)
        bs(2 + q, 2 + q) = se;
        bs(2 + q, 4 + q) = sr;
        bs(4 + q, 2 + q) = -sr;
        bs(4 + q, 4 + q) = se;
    }
    full = bs.transposed() * full * bs;  // modes now (A, B, F, G)

    constexpr std::size_t order[] = {0, 2, 3, 1};  // -> (A, F, G, B)
    return permute_modes(full, order);
}

}  // namespace

std::array<double, 3> conditional_spectrum_matrix(const SourceCovariance& src,
                                                  const NoiseBudget& budget) {
    const TwoModeCovariance gamma_ab = channel_output_covariance(src, budget);
    if (!budget.epr_variance)  // eta = 1: no beamsplitter model to apply
        return condition_two_mode_directly(gamma_ab, budget.mode);

    const SmallMatrix afgb = detector_model_covariance(gamma_ab, budget);
    const SmallMatrix gamma_afg = afgb.block(0, 0, 6, 6);
    const SmallMatrix gamma_b = afgb.block(6, 6, 2, 2);
    const SmallMatrix sigma = afgb.block(6, 0, 2, 6);

    SmallMatrix h(2, 2);
    if (budget.mode == Detection::Homodyne) {
        // (X gamma_B X)^MP with X = diag(1, 0) is diag(1/gamma_B_xx, 0).
        h(0, 0) = 1.0 / gamma_b(0, 0);
    } else {
        SmallMatrix g = gamma_b;
        g(0, 0) += 1.0;
        g(1, 1) += 1.0;
        const double det = g.determinant();
        h(0, 0) = g(1, 1) / det;
        h(1, 1) = g(0, 0) / det;
        h(0, 1) = -g(0, 1) / det;
        h(1, 0) = -g(1, 0) / det;
    }

    MultiModeCovariance cond;
    cond.matrix = gamma_afg - sigma.transposed() * h * sigma;
    const auto nus = symplectic_eigenvalues_general(cond);
    return sorted3({nus[0], nus[1], nus[2]});
}

HetSpectrumComparison heterodyne_spectrum_comparison(const SourceCovariance& src,
                                                     const NoiseBudget& budget) {
    if (budget.mode != Detection::Heterodyne)
        throw std::invalid_argument("heterodyne_spectrum_comparison needs a heterodyne budget");

    const auto in = closed_form_inputs(src, budget);
    const double sq_d = std::sqrt(in.det_full);
    const double denom2 = in.t * in.t * (in.v + in.chi_total) * (in.v + in.chi_total);

    HetSpectrumComparison cmp;
    const auto nus = conditional_spectrum_matrix(src, budget);
    cmp.a_matrix = nus[0] * nus[0] + nus[1] * nus[1];
    cmp.b_matrix = nus[0] * nus[0] * nus[1] * nus[1];

    cmp.a_general = (in.delta * in.chi_det * in.chi_det + in.det_full + 1.0 +
                     2.0 * in.chi_det * (in.v * sq_d + in.t * (in.v + in.chi_line)) +
                     2.0 * in.t * src.z * src.z) /
                    denom2;
    cmp.b_general = (in.v + sq_d * in.chi_det) * (in.v + sq_d * in.chi_det) / denom2;

    // Legacy variant: homodyne chi in the A numerator and the cross term
    // folded inside the bracket, unsquared.
    const double eta = budget.efficiency;
    const double chi_hom = ((1.0 - eta) + (eta * budget.chi_det - 1.0 - (1.0 - eta)) / 2.0) / eta;
    cmp.a_legacy = (in.delta * chi_hom * chi_hom + in.det_full + 1.0 +
                    2.0 * chi_hom *
                        (in.v * sq_d + in.t * (in.v + in.chi_line) + 2.0 * in.t * src.z)) /
                   denom2;
    cmp.b_legacy = cmp.b_general;

    const double disc = cmp.a_legacy * cmp.a_legacy - 4.0 * cmp.b_legacy;
    cmp.legacy_real = disc >= 0.0;
    if (cmp.legacy_real) {
        const double s = std::sqrt(disc);
        cmp.legacy_spectrum = {std::sqrt(0.5 * (cmp.a_legacy + s)),
                               std::sqrt(std::max(0.0, 0.5 * (cmp.a_legacy - s)))};
    }
    return cmp;
}

double mutual_information(const SourceCovariance& src, const NoiseBudget& budget) {
    const double v = src.x;
    const double i = 0.5 * std::log2((v + budget.chi_total) / (1.0 + budget.chi_total));
    return budget.mode == Detection::Heterodyne ? 2.0 * i : i;
}

KeyRateReport secret_key_rate(const ModulationScheme& scheme, const LinkParams& link,
                              const DetectorParams& det, double beta, SpectrumPath path) {
    if (beta < 0.0 || beta > 1.0)
        throw std::invalid_argument("reconciliation efficiency must be in [0, 1]");

    KeyRateReport report;
    report.scheme = scheme;
    report.link = link;
    report.detector = det;
    report.beta = beta;
    report.path = path;
    report.budget = noise_budget(link, det);
    report.source = source_covariance(scheme);

    const TwoModeCovariance gamma_ab = channel_output_covariance(report.source, report.budget);
    report.nu_channel = symplectic_eigenvalues_2mode(gamma_ab);
    report.mutual_info = mutual_information(report.source, report.budget);

    if (path == SpectrumPath::ClosedForm) {
        report.nu_conditional = conditional_spectrum_closed(report.source, report.budget);
    } else {
        report.nu_conditional = conditional_spectrum_matrix(report.source, report.budget);
        if (det.mode == Detection::Homodyne)
            report.nu_conditional_closed = conditional_spectrum_closed(report.source, report.budget);
    }

    double chi = 0.0;
    for (double nu : report.nu_channel) chi += holevo_g(clamp_thermal_arg(nu));
    for (double nu : report.nu_conditional) chi -= holevo_g(clamp_thermal_arg(nu));
    if (chi < -kNuTolerance)
        throw PhysicalityError("Holevo bound came out negative: " + std::to_string(chi));

    report.holevo_bound = chi;
    report.delta_i = beta * report.mutual_info - chi;
    report.delta_i_clamped = std::max(0.0, report.delta_i);
    return report;
}

}  // namespace cvqkd
