// Acceptance suite: one checkable criterion per --criterion value, each
// printing a single PASS/FAIL line (details indented). Exit code is the
// number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cvqkd/keyrate.hpp"
#include "cvqkd/oracle/fock.hpp"
#include "cvqkd/sweep.hpp"

using namespace cvqkd;

namespace {

struct Criterion {
    int id;
    std::string name;
    std::function<bool(std::string&)> run;
};

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bool check(bool ok, std::string& log, const std::string& what) {
    if (!ok) log += "    failed: " + what + "\n";
    return ok;
}

// --- criterion 1: spectrum equivalence --------------------------------------

bool spectrum_equivalence(std::string& log) {
    const double t0 = now_seconds();
    bool ok = true;
    for (double x : {0.125, 0.5, 1.0, 2.0}) {
        const double alpha = std::sqrt(x);
        const int n_max = std::min(64, fock::default_truncation(alpha));
        const auto series = psk_eigenvalues(8, alpha);
        const auto closed = psk8_eigenvalues_closed(alpha);
        const auto numeric =
            fock::class_sorted_eigenvalues(fock::mixture_density(8, alpha, n_max), 8, alpha);
        for (int k = 0; k < 8; ++k) {
            ok &= check(std::abs(series.lambdas[k] - closed.lambdas[k]) < 1e-10, log,
                        "series vs closed, x=" + std::to_string(x) + " k=" + std::to_string(k));
            ok &= check(std::abs(series.lambdas[k] - numeric[k]) < 1e-10, log,
                        "series vs Fock eigen-decomposition, x=" + std::to_string(x) +
                            " k=" + std::to_string(k));
        }
    }
    const double elapsed = now_seconds() - t0;
    ok &= check(elapsed < 5.0, log, "runtime " + std::to_string(elapsed) + " s exceeds 5 s");
    log += "    three routes agree within 1e-10 for x in {0.125, 0.5, 1, 2}; " +
           std::to_string(elapsed) + " s\n";
    return ok;
}

// --- criterion 2: purification checks ---------------------------------------

bool purification_checks(std::string& log) {
    bool ok = true;
    for (double x : {0.125, 0.5, 1.0}) {
        const double alpha = std::sqrt(x);
        const int n_max = fock::default_truncation(alpha);
        const auto psi = fock::purification(alpha, n_max);
        const auto rho = fock::mixture_density(8, alpha, n_max);
        const double frob0 = (fock::reduced_density(psi, 0) - rho.entries).norm();
        const double frob1 = (fock::reduced_density(psi, 1) - rho.entries).norm();
        ok &= check(frob0 < 1e-10 && frob1 < 1e-10, log,
                    "partial trace mismatch at x=" + std::to_string(x));

        const auto psis = fock::psi_measurement_states(alpha, n_max);
        double gram_err = 0.0;
        for (int j = 0; j < 8; ++j)
            for (int k = 0; k < 8; ++k) {
                const auto g = psis[j].amplitudes.dot(psis[k].amplitudes);
                gram_err = std::max(gram_err, std::abs(g - (j == k ? 1.0 : 0.0)));
            }
        ok &= check(gram_err < 1e-10, log, "Gram matrix error at x=" + std::to_string(x));

        double prob_err = 0.0, fid_min = 1.0;
        for (int k = 0; k < 8; ++k) {
            fock::Vector cond = psi.amplitudes.transpose() * psis[k].amplitudes.conjugate();
            const double p = cond.squaredNorm();
            prob_err = std::max(prob_err, std::abs(p - 0.125));
            cond /= std::sqrt(p);
            const auto coh = fock::coherent_fock(
                std::polar(alpha, 2.0 * M_PI * fock::psi_paired_coherent_index(k) / 8.0), n_max);
            fid_min = std::min(fid_min, std::norm(coh.amplitudes.dot(cond)));
        }
        ok &= check(prob_err < 1e-10, log, "projection probability error at x=" + std::to_string(x));
        ok &= check(fid_min > 1.0 - 1e-9, log,
                    "conditional coherent fidelity at x=" + std::to_string(x));
    }
    log += "    partial traces, measurement-state Gram matrix and 1/8 projections verified\n";
    return ok;
}

// --- criterion 3: correlations ----------------------------------------------

bool correlation_checks(std::string& log) {
    bool ok = true;
    for (double v_a : {0.1, 0.25, 0.5, 1.0, 2.0, 3.0}) {
        const double alpha = std::sqrt(v_a / 2.0);
        const int n_max = fock::default_truncation(alpha);
        const double analytic = correlation_z(8, alpha);
        const double numeric = fock::numeric_correlation(fock::purification(alpha, n_max));
        ok &= check(std::abs(analytic - numeric) < 1e-9, log,
                    "numeric vs analytic Z8 at V_A=" + std::to_string(v_a));

        const double z4 = correlation_z(4, alpha);
        const double zg = gaussian_correlation(v_a);
        ok &= check(z4 < analytic && analytic < zg, log,
                    "ordering Z4 < Z8 < ZG at V_A=" + std::to_string(v_a));
        if (v_a <= 1.0) {
            const double ratio = analytic / zg;
            char buf[128];
            std::snprintf(buf, sizeof(buf), "    Z8/ZG at V_A=%g: %.6f (required > 0.98)\n", v_a,
                          ratio);
            log += buf;
            ok &= check(ratio > 0.98, log, "Z8/ZG ratio at V_A=" + std::to_string(v_a));
        }
    }
    return ok;
}

// --- criterion 4: path equivalence ------------------------------------------

bool path_equivalence(std::string& log) {
    bool ok = true;
    double worst_pair = 0.0, worst_unit = 0.0;
    for (double v_a : {0.25, 0.5, 1.0}) {
        const auto src = source_covariance(ModulationScheme::psk_from_variance(8, v_a));
        for (int li = 0; li <= 15; ++li) {
            for (double eps : {0.005, 0.01, 0.02}) {
                const LinkParams link{10.0 * li, 0.2, eps};
                const auto budget = noise_budget(link, {Detection::Homodyne, 0.6, 0.05});
                const auto closed = conditional_spectrum_closed(src, budget);
                const auto matrix = conditional_spectrum_matrix(src, budget);
                for (int i = 0; i < 3; ++i)
                    worst_pair = std::max(worst_pair, std::abs(closed[i] - matrix[i]));
                worst_unit = std::max(worst_unit, std::abs(matrix[2] - 1.0));
            }
        }
    }
    ok &= check(worst_pair < 1e-8, log,
                "closed vs matrix spectra differ by " + std::to_string(worst_pair));
    ok &= check(worst_unit < 1e-6, log,
                "matrix-path minimum eigenvalue deviates from 1 by " + std::to_string(worst_unit));
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "    max |closed - matrix| = %.3g; max |lambda_min - 1| = %.3g over 144 grid "
                  "points\n",
                  worst_pair, worst_unit);
    log += buf;
    return ok;
}

// --- criterion 5: physicality suite -----------------------------------------

bool physicality(std::string& log) {
    bool ok = true;
    double worst = 1.0;
    for (double v_a : {0.25, 0.5, 1.0}) {
        const auto scheme = ModulationScheme::psk_from_variance(8, v_a);
        for (int li = 0; li <= 15; ++li) {
            for (double eps : {0.005, 0.01, 0.02}) {
                for (auto mode : {Detection::Homodyne, Detection::Heterodyne}) {
                    const auto report = secret_key_rate(scheme, {10.0 * li, 0.2, eps},
                                                        {mode, 0.6, 0.05}, 0.8);
                    for (double nu : report.nu_channel) worst = std::min(worst, nu);
                    for (double nu : report.nu_conditional) worst = std::min(worst, nu);
                }
            }
        }
    }
    ok &= check(worst >= 1.0 - 1e-9, log,
                "symplectic eigenvalue " + std::to_string(worst) + " below 1 - 1e-9");

    for (auto mode : {Detection::Homodyne, Detection::Heterodyne}) {
        const auto report = secret_key_rate(ModulationScheme::gaussian(1.0), {0.0, 0.2, 0.0},
                                            {mode, 1.0, 0.0}, 0.8);
        for (double nu : report.nu_channel)
            ok &= check(std::abs(nu - 1.0) < 1e-9, log, "pure-limit channel spectrum");
        for (double nu : report.nu_conditional)
            ok &= check(std::abs(nu - 1.0) < 1e-9, log, "pure-limit conditional spectrum");
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "    minimum symplectic eigenvalue on the grid: %.12f\n", worst);
    log += buf;
    return ok;
}

// --- criterion 6: reference textual claims at the standard parameters -------

bool reference_claims(std::string& log) {
    const double t0 = now_seconds();
    bool ok = true;

    SweepConfig config;  // defaults: PSK8, homodyne, V_A=1, standard hardware
    config.threads = 1;
    const auto rows = run_sweep(config);
    double delta_at_100 = 0.0;
    for (const auto& r : rows)
        if (r.epsilon == 0.005 && r.length_km == 100.0) delta_at_100 = r.delta_i;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "    homodyne delta_I at 100 km, eps=0.005: %.6g\n",
                  delta_at_100);
    log += buf;
    ok &= check(delta_at_100 > 0.0, log, "positive eight-state homodyne key at 100 km");

    const auto crossings = zero_crossings(rows);
    std::snprintf(buf, sizeof(buf), "    zero crossings (eps 0.005/0.01/0.02): %.2f / %.2f / %.2f km\n",
                  crossings[0].length_km.value_or(999.0), crossings[1].length_km.value_or(999.0),
                  crossings[2].length_km.value_or(999.0));
    log += buf;
    ok &= check(crossings.size() == 3 && crossings[0].length_km && crossings[1].length_km &&
                    crossings[2].length_km &&
                    *crossings[0].length_km > *crossings[1].length_km &&
                    *crossings[1].length_km > *crossings[2].length_km,
                log, "zero-crossing distance monotone decreasing in excess noise");

    for (auto mode : {Detection::Homodyne, Detection::Heterodyne}) {
        SweepConfig cfg8;
        cfg8.detection = mode;
        cfg8.excess_noise = {0.005};
        auto cfg4 = cfg8;
        cfg4.protocol = Protocol::Psk4;
        const auto c8 = zero_crossings(run_sweep(cfg8));
        const auto c4 = zero_crossings(run_sweep(cfg4));
        const double l8 = c8[0].length_km.value_or(1e9);
        const double l4 = c4[0].length_km.value_or(1e9);
        std::snprintf(buf, sizeof(buf), "    %s crossing: PSK8 %.2f km vs PSK4 %.2f km\n",
                      detection_name(mode).c_str(), l8, l4);
        log += buf;
        ok &= check(l8 >= l4, log, "eight-state crossing >= four-state (" + detection_name(mode) + ")");
    }

    const double elapsed = now_seconds() - t0;
    ok &= check(elapsed < 60.0, log, "sweep runtime " + std::to_string(elapsed) + " s exceeds 60 s");
    std::snprintf(buf, sizeof(buf), "    total sweep runtime: %.2f s (single-threaded)\n", elapsed);
    log += buf;
    return ok;
}

// --- criterion 7: Monte-Carlo variance agreement ----------------------------

bool monte_carlo(std::string& log) {
    bool ok = true;
    const std::size_t samples = 100000;
    struct Point {
        double length, eps, eta, eps_ele;
    };
    const Point grid[6] = {{0.0, 0.0, 1.0, 0.0},   {10.0, 0.005, 0.6, 0.05},
                           {20.0, 0.005, 0.6, 0.05}, {20.0, 0.02, 0.6, 0.05},
                           {50.0, 0.01, 0.8, 0.01},  {80.0, 0.005, 0.6, 0.05}};
    const auto scheme = ModulationScheme::psk_from_variance(8, 1.0);
    int idx = 0;
    for (const auto& p : grid) {
        const LinkParams link{p.length, 0.2, p.eps};
        const DetectorParams det{Detection::Homodyne, p.eta, p.eps_ele};
        const auto budget = noise_budget(link, det);
        const auto stats = simulate_quadratures(scheme, link, det, samples, 1000 + idx);
        const double scale = p.eta * budget.transmittance;
        const double expect_total = scale * (2.0 + budget.chi_total);
        const double expect_cond = scale * (1.0 + budget.chi_total);
        ok &= check(std::abs(stats.v_b - expect_total) < 5.0 * stats.std_error, log,
                    "total variance at grid point " + std::to_string(idx));
        ok &= check(std::abs(stats.v_b_given_a - expect_cond) < 5.0 * stats.std_error, log,
                    "conditional variance at grid point " + std::to_string(idx));
        ++idx;
    }
    log += "    empirical variances within 5 standard errors at 1e5 samples on 6 grid points\n";
    return ok;
}

// --- criterion 8: determinism ------------------------------------------------

bool determinism(std::string& log) {
    SweepConfig config;
    config.distance = {0.0, 60.0, 5.0};
    const std::string f1 = "acceptance_tmp_run1.csv";
    const std::string f2 = "acceptance_tmp_run2.csv";
    const std::string f4 = "acceptance_tmp_run4.csv";

    emit_csv(run_sweep(config), config, f1);
    emit_csv(run_sweep(config), config, f2);
    auto threaded = config;
    threaded.threads = 4;
    emit_csv(run_sweep(threaded), config, f4);

    const auto b1 = slurp(f1), b2 = slurp(f2), b4 = slurp(f4);
    std::remove(f1.c_str());
    std::remove(f2.c_str());
    std::remove(f4.c_str());

    bool ok = true;
    ok &= check(!b1.empty(), log, "CSV came out empty");
    ok &= check(b1 == b2, log, "two identical runs differ byte-wise");
    ok &= check(b1 == b4, log, "1-thread vs 4-thread outputs differ byte-wise");
    log += "    " + std::to_string(b1.size()) + " bytes, identical across runs and thread counts\n";
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> criteria = {
        {1, "analytic, closed-form and Fock-space spectra agree", spectrum_equivalence},
        {2, "purification, measurement states and projections", purification_checks},
        {3, "correlation cross-check and constellation ordering", correlation_checks},
        {4, "homodyne closed-form vs matrix conditional spectra", path_equivalence},
        {5, "physicality of every symplectic spectrum and pure limits", physicality},
        {6, "reference-parameter key-rate claims and crossings", reference_claims},
        {7, "Monte-Carlo variances match the noise budget", monte_carlo},
        {8, "byte-identical CSV across runs and thread counts", determinism},
    };

    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
    }

    int failures = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        std::string log;
        bool ok = false;
        try {
            ok = c.run(log);
        } catch (const std::exception& e) {
            log += std::string("    exception: ") + e.what() + "\n";
        }
        std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str());
        std::fputs(log.c_str(), stdout);
        if (!ok) ++failures;
    }
    return failures;
}
