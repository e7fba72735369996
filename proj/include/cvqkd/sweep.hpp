#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvqkd/keyrate.hpp"

namespace cvqkd {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Protocol { Psk4, Psk8, Gaussian };

enum class PathChoice { ClosedForm, Matrix, Both };

struct DistanceGrid {
    double start_km = 0.0;
    double stop_km = 150.0;
    double step_km = 1.0;
};

/// Full description of a key-rate-vs-distance run. Defaults are the standard
/// fibre-system values (eta 60%, eps_ele 0.05, beta 0.8, mu 0.2 dB/km, V_A 1).
struct SweepConfig {
    Protocol protocol = Protocol::Psk8;
    Detection detection = Detection::Homodyne;
    std::optional<double> v_a = 1.0;  // nullopt: optimize per grid point
    double beta = 0.8;
    double eta = 0.6;
    double eps_ele = 0.05;
    double mu_db_per_km = 0.2;
    std::vector<double> excess_noise = {0.005, 0.01, 0.02};
    DistanceGrid distance;
    PathChoice path = PathChoice::Matrix;
    std::uint64_t seed = 1;
    std::string output = "sweep.csv";
    unsigned threads = 1;
};

struct SweepRow {
    Protocol protocol;
    Detection detection;
    double length_km;
    double epsilon;
    double v_a;
    double transmittance;
    double chi_line;
    double chi_det;
    double chi_total;
    double mutual_info;
    double holevo_bound;
    double delta_i;
    double delta_i_clamped;
    std::array<double, 5> lambdas;
    PathChoice path;
};

struct CorrelationRow {
    double v_a;
    double z4;
    double z8;
    double zg;
};

struct ZeroCrossing {
    Protocol protocol;
    Detection detection;
    double epsilon;
    std::optional<double> length_km;  // absent if the rate never turns negative
};

struct OptimizeResult {
    double v_a = 0.0;
    double delta_i = 0.0;
    bool unimodal = true;
    std::size_t evaluations = 0;
};

/// One row per (epsilon, L) grid point, ordered by grid index regardless of
/// thread count. Pure function of the config (the Monte-Carlo sampler is not
/// on this path), so repeated runs are byte-identical after emit_csv.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Linear-in-L interpolation of the last positive-rate distance per
/// (protocol, detection, epsilon) group of a sweep.
std::vector<ZeroCrossing> zero_crossings(const std::vector<SweepRow>& rows);

/// (V_A, Z4, Z8, ZG) per grid value.
std::vector<CorrelationRow> sweep_correlation(const std::vector<double>& v_a_grid);

/// Best modulation variance on [0.05, 2.0]: golden-section search to an
/// interval below 1e-3, with a dense-grid fallback if a coarse scan sees the
/// discrete gradient change sign more than once. Reports a non-positive best
/// rate honestly when no variance yields a positive one.
OptimizeResult optimize_variance(Protocol protocol, Detection detection,
                                 const LinkParams& link, const DetectorParams& det,
                                 double beta);

std::string protocol_name(Protocol p);
std::string detection_name(Detection d);
std::string path_name(PathChoice p);

/// CSV with a '#'-prefixed header block echoing the full config (seed and code
/// version included), the column header, the rows (12 significant digits),
/// and a '#'-prefixed zero-crossing summary block.
void emit_csv(const std::vector<SweepRow>& rows, const SweepConfig& config,
              const std::string& path);

void emit_correlation_csv(const std::vector<CorrelationRow>& rows, const std::string& path);

/// Strict key=value config file: every key required exactly once, unknown or
/// duplicate keys rejected, '#' comments allowed. Errors name the key.
SweepConfig load_config(const std::string& path);
std::string format_config(const SweepConfig& config);
void write_config(const SweepConfig& config, const std::string& path);

}  // namespace cvqkd
