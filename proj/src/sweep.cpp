#include "cvqkd/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace cvqkd {

namespace {

constexpr double kVaMin = 0.05;
constexpr double kVaMax = 2.0;

ModulationScheme scheme_for(Protocol protocol, double v_a) {
    switch (protocol) {
        case Protocol::Psk4: return ModulationScheme::psk_from_variance(4, v_a);
        case Protocol::Psk8: return ModulationScheme::psk_from_variance(8, v_a);
        case Protocol::Gaussian: return ModulationScheme::gaussian(v_a);
    }
    throw std::logic_error("unreachable");
}

SpectrumPath spectrum_path(PathChoice choice) {
    return choice == PathChoice::ClosedForm ? SpectrumPath::ClosedForm : SpectrumPath::Matrix;
}

std::size_t grid_points(const DistanceGrid& g) {
    return static_cast<std::size_t>(std::floor((g.stop_km - g.start_km) / g.step_km + 1e-9)) + 1;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

SweepRow evaluate_point(const SweepConfig& config, double epsilon, double length_km) {
    const LinkParams link{length_km, config.mu_db_per_km, epsilon};
    const DetectorParams det{config.detection, config.eta, config.eps_ele};

    double v_a;
    if (config.v_a) {
        v_a = *config.v_a;
    } else {
        v_a = optimize_variance(config.protocol, config.detection, link, det, config.beta).v_a;
    }

    const auto report = secret_key_rate(scheme_for(config.protocol, v_a), link, det,
                                        config.beta, spectrum_path(config.path));

    if (config.path == PathChoice::Both && report.nu_conditional_closed) {
        for (int i = 0; i < 3; ++i) {
            const double diff =
                std::abs(report.nu_conditional[i] - (*report.nu_conditional_closed)[i]);
            if (diff > 1e-7)
                throw PhysicalityError("closed-form and matrix conditional spectra disagree by " +
                                       std::to_string(diff));
        }
    }

    SweepRow row;
    row.protocol = config.protocol;
    row.detection = config.detection;
    row.length_km = length_km;
    row.epsilon = epsilon;
    row.v_a = v_a;
    row.transmittance = report.budget.transmittance;
    row.chi_line = report.budget.chi_line;
    row.chi_det = report.budget.chi_det;
    row.chi_total = report.budget.chi_total;
    row.mutual_info = report.mutual_info;
    row.holevo_bound = report.holevo_bound;
    row.delta_i = report.delta_i;
    row.delta_i_clamped = report.delta_i_clamped;
    row.lambdas = {report.nu_channel[0], report.nu_channel[1], report.nu_conditional[0],
                   report.nu_conditional[1], report.nu_conditional[2]};
    row.path = config.path;
    return row;
}

void validate(const SweepConfig& config) {
    if (config.distance.step_km <= 0.0) throw ConfigError("distance_step_km must be > 0");
    if (config.distance.stop_km < config.distance.start_km)
        throw ConfigError("distance_stop_km must be >= distance_start_km");
    if (config.distance.start_km < 0.0) throw ConfigError("distance_start_km must be >= 0");
    if (config.excess_noise.empty()) throw ConfigError("excess_noise must not be empty");
    for (double e : config.excess_noise)
        if (e < 0.0) throw ConfigError("excess_noise entries must be >= 0");
    if (config.beta < 0.0 || config.beta > 1.0) throw ConfigError("beta must be in [0, 1]");
    if (config.eta <= 0.0 || config.eta > 1.0) throw ConfigError("eta must be in (0, 1]");
    if (config.eps_ele < 0.0) throw ConfigError("eps_ele must be >= 0");
    if (config.mu_db_per_km < 0.0) throw ConfigError("mu_db_per_km must be >= 0");
    if (config.v_a && (*config.v_a < 0.0)) throw ConfigError("v_a must be >= 0 or 'optimize'");
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    validate(config);

    const std::size_t n_l = grid_points(config.distance);
    const std::size_t total = n_l * config.excess_noise.size();
    std::vector<SweepRow> rows(total);

    auto point = [&](std::size_t index) {
        const std::size_t ei = index / n_l;
        const std::size_t li = index % n_l;
        const double length = config.distance.start_km + static_cast<double>(li) * config.distance.step_km;
        rows[index] = evaluate_point(config, config.excess_noise[ei], length);
    };

    const unsigned threads = std::max(1u, config.threads);
    if (threads == 1 || total < 2) {
        for (std::size_t i = 0; i < total; ++i) point(i);
        return rows;
    }

    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (std::size_t i = t; i < total; i += threads) point(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
    return rows;
}

std::vector<ZeroCrossing> zero_crossings(const std::vector<SweepRow>& rows) {
    std::vector<ZeroCrossing> out;
    std::size_t i = 0;
    while (i < rows.size()) {
        std::size_t j = i;
        while (j + 1 < rows.size() && rows[j + 1].epsilon == rows[i].epsilon &&
               rows[j + 1].protocol == rows[i].protocol &&
               rows[j + 1].detection == rows[i].detection)
            ++j;

        ZeroCrossing zc{rows[i].protocol, rows[i].detection, rows[i].epsilon, std::nullopt};
        if (rows[j].delta_i > 0.0) {
            zc.length_km = std::nullopt;  // positive through the end of the grid
        } else {
            std::size_t last_pos = rows.size();
            for (std::size_t k = j; k + 1 > i + 1; --k) {
                if (rows[k - 1].delta_i > 0.0 && rows[k].delta_i <= 0.0) {
                    last_pos = k - 1;
                    break;
                }
            }
            if (last_pos == rows.size()) {
                zc.length_km = rows[i].length_km;  // never positive on the grid
            } else {
                const auto& a = rows[last_pos];
                const auto& b = rows[last_pos + 1];
                zc.length_km = a.length_km + a.delta_i * (b.length_km - a.length_km) /
                                                 (a.delta_i - b.delta_i);
            }
        }
        out.push_back(zc);
        i = j + 1;
    }
    return out;
}

std::vector<CorrelationRow> sweep_correlation(const std::vector<double>& v_a_grid) {
    std::vector<CorrelationRow> rows;
    rows.reserve(v_a_grid.size());
    for (double v_a : v_a_grid) {
        const double alpha = std::sqrt(v_a / 2.0);
        rows.push_back({v_a, correlation_z(4, alpha), correlation_z(8, alpha),
                        gaussian_correlation(v_a)});
    }
    return rows;
}

OptimizeResult optimize_variance(Protocol protocol, Detection detection,
                                 const LinkParams& link, const DetectorParams& det,
                                 double beta) {
    OptimizeResult result;
    const DetectorParams detector{detection, det.efficiency, det.electronic_noise};
    auto rate = [&](double v_a) {
        ++result.evaluations;
        return secret_key_rate(scheme_for(protocol, v_a), link, detector, beta).delta_i;
    };

    // Coarse scan: seed for the search and unimodality probe.
    constexpr int kCoarse = 40;
    std::array<double, kCoarse> vs, fs;
    for (int i = 0; i < kCoarse; ++i) {
        vs[i] = kVaMin + (kVaMax - kVaMin) * i / (kCoarse - 1);
        fs[i] = rate(vs[i]);
    }
    int best = 0;
    for (int i = 1; i < kCoarse; ++i)
        if (fs[i] > fs[best]) best = i;

    int sign_changes = 0;
    double prev_diff = 0.0;
    for (int i = 1; i < kCoarse; ++i) {
        const double diff = fs[i] - fs[i - 1];
        if (diff != 0.0) {
            if (prev_diff != 0.0 && diff * prev_diff < 0.0) ++sign_changes;
            prev_diff = diff;
        }
    }
    result.unimodal = sign_changes <= 1;

    result.v_a = vs[best];
    result.delta_i = fs[best];

    if (result.unimodal) {
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = kVaMin, b = kVaMax;
        double c = b - invphi * (b - a);
        double d = a + invphi * (b - a);
        double fc = rate(c), fd = rate(d);
        while (b - a > 1e-3) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - invphi * (b - a);
                fc = rate(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + invphi * (b - a);
                fd = rate(d);
            }
        }
        const double mid = 0.5 * (a + b);
        const double fm = rate(mid);
        if (fm > result.delta_i) {
            result.v_a = mid;
            result.delta_i = fm;
        }
    } else {
        for (double v = kVaMin; v <= kVaMax + 1e-12; v += 1e-3) {
            const double f = rate(v);
            if (f > result.delta_i) {
                result.v_a = v;
                result.delta_i = f;
            }
        }
    }
    return result;
}

std::string protocol_name(Protocol p) {
    switch (p) {
        case Protocol::Psk4: return "PSK4";
        case Protocol::Psk8: return "PSK8";
        case Protocol::Gaussian: return "Gaussian";
    }
    throw std::logic_error("unreachable");
}

std::string detection_name(Detection d) {
    return d == Detection::Homodyne ? "homodyne" : "heterodyne";
}

std::string path_name(PathChoice p) {
    switch (p) {
        case PathChoice::ClosedForm: return "closed";
        case PathChoice::Matrix: return "matrix";
        case PathChoice::Both: return "both";
    }
    throw std::logic_error("unreachable");
}

std::string format_config(const SweepConfig& config) {
    std::ostringstream os;
    os << "protocol = " << (config.protocol == Protocol::Psk4     ? "psk4"
                            : config.protocol == Protocol::Psk8   ? "psk8"
                                                                  : "gaussian")
       << '\n';
    os << "detection = " << detection_name(config.detection) << '\n';
    os << "v_a = " << (config.v_a ? fmt(*config.v_a) : std::string("optimize")) << '\n';
    os << "beta = " << fmt(config.beta) << '\n';
    os << "eta = " << fmt(config.eta) << '\n';
    os << "eps_ele = " << fmt(config.eps_ele) << '\n';
    os << "mu_db_per_km = " << fmt(config.mu_db_per_km) << '\n';
    os << "excess_noise = ";
    for (std::size_t i = 0; i < config.excess_noise.size(); ++i)
        os << (i ? "," : "") << fmt(config.excess_noise[i]);
    os << '\n';
    os << "distance_start_km = " << fmt(config.distance.start_km) << '\n';
    os << "distance_stop_km = " << fmt(config.distance.stop_km) << '\n';
    os << "distance_step_km = " << fmt(config.distance.step_km) << '\n';
    os << "path = " << path_name(config.path) << '\n';
    os << "seed = " << config.seed << '\n';
    os << "output = " << config.output << '\n';
    os << "threads = " << config.threads << '\n';
    return os.str();
}

void write_config(const SweepConfig& config, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open config file for writing: " + path);
    out << format_config(config);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: '" + value + "'");
    }
    if (used != value.size())
        throw ConfigError("config key '" + key + "': trailing characters in '" + value + "'");
    return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an unsigned integer: '" + value + "'");
    }
    if (used != value.size())
        throw ConfigError("config key '" + key + "': trailing characters in '" + value + "'");
    return v;
}

}  // namespace

SweepConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);

    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (kv.count(key)) throw ConfigError("duplicate config key '" + key + "'");
        kv[key] = value;
    }

    static const std::set<std::string> known = {
        "protocol", "detection", "v_a", "beta", "eta", "eps_ele", "mu_db_per_km",
        "excess_noise", "distance_start_km", "distance_stop_km", "distance_step_km",
        "path", "seed", "output", "threads"};
    for (const auto& [key, value] : kv)
        if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
    for (const auto& key : known)
        if (!kv.count(key)) throw ConfigError("missing config key '" + key + "'");

    SweepConfig config;
    const std::string proto = kv["protocol"];
    if (proto == "psk4") config.protocol = Protocol::Psk4;
    else if (proto == "psk8") config.protocol = Protocol::Psk8;
    else if (proto == "gaussian") config.protocol = Protocol::Gaussian;
    else throw ConfigError("config key 'protocol': expected psk4|psk8|gaussian, got '" + proto + "'");

    const std::string detect = kv["detection"];
    if (detect == "homodyne") config.detection = Detection::Homodyne;
    else if (detect == "heterodyne") config.detection = Detection::Heterodyne;
    else throw ConfigError("config key 'detection': expected homodyne|heterodyne, got '" + detect + "'");

    if (kv["v_a"] == "optimize") config.v_a = std::nullopt;
    else config.v_a = parse_double("v_a", kv["v_a"]);

    config.beta = parse_double("beta", kv["beta"]);
    config.eta = parse_double("eta", kv["eta"]);
    config.eps_ele = parse_double("eps_ele", kv["eps_ele"]);
    config.mu_db_per_km = parse_double("mu_db_per_km", kv["mu_db_per_km"]);

    config.excess_noise.clear();
    std::stringstream list(kv["excess_noise"]);
    std::string item;
    while (std::getline(list, item, ','))
        config.excess_noise.push_back(parse_double("excess_noise", trim(item)));

    config.distance.start_km = parse_double("distance_start_km", kv["distance_start_km"]);
    config.distance.stop_km = parse_double("distance_stop_km", kv["distance_stop_km"]);
    config.distance.step_km = parse_double("distance_step_km", kv["distance_step_km"]);

    const std::string path_choice = kv["path"];
    if (path_choice == "closed") config.path = PathChoice::ClosedForm;
    else if (path_choice == "matrix") config.path = PathChoice::Matrix;
    else if (path_choice == "both") config.path = PathChoice::Both;
    else throw ConfigError("config key 'path': expected closed|matrix|both, got '" + path_choice + "'");

    config.seed = parse_uint("seed", kv["seed"]);
    config.output = kv["output"];
    config.threads = static_cast<unsigned>(parse_uint("threads", kv["threads"]));
    if (config.threads == 0) throw ConfigError("config key 'threads': must be >= 1");

    validate(config);
    return config;
}

void emit_csv(const std::vector<SweepRow>& rows, const SweepConfig& config,
              const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);

    out << "# cvqkd sweep\n";
    out << "# version = " << CVQKD_VERSION << '\n';
    std::istringstream cfg(format_config(config));
    std::string line;
    while (std::getline(cfg, line)) out << "# " << line << '\n';

    out << "protocol,detection,L_km,epsilon,V_A,T,chi_line,chi_det,chi_total,"
           "I_AB,chi_BE,delta_I,delta_I_clamped,lambda_1,lambda_2,lambda_3,lambda_4,"
           "lambda_5,path\n";
    for (const auto& r : rows) {
        out << protocol_name(r.protocol) << ',' << detection_name(r.detection) << ','
            << fmt(r.length_km) << ',' << fmt(r.epsilon) << ',' << fmt(r.v_a) << ','
            << fmt(r.transmittance) << ',' << fmt(r.chi_line) << ',' << fmt(r.chi_det) << ','
            << fmt(r.chi_total) << ',' << fmt(r.mutual_info) << ',' << fmt(r.holevo_bound)
            << ',' << fmt(r.delta_i) << ',' << fmt(r.delta_i_clamped);
        for (double l : r.lambdas) out << ',' << fmt(l);
        out << ',' << path_name(r.path) << '\n';
    }

    for (const auto& zc : zero_crossings(rows)) {
        out << "# zero_crossing protocol=" << protocol_name(zc.protocol)
            << " detection=" << detection_name(zc.detection) << " epsilon=" << fmt(zc.epsilon)
            << " L_km=";
        if (zc.length_km) out << fmt(*zc.length_km);
        else out << "beyond_grid";
        out << '\n';
    }
}

void emit_correlation_csv(const std::vector<CorrelationRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << "# cvqkd correlations\n";
    out << "# version = " << CVQKD_VERSION << '\n';
    out << "V_A,Z4,Z8,ZG\n";
    for (const auto& r : rows)
        out << fmt(r.v_a) << ',' << fmt(r.z4) << ',' << fmt(r.z8) << ',' << fmt(r.zg) << '\n';
}

}  // namespace cvqkd
