#include "qpulse/experiments.hpp"

#include "qpulse/jaynes_cummings.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

namespace qpulse {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDegenerateInfidelity = 1e-12;

// Run fn(i) for i in [0, n) on up to `jobs` threads. Results land in
// caller-indexed slots, so the output is independent of scheduling.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    std::exception_ptr error;
    std::mutex error_mutex;
    workers.reserve(jobs);
    for (int w = 0; w < jobs; ++w)
        workers.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

void check_geometric_grid(const std::vector<double>& grid, const char* name) {
    if (grid.size() < 4) throw ConfigError(std::string(name) + ": need at least 4 grid points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw ConfigError(std::string(name) + ": grid values must be > 0");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw ConfigError(std::string(name) + ": grid must be strictly increasing");
    }
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double r = grid[i] / grid[i - 1];
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    if (rmax / rmin > 1.25)
        throw ConfigError(std::string(name) + ": grid spacing must be geometric");
}

ScanRecord blank_record(std::string scan_id, std::string model) {
    ScanRecord r;
    r.scan_id = std::move(scan_id);
    r.model = std::move(model);
    r.n_mean = kNaN;
    r.area = kNaN;
    r.gamma = kNaN;
    r.omega = kNaN;
    r.theta = kNaN;
    r.dt = kNaN;
    r.infidelity = kNaN;
    r.purity = kNaN;
    r.entropy = kNaN;
    r.survival = kNaN;
    return r;
}

struct GatePoint {
    double infidelity = 0.0;
    double purity = 0.0;
    double entropy = 0.0;
    double survival = kNaN;
    double dt = kNaN;
};

// JC gate point at fixed pulse area; metrics of the final reduced state.
GatePoint jc_gate_point(double g, double mean_n, double theta) {
    const JCConfig cfg = JCConfig::make(g, CoherentAmplitude(std::sqrt(mean_n)));
    const double t = theta > 0.0 ? theta / cfg.mean_rabi() : 0.0;
    const JCResult res = jc_evolve(cfg, {t});
    GatePoint p;
    p.infidelity = res.infidelity.front();
    p.purity = purity(res.atom.front());
    p.entropy = res.entropy.front();
    return p;
}

GatePoint collision_gate_point(double gamma, double omega_eff, double theta, double dt_request,
                               int n_anc) {
    const double duration = theta / omega_eff;
    const int steps = std::max(1, static_cast<int>(std::ceil(duration / dt_request - 1e-9)));
    const double dt = duration / steps;
    const CollisionConfig cfg = CollisionConfig::for_rabi_drive(gamma, omega_eff, dt, n_anc, steps);
    const CollisionResult res = collision_run(cfg, atom_ground());

    const StateVector target({2}, Vector(rotate_about_x(atom_ground(), theta)));
    GatePoint p;
    p.infidelity = 1.0 - fidelity(res.atom.back(), target);
    p.purity = purity(res.atom.back());
    p.entropy = von_neumann_entropy(res.atom.back());
    p.survival = res.survival.back();
    p.dt = dt;
    return p;
}

GatePoint bloch_gate_point(double gamma, double omega, double theta) {
    const PulseSpec pulse = PulseSpec::for_area(omega, theta, gamma);
    const DensityMatrix rho0 = projector(StateVector({2}, Vector(atom_ground())));
    const std::vector<DensityMatrix> traj = bloch_evolve(rho0, pulse, {pulse.duration});

    const StateVector target({2}, Vector(rotate_about_x(atom_ground(), theta)));
    GatePoint p;
    p.infidelity = 1.0 - fidelity(traj.back(), target);
    p.purity = purity(traj.back());
    p.entropy = von_neumann_entropy(traj.back());
    return p;
}

} // namespace

BeamGeometry::BeamGeometry(double area_, double omega_, double k_, double duration_,
                           double photons_per_area_)
    : area(area_), omega_at_atom(omega_), wavenumber(k_), pulse_duration(duration_),
      photons_per_area(photons_per_area_) {
    if (!(area > 0.0)) throw ConfigError("BeamGeometry: area must be > 0");
    if (!(omega_at_atom > 0.0)) throw ConfigError("BeamGeometry: omega must be > 0");
    if (!(wavenumber > 0.0)) throw ConfigError("BeamGeometry: wavenumber must be > 0");
    if (pulse_duration < 0.0) throw ConfigError("BeamGeometry: duration must be >= 0");
    if (!(photons_per_area > 0.0)) throw ConfigError("BeamGeometry: photons_per_area must be > 0");
}

double collision_gate_infidelity(double gamma, double omega_eff, double theta, double dt_request,
                                 int n_anc) {
    if (!(omega_eff > 0.0)) throw ConfigError("collision_gate_infidelity: omega_eff must be > 0");
    if (!(theta > 0.0)) throw ConfigError("collision_gate_infidelity: theta must be > 0");
    if (!(dt_request > 0.0)) throw ConfigError("collision_gate_infidelity: dt must be > 0");
    return collision_gate_point(gamma, omega_eff, theta, dt_request, n_anc).infidelity;
}

MeanPhotonScan scan_mean_photon(double theta, const std::vector<double>& n_grid, double g,
                                int jobs) {
    check_geometric_grid(n_grid, "scan_mean_photon");
    if (theta < 0.0) throw ConfigError("scan_mean_photon: theta must be >= 0");

    const int n = static_cast<int>(n_grid.size());
    std::vector<GatePoint> points(n);
    parallel_for(n, jobs, [&](int i) { points[i] = jc_gate_point(g, n_grid[i], theta); });

    MeanPhotonScan out;
    std::vector<double> infid(n);
    for (int i = 0; i < n; ++i) {
        infid[i] = points[i].infidelity;
        ScanRecord r = blank_record("scan-n", "jc");
        r.n_mean = n_grid[i];
        r.omega = 2.0 * g * std::sqrt(n_grid[i]);
        r.theta = theta;
        r.infidelity = points[i].infidelity;
        r.purity = points[i].purity;
        r.entropy = points[i].entropy;
        out.records.push_back(std::move(r));
    }

    for (double v : infid)
        if (v < kDegenerateInfidelity)
            throw NumericError("scan_mean_photon: slope fit refused, infidelities below 1e-12");
    out.fit = log_log_fit(n_grid, infid);
    return out;
}

BeamAreaScan scan_beam_area(const std::vector<double>& area_grid, const BeamGeometry& base,
                            double theta, double gamma, double dt_factor, int n_anc, int jobs) {
    check_geometric_grid(area_grid, "scan_beam_area");
    if (!(theta > 0.0)) throw ConfigError("scan_beam_area: theta must be > 0");
    if (gamma < 0.0) throw ConfigError("scan_beam_area: gamma must be >= 0");

    const double omega = base.omega_at_atom;
    const int n = static_cast<int>(area_grid.size());
    std::vector<GatePoint> jc_points(n), coll_points(n);
    parallel_for(n, jobs, [&](int i) {
        const double mean_n = base.photons_per_area * area_grid[i];
        // Fixed intensity at the atom: g adjusts so 2 g sqrt(<n>) = omega.
        const double g = omega / (2.0 * std::sqrt(mean_n));
        jc_points[i] = jc_gate_point(g, mean_n, theta);
        // The free-space model never sees the beam area.
        coll_points[i] = collision_gate_point(gamma, omega, theta, dt_factor / omega, n_anc);
    });

    BeamAreaScan out;
    std::vector<double> jc_infid(n);
    for (int i = 0; i < n; ++i) {
        jc_infid[i] = jc_points[i].infidelity;

        ScanRecord r = blank_record("scan-area", "jc");
        r.n_mean = base.photons_per_area * area_grid[i];
        r.area = area_grid[i];
        r.omega = omega;
        r.theta = theta;
        r.infidelity = jc_points[i].infidelity;
        r.purity = jc_points[i].purity;
        r.entropy = jc_points[i].entropy;
        out.records.push_back(std::move(r));

        ScanRecord c = blank_record("scan-area", "collision");
        c.area = area_grid[i];
        c.gamma = gamma;
        c.omega = omega;
        c.theta = theta;
        c.dt = coll_points[i].dt;
        c.infidelity = coll_points[i].infidelity;
        c.purity = coll_points[i].purity;
        c.entropy = coll_points[i].entropy;
        c.survival = coll_points[i].survival;
        out.records.push_back(std::move(c));
    }
    out.jc_fit = log_log_fit(area_grid, jc_infid);
    out.collision_infidelity = coll_points[0].infidelity;
    double lo = coll_points[0].infidelity, hi = coll_points[0].infidelity;
    for (int i = 1; i < n; ++i) {
        lo = std::min(lo, coll_points[i].infidelity);
        hi = std::max(hi, coll_points[i].infidelity);
    }
    out.collision_spread = hi - lo;
    return out;
}

GammaScan scan_gamma(double theta, double omega, const std::vector<double>& gamma_grid,
                     double dt_factor, int n_anc, int jobs) {
    if (!(theta > 0.0)) throw ConfigError("scan_gamma: theta must be > 0");
    if (!(omega > 0.0)) throw ConfigError("scan_gamma: omega must be > 0");
    if (gamma_grid.empty()) throw ConfigError("scan_gamma: empty gamma grid");
    double gamma_max = 0.0;
    for (double gmm : gamma_grid) {
        if (gmm < 0.0) throw ConfigError("scan_gamma: gamma must be >= 0");
        gamma_max = std::max(gamma_max, gmm);
    }
    if (gamma_max > 0.0 && omega < 100.0 * gamma_max)
        throw ConfigError("scan_gamma: strong-field regime requires omega >= 100 * max(gamma)");

    const int n = static_cast<int>(gamma_grid.size());
    std::vector<GatePoint> bloch_points(n), coll_points(n);
    parallel_for(n, jobs, [&](int i) {
        bloch_points[i] = bloch_gate_point(gamma_grid[i], omega, theta);
        coll_points[i] = collision_gate_point(gamma_grid[i], omega, theta, dt_factor / omega, n_anc);
    });

    GammaScan out;
    std::vector<double> fit_gamma, fit_bloch, fit_coll;
    for (int i = 0; i < n; ++i) {
        ScanRecord b = blank_record("scan-gamma", "bloch");
        b.gamma = gamma_grid[i];
        b.omega = omega;
        b.theta = theta;
        b.infidelity = bloch_points[i].infidelity;
        b.purity = bloch_points[i].purity;
        b.entropy = bloch_points[i].entropy;
        out.records.push_back(std::move(b));

        ScanRecord c = blank_record("scan-gamma", "collision");
        c.gamma = gamma_grid[i];
        c.omega = omega;
        c.theta = theta;
        c.dt = coll_points[i].dt;
        c.infidelity = coll_points[i].infidelity;
        c.purity = coll_points[i].purity;
        c.entropy = coll_points[i].entropy;
        c.survival = coll_points[i].survival;
        out.records.push_back(std::move(c));

        if (gamma_grid[i] > 0.0) {
            fit_gamma.push_back(gamma_grid[i]);
            fit_bloch.push_back(bloch_points[i].infidelity);
            fit_coll.push_back(coll_points[i].infidelity);
            const double rel = std::abs(coll_points[i].infidelity - bloch_points[i].infidelity) /
                               bloch_points[i].infidelity;
            out.max_rel_disagreement = std::max(out.max_rel_disagreement, rel);
        }
    }
    if (fit_gamma.size() >= 2) {
        out.bloch_fit = fit_through_origin(fit_gamma, fit_bloch);
        out.collision_fit = fit_through_origin(fit_gamma, fit_coll);
    }
    return out;
}

double resonant_cross_section(double k) {
    if (!(k > 0.0)) throw ConfigError("resonant_cross_section: k must be > 0");
    return 6.0 * M_PI / (k * k);
}

double effective_cross_section(double k) {
    if (!(k > 0.0)) throw ConfigError("effective_cross_section: k must be > 0");
    return 1.5 * M_PI / (k * k);
}

double photon_flux(double omega, double gamma, double k) {
    if (!(omega > 0.0)) throw ConfigError("photon_flux: omega must be > 0");
    if (!(gamma > 0.0)) throw ConfigError("photon_flux: gamma must be > 0");
    return omega * omega / (gamma * resonant_cross_section(k));
}

double n_prime(double omega, double gamma, double duration, double k) {
    if (!(duration > 0.0)) throw ConfigError("n_prime: duration must be > 0");
    return photon_flux(omega, gamma, k) * effective_cross_section(k) * duration;
}

NPrimeScan nprime_comparison(const std::vector<double>& omega_over_gamma, double k,
                             double dt_factor, int n_anc, int jobs) {
    if (omega_over_gamma.empty()) throw ConfigError("nprime_comparison: empty ratio grid");
    for (double r : omega_over_gamma)
        if (!(r > 0.0)) throw ConfigError("nprime_comparison: ratios must be > 0");

    const double gamma = 1.0; // natural units
    const double theta = M_PI;
    const int n = static_cast<int>(omega_over_gamma.size());
    std::vector<GatePoint> points(n);
    parallel_for(n, jobs, [&](int i) {
        const double omega = omega_over_gamma[i] * gamma;
        points[i] = collision_gate_point(gamma, omega, theta, dt_factor / omega, n_anc);
    });

    NPrimeScan out;
    for (int i = 0; i < n; ++i) {
        const double omega = omega_over_gamma[i] * gamma;
        const double duration = theta / omega;
        const double np = n_prime(omega, gamma, duration, k);
        out.ratios.push_back((1.0 / np) / points[i].infidelity);

        ScanRecord r = blank_record("nprime-check", "collision");
        r.gamma = gamma;
        r.omega = omega;
        r.theta = theta;
        r.dt = points[i].dt;
        r.infidelity = points[i].infidelity;
        r.purity = points[i].purity;
        r.entropy = points[i].entropy;
        r.survival = points[i].survival;
        out.records.push_back(std::move(r));
    }
    return out;
}

} // namespace qpulse
