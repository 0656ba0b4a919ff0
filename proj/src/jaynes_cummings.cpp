#include "qpulse/jaynes_cummings.hpp"

#include <cmath>
#include <sstream>

namespace qpulse {

namespace {

constexpr Complex kMinusI{0.0, -1.0};

} // namespace

JCConfig::JCConfig(double g_, CoherentAmplitude alpha_, int n_max_, Eigen::Vector2cd atom_init_)
    : g(g_), alpha(alpha_), n_max(n_max_), atom_init(std::move(atom_init_)) {
    if (!(g > 0.0)) throw ConfigError("JCConfig: coupling g must be > 0");
    if (n_max < fock_cutoff(alpha.mean_photons())) {
        std::ostringstream msg;
        msg << "JCConfig: n_max=" << n_max << " below truncation rule "
            << fock_cutoff(alpha.mean_photons()) << " for <n>=" << alpha.mean_photons();
        throw ConfigError(msg.str());
    }
    const double norm = atom_init.norm();
    if (std::abs(norm - 1.0) > kNormTol)
        throw ConfigError("JCConfig: atom_init not normalized");
    atom_init /= norm;
}

JCConfig JCConfig::make(double g, CoherentAmplitude alpha, Eigen::Vector2cd atom_init) {
    return JCConfig(g, alpha, fock_cutoff(alpha.mean_photons()), std::move(atom_init));
}

JCBlockAmplitudes jc_block_evolve(int n, const Eigen::Vector2cd& atom_init, double g, double t) {
    if (n < 0) throw ConfigError("jc_block_evolve: photon number must be >= 0");
    const double th_lower = g * std::sqrt(static_cast<double>(n)) * t;     // |g,n> <-> |e,n-1>
    const double th_upper = g * std::sqrt(static_cast<double>(n + 1)) * t; // |e,n> <-> |g,n+1>
    JCBlockAmplitudes out;
    out.g_n = atom_init(0) * std::cos(th_lower);
    out.e_nm1 = (n > 0) ? Complex(kMinusI * std::sin(th_lower) * atom_init(0)) : Complex(0.0);
    out.e_n = atom_init(1) * std::cos(th_upper);
    out.g_np1 = kMinusI * std::sin(th_upper) * atom_init(1);
    return out;
}

Matrix jc_hamiltonian(double g, int field_dim) {
    const Matrix a = annihilation(field_dim);
    return g * (kron(sigma_plus(), a) + kron(sigma_minus(), a.adjoint()));
}

JCResult jc_evolve(const JCConfig& cfg, const std::vector<double>& times) {
    // One guard level above n_max so the top populated block stays inside
    // the space; the closed-form update is then exactly unitary.
    const int fd = cfg.n_max + 2;
    const StateVector field0 = coherent_state(cfg.alpha, cfg.n_max);

    Vector psi0 = Vector::Zero(2 * fd);
    for (int n = 0; n <= cfg.n_max; ++n) {
        psi0(0 * fd + n) = cfg.atom_init(0) * field0.amplitudes(n);
        psi0(1 * fd + n) = cfg.atom_init(1) * field0.amplitudes(n);
    }

    const double omega_bar = cfg.mean_rabi();
    JCResult res;
    res.times = times;
    res.joint.reserve(times.size());
    res.atom.reserve(times.size());

    Vector psi(2 * fd);
    for (double t : times) {
        psi = psi0;
        // Rotate each dressed pair (|e,n>, |g,n+1>); |g,0> is untouched.
        for (int n = 0; n + 1 < fd; ++n) {
            const double th = cfg.g * std::sqrt(static_cast<double>(n + 1)) * t;
            const Complex c = std::cos(th);
            const Complex ms = kMinusI * std::sin(th);
            const Complex e_n = psi(fd + n);
            const Complex g_np1 = psi(n + 1);
            psi(fd + n) = c * e_n + ms * g_np1;
            psi(n + 1) = ms * e_n + c * g_np1;
        }

        StateVector joint({2, fd}, psi);
        DensityMatrix atom = reduced_state(joint, 0);

        double excitation = 0.0;
        for (int n = 0; n < fd; ++n)
            excitation += n * std::norm(joint.amplitudes(n)) +
                          (n + 1) * std::norm(joint.amplitudes(fd + n));

        const StateVector target({2},
                                 Vector(rotate_about_x(cfg.atom_init, omega_bar * t)));
        res.inversion.push_back(atom.elements(1, 1).real() - atom.elements(0, 0).real());
        res.entropy.push_back(von_neumann_entropy(atom));
        res.excitation.push_back(excitation);
        res.infidelity.push_back(1.0 - fidelity(atom, target));
        res.joint.push_back(std::move(joint));
        res.atom.push_back(std::move(atom));
    }
    return res;
}

double jc_gate_infidelity(const JCConfig& cfg, double pulse_area) {
    if (pulse_area < 0.0) throw ConfigError("jc_gate_infidelity: pulse area must be >= 0");
    if (pulse_area == 0.0) {
        const JCResult res = jc_evolve(cfg, {0.0});
        return res.infidelity.front();
    }
    const double omega_bar = cfg.mean_rabi();
    if (!(omega_bar > 0.0))
        throw ConfigError("jc_gate_infidelity: <n> must be > 0 to drive the atom");
    const double t = pulse_area / omega_bar;
    const JCResult res = jc_evolve(cfg, {t});
    return res.infidelity.front();
}

double find_revival_peak(const std::vector<double>& times,
                         const std::vector<double>& inversion,
                         double omega_bar, double t_lo, double t_hi) {
    if (times.size() != inversion.size() || times.size() < 3)
        throw ConfigError("find_revival_peak: need matching time/inversion samples");
    if (!(omega_bar > 0.0)) throw ConfigError("find_revival_peak: omega_bar must be > 0");

    const double half_window = 2.0 * M_PI / omega_bar;
    double best_t = times.front();
    double best_env = -1.0;
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi) continue;
        while (lo < times.size() && times[lo] < times[i] - half_window) ++lo;
        while (hi + 1 < times.size() && times[hi + 1] <= times[i] + half_window) ++hi;
        double env = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) env = std::max(env, std::abs(inversion[k]));
        if (env > best_env) {
            best_env = env;
            best_t = times[i];
        }
    }
    if (best_env < 0.0) throw ConfigError("find_revival_peak: search window contains no samples");
    return best_t;
}

} // namespace qpulse
