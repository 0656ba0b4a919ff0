#include "qpulse/collision.hpp"

#include "qpulse/jaynes_cummings.hpp"

#include <cmath>
#include <sstream>

namespace qpulse {

namespace {

constexpr double kPhotonsPerBinGate = 0.05;
constexpr double kGammaDtGate = 0.05;
constexpr double kAncillaTailTol = 1e-3;
constexpr double kTopLevelWarn = 1e-8;

// i sqrt(gamma/dt) (sigma+ b - sigma- b^dag) on atom (x) ancilla.
Matrix interaction_hamiltonian(double gamma, double dt, int n_anc) {
    const Matrix b = annihilation(n_anc);
    const double kappa = std::sqrt(gamma / dt);
    return Complex(0.0, kappa) * (kron(sigma_plus(), b) - kron(sigma_minus(), b.adjoint()));
}

// Equivalent classical drive i sqrt(gamma) (beta sigma+ - beta^* sigma-);
// at gamma = 0 the drive enters directly as (omega_eff/2) sigma_x.
Matrix drive_hamiltonian(const CollisionConfig& cfg) {
    if (cfg.gamma > 0.0) {
        const double root_gamma = std::sqrt(cfg.gamma);
        return Complex(0.0, root_gamma) *
               (cfg.beta * sigma_plus() - std::conj(cfg.beta) * sigma_minus());
    }
    return 0.5 * cfg.omega_eff() * pauli_x();
}

Matrix bin_unitary(const CollisionConfig& cfg) {
    const Matrix h_int = interaction_hamiltonian(cfg.gamma, cfg.dt, cfg.n_anc);
    if (cfg.frame == CollisionFrame::CoherentAncilla)
        return propagator(h_int, cfg.dt);
    return propagator(h_int + kron(drive_hamiltonian(cfg), identity(cfg.n_anc)), cfg.dt);
}

Vector ancilla_input(const CollisionConfig& cfg) {
    if (cfg.frame == CollisionFrame::CoherentAncilla)
        return coherent_state(CoherentAmplitude(cfg.beta * std::sqrt(cfg.dt)), cfg.n_anc - 1,
                              kAncillaTailTol)
            .amplitudes;
    return fock_amplitudes(cfg.n_anc, 0);
}

} // namespace

CollisionConfig::CollisionConfig(double gamma_, Complex beta_, double dt_, int n_anc_, int steps_,
                                 CollisionFrame frame_)
    : gamma(gamma_), beta(beta_), dt(dt_), n_anc(n_anc_), steps(steps_), frame(frame_) {
    if (gamma < 0.0) throw ConfigError("CollisionConfig: gamma must be >= 0");
    if (!(dt > 0.0)) throw ConfigError("CollisionConfig: dt must be > 0");
    if (n_anc < 2) throw ConfigError("CollisionConfig: n_anc must be >= 2");
    if (steps < 0) throw ConfigError("CollisionConfig: steps must be >= 0");
    if (gamma * dt >= kGammaDtGate) {
        std::ostringstream msg;
        msg << "CollisionConfig: gamma*dt = " << gamma * dt << " must stay below " << kGammaDtGate;
        throw ConfigError(msg.str());
    }
    if (frame == CollisionFrame::CoherentAncilla && photons_per_bin() >= kPhotonsPerBinGate) {
        std::ostringstream msg;
        msg << "CollisionConfig: |beta|^2*dt = " << photons_per_bin()
            << " must stay below " << kPhotonsPerBinGate
            << " in the coherent-ancilla frame (keys beta, dt)";
        throw ConfigError(msg.str());
    }
    omega_eff_ = 2.0 * std::sqrt(gamma) * std::abs(beta);
}

CollisionConfig CollisionConfig::for_rabi_drive(double gamma, double omega_eff, double dt,
                                                int n_anc, int steps) {
    if (omega_eff < 0.0) throw ConfigError("CollisionConfig: omega_eff must be >= 0");
    if (gamma > 0.0) {
        const Complex beta(0.0, -0.5 * omega_eff / std::sqrt(gamma));
        const bool lab_ok = std::norm(beta) * dt < 0.9 * kPhotonsPerBinGate;
        return CollisionConfig(gamma, beta, dt, n_anc, steps,
                               lab_ok ? CollisionFrame::CoherentAncilla
                                      : CollisionFrame::Displaced);
    }
    CollisionConfig cfg(0.0, Complex(0.0, 0.0), dt, n_anc, steps, CollisionFrame::Displaced);
    cfg.omega_eff_ = omega_eff;
    return cfg;
}

double CollisionConfig::omega_eff() const {
    return gamma > 0.0 ? 2.0 * std::sqrt(gamma) * std::abs(beta) : omega_eff_;
}

Matrix collision_unitary(double gamma, double dt, int n_anc) {
    if (gamma < 0.0) throw ConfigError("collision_unitary: gamma must be >= 0");
    if (!(dt > 0.0)) throw ConfigError("collision_unitary: dt must be > 0");
    if (n_anc < 2) throw ConfigError("collision_unitary: n_anc must be >= 2");
    return propagator(interaction_hamiltonian(gamma, dt, n_anc), dt);
}

CollisionResult collision_run(const CollisionConfig& cfg, const Eigen::Vector2cd& atom_init) {
    const int na = cfg.n_anc;
    const Matrix u = bin_unitary(cfg);

    // Displaced-frame Kraus operator for "bin found in vacuum".
    CollisionConfig displaced = cfg;
    displaced.frame = CollisionFrame::Displaced;
    const Matrix u_disp = (cfg.frame == CollisionFrame::Displaced) ? u : bin_unitary(displaced);
    Matrix k0(2, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) k0(a, b) = u_disp(a * na, b * na);

    const Vector anc = ancilla_input(cfg);
    const Matrix rho_anc = anc * anc.adjoint();

    // Scattered-photon observable (b^dag - a*)(b - a), a = coherent input.
    const Complex alpha_bin = (cfg.frame == CollisionFrame::CoherentAncilla)
                                  ? cfg.beta * std::sqrt(cfg.dt)
                                  : Complex(0.0, 0.0);
    const Matrix b_op = annihilation(na);
    const Matrix scattered = kron(identity(2), (b_op.adjoint() - std::conj(alpha_bin) * identity(na)) *
                                                   (b_op - alpha_bin * identity(na)));

    Eigen::Vector2cd atom = atom_init / atom_init.norm();
    Matrix rho = atom * atom.adjoint();
    Eigen::Vector2cd phi = atom; // unnormalized no-jump state

    CollisionResult res;
    res.times.reserve(cfg.steps);
    res.atom.reserve(cfg.steps);
    double emitted = 0.0;
    for (int k = 1; k <= cfg.steps; ++k) {
        const Matrix joint = u * kron(rho, rho_anc) * u.adjoint();

        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                Complex sum = 0.0;
                for (int m = 0; m < na; ++m) sum += joint(a * na + m, b * na + m);
                rho(a, b) = sum;
            }

        emitted += (joint * scattered).trace().real();

        double top = 0.0;
        for (int a = 0; a < 2; ++a) top += joint(a * na + na - 1, a * na + na - 1).real();
        res.max_top_level_population = std::max(res.max_top_level_population, top);
        if (top > kTopLevelWarn) res.truncation_warning = true;

        phi = (k0 * phi).eval();

        res.times.push_back(k * cfg.dt);
        res.atom.emplace_back(std::vector<int>{2}, rho);
        res.survival.push_back(phi.squaredNorm());
        res.emitted.push_back(emitted);
        rho = res.atom.back().elements;
    }
    return res;
}

double no_jump_probability(const CollisionConfig& cfg, const Eigen::Vector2cd& atom_init,
                           double t) {
    if (t < 0.0) throw ConfigError("no_jump_probability: t must be >= 0");
    const long steps = std::lround(t / cfg.dt);
    if (steps == 0) return 1.0;

    CollisionConfig displaced = cfg;
    displaced.frame = CollisionFrame::Displaced;
    const Matrix u = bin_unitary(displaced);
    const int na = cfg.n_anc;
    Matrix k0(2, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) k0(a, b) = u(a * na, b * na);

    Eigen::Vector2cd phi = atom_init / atom_init.norm();
    for (long k = 0; k < steps; ++k) phi = (k0 * phi).eval();
    return phi.squaredNorm();
}

double mollow_displacement_check(const CoherentAmplitude& alpha, double g, double t, int n_max,
                                 const Eigen::Vector2cd& atom_init) {
    if (!(g > 0.0)) throw ConfigError("mollow_displacement_check: g must be > 0");
    if (n_max < displacement_cutoff(alpha.mean_photons())) {
        std::ostringstream msg;
        msg << "mollow_displacement_check: n_max=" << n_max << " below headroom rule "
            << displacement_cutoff(alpha.mean_photons());
        throw TruncationError(msg.str());
    }
    const int fd = n_max + 1;
    const StateVector atom({2}, Vector(atom_init));
    const Matrix h_jc = jc_hamiltonian(g, fd);

    // Route A: coherent field under the bare coupling.
    const StateVector psi_a = tensor(atom, coherent_state(alpha, n_max));
    const DensityMatrix rho_a = reduced_state(evolve(h_jc, psi_a, t), 0);

    // Route B: vacuum field, displacement absorbed into a c-number drive.
    const Matrix h_drive =
        g * (alpha.value * sigma_plus() + std::conj(alpha.value) * sigma_minus());
    const StateVector vacuum({fd}, fock_amplitudes(fd, 0));
    const StateVector psi_b = tensor(atom, vacuum);
    const DensityMatrix rho_b = reduced_state(evolve(h_jc + kron(h_drive, identity(fd)), psi_b, t), 0);

    return trace_distance(rho_a, rho_b);
}

double lindblad_distance(const CollisionConfig& cfg, const PulseSpec& pulse, double t,
                         const Eigen::Vector2cd& atom_init) {
    if (std::abs(pulse.omega - cfg.omega_eff()) > 1e-9 * std::max(1.0, cfg.omega_eff()))
        throw ConfigError("lindblad_distance: pulse.omega must equal the config's omega_eff");
    if (pulse.gamma != cfg.gamma)
        throw ConfigError("lindblad_distance: pulse.gamma must equal the config's gamma");
    if (t < 0.0) throw ConfigError("lindblad_distance: t must be >= 0");

    const long steps = std::lround(t / cfg.dt);
    const double t_actual = steps * cfg.dt;

    Eigen::Vector2cd atom = atom_init / atom_init.norm();
    const DensityMatrix rho0({2}, Matrix(atom * atom.adjoint()));
    if (steps == 0) return 0.0;

    CollisionConfig run_cfg = cfg;
    run_cfg.steps = static_cast<int>(steps);
    const CollisionResult res = collision_run(run_cfg, atom);
    const std::vector<DensityMatrix> bloch = bloch_evolve(rho0, pulse, {t_actual});
    return trace_distance(res.atom.back(), bloch.back());
}

} // namespace qpulse
