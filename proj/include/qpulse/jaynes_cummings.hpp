#pragma once

// Exact resonant single-mode Jaynes-Cummings simulator. The interaction
// H = g (a sigma+ + a^dag sigma-) conserves total excitation, so the joint
// state evolves in closed form inside the two-dimensional manifolds
// {|e,n>, |g,n+1>}, each rotating at Rabi frequency 2 g sqrt(n+1); |g,0>
// is stationary. A coherent field drives the Poisson-weighted superposition
// of these blocks, entangling atom and field; the reduced atomic state and
// its decoherence diagnostics are what this module reports.

#include "qpulse/core.hpp"

#include <vector>

namespace qpulse {

struct JCConfig {
    double g = 1.0;                 // atom-field coupling (rad/time)
    CoherentAmplitude alpha;        // field amplitude; <n> = |alpha|^2
    int n_max = 0;                  // highest Fock level of the field space
    Eigen::Vector2cd atom_init = atom_ground();

    JCConfig(double g_, CoherentAmplitude alpha_, int n_max_, Eigen::Vector2cd atom_init_);

    /// n_max from the standard truncation rule.
    static JCConfig make(double g, CoherentAmplitude alpha,
                         Eigen::Vector2cd atom_init = atom_ground());

    /// Mean-field Rabi frequency 2 g sqrt(<n>).
    double mean_rabi() const { return 2.0 * g * std::sqrt(alpha.mean_photons()); }
};

struct JCResult {
    std::vector<double> times;
    std::vector<StateVector> joint;      // atom (x) field
    std::vector<DensityMatrix> atom;     // reduced 2x2 state
    std::vector<double> inversion;       // rho_ee - rho_gg
    std::vector<double> entropy;         // S(rho_atom), natural log
    std::vector<double> excitation;      // <a^dag a + sigma+ sigma->
    std::vector<double> infidelity;      // vs classical sigma_x rotation by mean_rabi * t
};

/// Amplitudes reached from the product state (c_g|g> + c_e|e>) (x) |n> after
/// time t. The four components live on {|g,n>, |e,n-1>, |e,n>, |g,n+1>};
/// e_nm1 is zero when n = 0.
struct JCBlockAmplitudes {
    Complex g_n, e_nm1, e_n, g_np1;
};

JCBlockAmplitudes jc_block_evolve(int n, const Eigen::Vector2cd& atom_init, double g, double t);

/// H = g (a sigma+ + a^dag sigma-) on atom (x) field, atom first.
Matrix jc_hamiltonian(double g, int field_dim);

/// Closed-form evolution of atom_init (x) |alpha> sampled on the given time
/// grid. The internal field space has one extra level above n_max so every
/// populated block fits; evolution is exactly unitary.
JCResult jc_evolve(const JCConfig& cfg, const std::vector<double>& times);

/// Gate benchmark: drive for t = theta / (2 g sqrt(<n>)) (the classical-Rabi
/// equivalent duration) and compare the reduced atomic state against the
/// ideal rotation exp(-i theta sigma_x / 2) applied to atom_init. Assumes
/// the drive-phase convention arg(alpha) = 0.
double jc_gate_infidelity(const JCConfig& cfg, double pulse_area);

/// Locate the peak of the |inversion| envelope inside [t_lo, t_hi]. The
/// envelope is the sliding-window maximum of |inversion| with window width
/// 4 pi / omega_bar.
double find_revival_peak(const std::vector<double>& times,
                         const std::vector<double>& inversion,
                         double omega_bar, double t_lo, double t_hi);

} // namespace qpulse
