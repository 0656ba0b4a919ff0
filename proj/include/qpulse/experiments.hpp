#pragma once

// Parameter scans that turn the scaling claims into data: gate infidelity
// vs mean photon number, the beam-area contrast between the single-mode and
// free-space models, infidelity vs decay rate, and the photons-in-a-volume
// estimate n' = Omega^2 T / (4 gamma).

#include "qpulse/collision.hpp"
#include "qpulse/fit.hpp"
#include "qpulse/records.hpp"

#include <vector>

namespace qpulse {

struct BeamGeometry {
    double area = 1.0;             // beam cross-section (length^2)
    double omega_at_atom = 10.0;   // Rabi frequency at the atom (rad/time)
    double wavenumber = 2.0 * M_PI;
    double pulse_duration = 0.0;   // derived from the pulse area when 0
    double photons_per_area = 25.0; // <n> = photons_per_area * area

    BeamGeometry() = default;
    BeamGeometry(double area_, double omega_, double k_, double duration_, double photons_per_area_);

    double mean_photons() const { return photons_per_area * area; }
};

struct MeanPhotonScan {
    std::vector<ScanRecord> records;
    FitResult fit; // log infidelity vs log <n>
};

struct BeamAreaScan {
    std::vector<ScanRecord> records;
    FitResult jc_fit;              // log JC infidelity vs log area
    double collision_infidelity = 0.0;
    double collision_spread = 0.0; // max - min over the grid; exactly 0
};

struct GammaScan {
    std::vector<ScanRecord> records;
    FitResult bloch_fit;     // through origin, infidelity vs gamma
    FitResult collision_fit; // through origin, infidelity vs gamma
    double max_rel_disagreement = 0.0;
};

struct NPrimeScan {
    std::vector<ScanRecord> records;
    std::vector<double> ratios; // (1/n') / measured collision infidelity
};

/// Collision-model gate benchmark: run a rectangular pulse of area theta at
/// the equivalent Rabi frequency omega_eff, with dt adjusted downward so the
/// bins tile the pulse exactly, and compare against the ideal rotation.
double collision_gate_infidelity(double gamma, double omega_eff, double theta,
                                 double dt_request, int n_anc = 3);

/// JC gate infidelity over a geometric grid of mean photon numbers at fixed
/// pulse area; fits the power law. Grid must have >= 4 increasing points
/// with consistent ratios. Throws NumericError when every infidelity sits
/// below 1e-12 (slope fit refused).
MeanPhotonScan scan_mean_photon(double theta, const std::vector<double>& n_grid, double g = 1.0,
                                int jobs = 1);

/// Fixed intensity at the atom, growing beam area: <n> grows with the area,
/// so the JC infidelity falls, while the collision model sees only
/// (omega, gamma, theta) and produces bit-identical records across the grid.
BeamAreaScan scan_beam_area(const std::vector<double>& area_grid, const BeamGeometry& base,
                            double theta, double gamma, double dt_factor = 1e-3, int n_anc = 3,
                            int jobs = 1);

/// Semiclassical and collision infidelities across a gamma grid in the
/// strong-field regime omega >= 100 * max(gamma); linear fits through the
/// origin. A gamma = 0 entry is allowed and excluded from the fits.
GammaScan scan_gamma(double theta, double omega, const std::vector<double>& gamma_grid,
                     double dt_factor = 1e-3, int n_anc = 3, int jobs = 1);

/// sigma_0 = 6 pi / k^2, the resonant scattering cross-section.
double resonant_cross_section(double k);

/// sigma_eff = 3 pi / (2 k^2).
double effective_cross_section(double k);

/// Photon flux from the on-resonance weak-saturation relation
/// flux * sigma_0 = Omega^2 / gamma.
double photon_flux(double omega, double gamma, double k);

/// n' = flux * sigma_eff * T = Omega^2 T / (4 gamma).
double n_prime(double omega, double gamma, double duration, double k);

/// Compare 1/n' against the measured collision-model pi-pulse infidelity
/// across a grid of omega/gamma ratios (gamma = 1 natural units).
NPrimeScan nprime_comparison(const std::vector<double>& omega_over_gamma, double k = 2.0 * M_PI,
                             double dt_factor = 5e-4, int n_anc = 3, int jobs = 1);

} // namespace qpulse
