#pragma once

// Classically driven two-level atom with upper-level decay gamma: the
// resonant optical Bloch / Lindblad equations
//   drho/dt = -i[(Omega/2) sigma_x, rho]
//             + gamma (sigma- rho sigma+ - {sigma+ sigma-, rho}/2),
// integrated with a fixed-step classical 4th-order scheme so outputs are
// deterministic. Drive phase convention: sigma_x, phase 0.

#include "qpulse/core.hpp"

#include <vector>

namespace qpulse {

struct PulseSpec {
    double omega = 0.0;     // Rabi frequency (rad/time)
    double duration = 0.0;  // pulse duration (time)
    double gamma = 0.0;     // upper-level decay rate (1/time)
    double detuning = 0.0;  // fixed 0; resonant model only

    PulseSpec(double omega_, double duration_, double gamma_, double detuning_ = 0.0);

    /// Duration chosen so omega * duration = theta.
    static PulseSpec for_area(double omega, double theta, double gamma);

    /// Pulse area theta = Omega T; exact by construction.
    double area() const { return omega * duration; }

    /// Strong-field means omega >> gamma.
    double strong_field_ratio() const;
};

/// Right-hand side of the master equation; traceless and Hermitian.
Matrix bloch_derivative(const Matrix& rho, const PulseSpec& pulse);

/// Maximum integrator step 0.01 * min(1/Omega, 1/gamma) (only positive rates
/// are considered; unbounded when both vanish).
double bloch_max_step(const PulseSpec& pulse);

/// RK4 with fixed step h from t0 to t1. Exposed for convergence tests.
Matrix bloch_evolve_raw(Matrix rho, const PulseSpec& pulse, double t0, double t1, double h);

/// Trajectory sampled at the given times. Each interval is subdivided so
/// the step never exceeds bloch_max_step. Every sample must pass the
/// density-matrix invariants; a violation raises "integration step too
/// large".
std::vector<DensityMatrix> bloch_evolve(const DensityMatrix& rho0, const PulseSpec& pulse,
                                        const std::vector<double>& times);

/// 1 - F of the pulse applied to |g> against the ideal rotation
/// exp(-i area sigma_x / 2) |g>.
double bloch_gate_infidelity(const PulseSpec& pulse);

} // namespace qpulse
