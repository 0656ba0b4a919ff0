#pragma once

// Dense complex linear algebra and quantum-state primitives shared by the
// physics modules: states over tensor-product spaces, partial trace,
// coherent states, the displacement operator, the exp(-iHt) propagator and
// the usual state diagnostics.

#include "qpulse/errors.hpp"
#include "qpulse/operators.hpp"

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace qpulse {

// State-invariant tolerances. Fixed constants (not configurable) so that
// property tests are deterministic.
inline constexpr double kNormTol = 1e-10;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigenvalueFloor = -1e-9;
inline constexpr double kCoherentTailTol = 1e-10;

/// Pure state over a tensor product of subsystems. dims are ordered
/// slowest-varying first: linear index = i0 * prod(dims[1:]) + i1 * ... .
/// The constructor rescales to unit Euclidean norm and rejects inputs whose
/// norm is zero or whose length does not match prod(dims).
struct StateVector {
    std::vector<int> dims;
    Vector amplitudes;

    StateVector(std::vector<int> dims_, Vector amplitudes_);

    Eigen::Index dim() const { return amplitudes.size(); }
};

/// Mixed state over a tensor product of subsystems. The constructor checks
/// Hermiticity (within 1e-10 elementwise), unit trace (within 1e-10) and
/// positivity (eigenvalues >= -1e-9), then canonicalizes: (rho + rho^dag)/2,
/// divided by its trace.
struct DensityMatrix {
    std::vector<int> dims;
    Matrix elements;

    DensityMatrix(std::vector<int> dims_, Matrix elements_);

    Eigen::Index dim() const { return elements.rows(); }
};

/// Coherent drive amplitude alpha; mean photon number <n> = |alpha|^2.
struct CoherentAmplitude {
    Complex value{0.0, 0.0};

    CoherentAmplitude() = default;
    CoherentAmplitude(Complex v) : value(v) {}
    CoherentAmplitude(double re) : value(re, 0.0) {}

    double mean_photons() const { return std::norm(value); }
};

/// Highest Fock level that must be retained for a state with the given mean
/// photon number: ceil(<n> + 8 sqrt(<n>) + 10). The Poisson tail beyond
/// eight standard deviations is far below 1e-10.
int fock_cutoff(double mean_photons);

/// Extra headroom needed when a displacement acts on the space:
/// ceil(<n> + 10 sqrt(<n>) + 15).
int displacement_cutoff(double mean_photons);

/// Tensor (Kronecker) product. Output dims compose multiplicatively.
Matrix kron(const Matrix& a, const Matrix& b);

/// Tensor product of pure states; dims lists are concatenated.
StateVector tensor(const StateVector& a, const StateVector& b);

/// |psi><psi| as a DensityMatrix with the same dims.
DensityMatrix projector(const StateVector& psi);

/// Trace out every subsystem except `keep`.
DensityMatrix partial_trace(const DensityMatrix& rho, int keep);

/// Reduced state of subsystem `keep` of a pure state, without forming the
/// joint density matrix.
DensityMatrix reduced_state(const StateVector& psi, int keep);

/// Coherent state |alpha> on Fock levels 0..n_max. Amplitudes are evaluated
/// in log space (stable for large |alpha|), normalized as e^{-|alpha|^2/2}
/// alpha^n / sqrt(n!). Throws TruncationError when the Poisson tail beyond
/// n_max exceeds tail_tol.
StateVector coherent_state(const CoherentAmplitude& alpha, int n_max,
                           double tail_tol = kCoherentTailTol);

/// Displacement operator D(alpha) = exp(alpha a^dag - alpha^* a) on Fock
/// levels 0..n_max, built as the exact exponential of the truncated
/// generator (unitary by construction). Throws TruncationError when the
/// column D|0> leaks appreciably into the top level.
Matrix displacement_operator(const CoherentAmplitude& alpha, int n_max);

/// exp(-i h t) via eigendecomposition; h must be Hermitian within 1e-10.
Matrix propagator(const Matrix& h, double t);

/// exp(-i h t) |psi>. Norm is checked (1e-10) before exact renormalization.
StateVector evolve(const Matrix& h, const StateVector& psi, double t);

/// F = <target| rho |target>, clamped to [0, 1].
double fidelity(const DensityMatrix& rho, const StateVector& target);

/// Tr rho^2, in (0, 1].
double purity(const DensityMatrix& rho);

/// -Tr rho ln rho (natural log), >= 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// (1/2) Tr |rho - sigma|, in [0, 1].
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

} // namespace qpulse
