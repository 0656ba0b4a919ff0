#include "qpulse/bloch.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qpulse {

PulseSpec::PulseSpec(double omega_, double duration_, double gamma_, double detuning_)
    : omega(omega_), duration(duration_), gamma(gamma_), detuning(detuning_) {
    if (omega < 0.0) throw ConfigError("PulseSpec: omega must be >= 0");
    if (duration < 0.0) throw ConfigError("PulseSpec: duration must be >= 0");
    if (gamma < 0.0) throw ConfigError("PulseSpec: gamma must be >= 0");
    if (detuning != 0.0) throw ConfigError("PulseSpec: only the resonant case (detuning 0) is supported");
}

PulseSpec PulseSpec::for_area(double omega, double theta, double gamma) {
    if (!(omega > 0.0)) throw ConfigError("PulseSpec::for_area: omega must be > 0");
    if (theta < 0.0) throw ConfigError("PulseSpec::for_area: theta must be >= 0");
    return PulseSpec(omega, theta / omega, gamma);
}

double PulseSpec::strong_field_ratio() const {
    if (gamma == 0.0) return std::numeric_limits<double>::infinity();
    return omega / gamma;
}

Matrix bloch_derivative(const Matrix& rho, const PulseSpec& pulse) {
    if (rho.rows() != 2 || rho.cols() != 2)
        throw ConfigError("bloch_derivative: expected a 2x2 density matrix");
    const Matrix h = 0.5 * pulse.omega * pauli_x();
    const Matrix sm = sigma_minus();
    const Matrix sp = sigma_plus();
    const Matrix pe = sp * sm; // |e><e|
    Matrix d = Complex(0.0, -1.0) * (h * rho - rho * h);
    if (pulse.gamma > 0.0)
        d += pulse.gamma * (sm * rho * sp - 0.5 * (pe * rho + rho * pe));
    return d;
}

double bloch_max_step(const PulseSpec& pulse) {
    double h = std::numeric_limits<double>::infinity();
    if (pulse.omega > 0.0) h = std::min(h, 0.01 / pulse.omega);
    if (pulse.gamma > 0.0) h = std::min(h, 0.01 / pulse.gamma);
    return h;
}

Matrix bloch_evolve_raw(Matrix rho, const PulseSpec& pulse, double t0, double t1, double h) {
    if (!(h > 0.0)) throw ConfigError("bloch_evolve_raw: step must be > 0");
    if (t1 < t0) throw ConfigError("bloch_evolve_raw: t1 must be >= t0");
    const long n = std::max(1L, std::lround(std::ceil((t1 - t0) / h - 1e-12)));
    const double step = (t1 - t0) / static_cast<double>(n);
    if (t1 == t0) return rho;
    for (long i = 0; i < n; ++i) {
        const Matrix k1 = bloch_derivative(rho, pulse);
        const Matrix k2 = bloch_derivative(rho + 0.5 * step * k1, pulse);
        const Matrix k3 = bloch_derivative(rho + 0.5 * step * k2, pulse);
        const Matrix k4 = bloch_derivative(rho + step * k3, pulse);
        rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

std::vector<DensityMatrix> bloch_evolve(const DensityMatrix& rho0, const PulseSpec& pulse,
                                        const std::vector<double>& times) {
    if (rho0.dim() != 2) throw ConfigError("bloch_evolve: expected a 2x2 density matrix");
    const double h = bloch_max_step(pulse);

    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    Matrix rho = rho0.elements;
    double t = 0.0;
    for (double sample_t : times) {
        if (sample_t < t) throw ConfigError("bloch_evolve: times must be nondecreasing from 0");
        rho = bloch_evolve_raw(rho, pulse, t, sample_t, h);
        t = sample_t;
        try {
            out.emplace_back(std::vector<int>{2}, rho);
        } catch (const NumericError& e) {
            std::ostringstream msg;
            msg << "bloch_evolve: integration step too large (invariants violated at t=" << t
                << "): " << e.what();
            throw NumericError(msg.str());
        }
        rho = out.back().elements; // continue from the canonicalized state
    }
    return out;
}

double bloch_gate_infidelity(const PulseSpec& pulse) {
    const double theta = pulse.area();
    const DensityMatrix rho0 = projector(StateVector({2}, Vector(atom_ground())));
    const std::vector<DensityMatrix> traj = bloch_evolve(rho0, pulse, {pulse.duration});

    const StateVector target({2}, Vector(rotate_about_x(atom_ground(), theta)));
    return 1.0 - fidelity(traj.back(), target);
}

} // namespace qpulse
