#include "qpulse/core.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace qpulse {

namespace {

Eigen::Index dims_product(const std::vector<int>& dims) {
    Eigen::Index p = 1;
    for (int d : dims) {
        if (d < 1) throw ConfigError("subsystem dimensions must be >= 1");
        p *= d;
    }
    return p;
}

} // namespace

StateVector::StateVector(std::vector<int> dims_, Vector amplitudes_)
    : dims(std::move(dims_)), amplitudes(std::move(amplitudes_)) {
    if (dims.empty()) throw ConfigError("StateVector: empty dims");
    if (dims_product(dims) != amplitudes.size())
        throw ConfigError("StateVector: amplitude count does not match prod(dims)");
    const double n = amplitudes.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw NumericError("StateVector: amplitudes have zero or non-finite norm");
    amplitudes /= n;
}

DensityMatrix::DensityMatrix(std::vector<int> dims_, Matrix elements_)
    : dims(std::move(dims_)), elements(std::move(elements_)) {
    if (dims.empty()) throw ConfigError("DensityMatrix: empty dims");
    if (elements.rows() != elements.cols())
        throw ConfigError("DensityMatrix: matrix not square");
    if (dims_product(dims) != elements.rows())
        throw ConfigError("DensityMatrix: size does not match prod(dims)");

    const double herm_defect = (elements - elements.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > kHermitianTol) {
        std::ostringstream msg;
        msg << "DensityMatrix: Hermiticity defect " << herm_defect << " exceeds " << kHermitianTol;
        throw NumericError(msg.str());
    }
    const Complex tr = elements.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
        std::ostringstream msg;
        msg << "DensityMatrix: trace " << tr.real() << " deviates from 1 beyond " << kTraceTol;
        throw NumericError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(elements, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < kEigenvalueFloor) {
        std::ostringstream msg;
        msg << "DensityMatrix: eigenvalue " << min_eig << " below floor " << kEigenvalueFloor;
        throw NumericError(msg.str());
    }

    elements = 0.5 * (elements + elements.adjoint()).eval();
    elements /= elements.trace().real();
}

int fock_cutoff(double mean_photons) {
    if (mean_photons < 0.0) throw ConfigError("fock_cutoff: mean photon number must be >= 0");
    return static_cast<int>(std::ceil(mean_photons + 8.0 * std::sqrt(mean_photons) + 10.0));
}

int displacement_cutoff(double mean_photons) {
    if (mean_photons < 0.0) throw ConfigError("displacement_cutoff: mean photon number must be >= 0");
    return static_cast<int>(std::ceil(mean_photons + 10.0 * std::sqrt(mean_photons) + 15.0));
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    std::vector<int> dims = a.dims;
    dims.insert(dims.end(), b.dims.begin(), b.dims.end());
    Vector amps(a.dim() * b.dim());
    for (Eigen::Index i = 0; i < a.dim(); ++i)
        amps.segment(i * b.dim(), b.dim()) = a.amplitudes(i) * b.amplitudes;
    return StateVector(std::move(dims), std::move(amps));
}

DensityMatrix projector(const StateVector& psi) {
    return DensityMatrix(psi.dims, psi.amplitudes * psi.amplitudes.adjoint());
}

namespace {

// Offsets of the traced-out multi-index (all subsystems except `keep`),
// together with the stride of the kept subsystem.
struct TraceLayout {
    std::vector<Eigen::Index> offsets;
    Eigen::Index keep_stride = 1;
    int keep_dim = 1;
};

TraceLayout trace_layout(const std::vector<int>& dims, int keep) {
    const int m = static_cast<int>(dims.size());
    if (m < 2) throw ConfigError("partial_trace: need at least two subsystems");
    if (keep < 0 || keep >= m) throw ConfigError("partial_trace: invalid subsystem index");

    std::vector<Eigen::Index> stride(m);
    Eigen::Index s = 1;
    for (int k = m - 1; k >= 0; --k) {
        stride[k] = s;
        s *= dims[k];
    }

    TraceLayout layout;
    layout.keep_stride = stride[keep];
    layout.keep_dim = dims[keep];

    Eigen::Index rest = 1;
    for (int k = 0; k < m; ++k)
        if (k != keep) rest *= dims[k];

    layout.offsets.assign(rest, 0);
    for (Eigen::Index r = 0; r < rest; ++r) {
        Eigen::Index rem = r, off = 0;
        for (int k = m - 1; k >= 0; --k) {
            if (k == keep) continue;
            off += (rem % dims[k]) * stride[k];
            rem /= dims[k];
        }
        layout.offsets[r] = off;
    }
    return layout;
}

} // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, int keep) {
    const TraceLayout layout = trace_layout(rho.dims, keep);
    Matrix out = Matrix::Zero(layout.keep_dim, layout.keep_dim);
    for (Eigen::Index off : layout.offsets)
        for (int i = 0; i < layout.keep_dim; ++i)
            for (int j = 0; j < layout.keep_dim; ++j)
                out(i, j) += rho.elements(off + i * layout.keep_stride,
                                          off + j * layout.keep_stride);
    return DensityMatrix({layout.keep_dim}, std::move(out));
}

DensityMatrix reduced_state(const StateVector& psi, int keep) {
    const TraceLayout layout = trace_layout(psi.dims, keep);
    Matrix out = Matrix::Zero(layout.keep_dim, layout.keep_dim);
    for (Eigen::Index off : layout.offsets)
        for (int i = 0; i < layout.keep_dim; ++i) {
            const Complex ai = psi.amplitudes(off + i * layout.keep_stride);
            for (int j = 0; j < layout.keep_dim; ++j)
                out(i, j) += ai * std::conj(psi.amplitudes(off + j * layout.keep_stride));
        }
    return DensityMatrix({layout.keep_dim}, std::move(out));
}

StateVector coherent_state(const CoherentAmplitude& alpha, int n_max, double tail_tol) {
    if (n_max < 0) throw ConfigError("coherent_state: n_max must be >= 0");
    const double mean = alpha.mean_photons();
    Vector amps = Vector::Zero(n_max + 1);
    if (mean == 0.0) {
        amps(0) = 1.0;
        return StateVector({n_max + 1}, std::move(amps));
    }

    const double log_abs = std::log(std::abs(alpha.value));
    const double phase = std::arg(alpha.value);
    double captured = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        const double log_mag = -0.5 * mean + n * log_abs - 0.5 * std::lgamma(n + 1.0);
        const double mag = std::exp(log_mag);
        amps(n) = std::polar(mag, phase * n);
        captured += mag * mag;
    }
    const double tail = 1.0 - captured;
    if (tail > tail_tol) {
        std::ostringstream msg;
        msg << "coherent_state: Poisson tail " << tail << " beyond n_max=" << n_max
            << " exceeds " << tail_tol << " (mean photons " << mean << ")";
        throw TruncationError(msg.str());
    }
    return StateVector({n_max + 1}, std::move(amps));
}

Matrix displacement_operator(const CoherentAmplitude& alpha, int n_max) {
    if (n_max < 0) throw ConfigError("displacement_operator: n_max must be >= 0");
    const Eigen::Index dim = n_max + 1;
    const Matrix a = annihilation(dim);
    // D = exp(alpha a^dag - alpha^* a) = exp(-i h) with Hermitian
    // h = i (alpha a^dag - alpha^* a).
    const Matrix h = Complex(0.0, 1.0) * (alpha.value * a.adjoint() - std::conj(alpha.value) * a);
    Matrix d = propagator(h, 1.0);

    const double top = std::norm(d(dim - 1, 0));
    if (top > 1e-9) {
        std::ostringstream msg;
        msg << "displacement_operator: D|0> has population " << top
            << " at the top Fock level; increase n_max (currently " << n_max << ")";
        throw TruncationError(msg.str());
    }
    return d;
}

Matrix propagator(const Matrix& h, double t) {
    if (h.rows() != h.cols()) throw ConfigError("propagator: Hamiltonian not square");
    const double defect = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (defect > kHermitianTol) {
        std::ostringstream msg;
        msg << "propagator: Hamiltonian Hermiticity defect " << defect
            << " exceeds " << kHermitianTol;
        throw NumericError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector phases(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k)
        phases(k) = std::polar(1.0, -es.eigenvalues()(k) * t);
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

StateVector evolve(const Matrix& h, const StateVector& psi, double t) {
    if (h.rows() != h.cols() || h.rows() != psi.dim())
        throw ConfigError("evolve: Hamiltonian/state dimension mismatch");
    const double defect = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (defect > kHermitianTol) {
        std::ostringstream msg;
        msg << "evolve: Hamiltonian Hermiticity defect " << defect << " exceeds " << kHermitianTol;
        throw NumericError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector rotated = es.eigenvectors().adjoint() * psi.amplitudes;
    for (Eigen::Index k = 0; k < rotated.size(); ++k)
        rotated(k) *= std::polar(1.0, -es.eigenvalues()(k) * t);
    Vector out = es.eigenvectors() * rotated;

    const double norm = out.norm();
    if (std::abs(norm - 1.0) > kNormTol) {
        std::ostringstream msg;
        msg << "evolve: norm drifted to " << norm;
        throw NumericError(msg.str());
    }
    return StateVector(psi.dims, std::move(out));
}

double fidelity(const DensityMatrix& rho, const StateVector& target) {
    if (rho.dims != target.dims)
        throw ConfigError("fidelity: state dimensions do not match");
    const Complex f = target.amplitudes.adjoint() * rho.elements * target.amplitudes;
    return std::clamp(f.real(), 0.0, 1.0);
}

double purity(const DensityMatrix& rho) {
    // Tr rho^2 = sum |rho_ij|^2 for Hermitian rho.
    return rho.elements.squaredNorm();
}

double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.elements, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double p = es.eigenvalues()(k);
        if (p > 1e-12) s -= p * std::log(p);
    }
    return std::max(s, 0.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dims != sigma.dims)
        throw ConfigError("trace_distance: state dimensions do not match");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.elements - sigma.elements, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

} // namespace qpulse
