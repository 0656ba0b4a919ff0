#pragma once

// Small fixed operators: Pauli matrices, ladder operators, Fock basis states.
// Atom basis ordering is {|g>, |e>} with |g> at index 0.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace qpulse {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

inline Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0,
         1.0, 0.0;
    return m;
}

inline Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0),
         Complex(0.0, 1.0), 0.0;
    return m;
}

inline Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0,
         0.0, -1.0;
    return m;
}

inline Matrix sigma_plus() { // |e><g|
    Matrix m = Matrix::Zero(2, 2);
    m(1, 0) = 1.0;
    return m;
}

inline Matrix sigma_minus() { // |g><e|
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

// a |n> = sqrt(n) |n-1>
inline Matrix annihilation(Eigen::Index dim) {
    if (dim < 1) throw std::invalid_argument("annihilation: dim must be >= 1");
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index n = 1; n < dim; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
    return m;
}

inline Matrix creation(Eigen::Index dim) { return annihilation(dim).adjoint(); }

inline Matrix number_operator(Eigen::Index dim) {
    if (dim < 1) throw std::invalid_argument("number_operator: dim must be >= 1");
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index n = 0; n < dim; ++n) m(n, n) = static_cast<double>(n);
    return m;
}

inline Vector fock_amplitudes(Eigen::Index dim, Eigen::Index n) {
    if (n < 0 || n >= dim) throw std::invalid_argument("fock_amplitudes: level out of range");
    Vector v = Vector::Zero(dim);
    v(n) = 1.0;
    return v;
}

inline Eigen::Vector2cd atom_ground() { return {1.0, 0.0}; }
inline Eigen::Vector2cd atom_excited() { return {0.0, 1.0}; }

// (|g> + |e>)/sqrt(2), the +x superposition
inline Eigen::Vector2cd atom_plus() {
    const double s = 1.0 / std::sqrt(2.0);
    return {s, s};
}

// exp(-i (theta/2) sigma_x) applied to an atom state: the ideal classical
// Rabi rotation all gate benchmarks compare against.
inline Eigen::Vector2cd rotate_about_x(const Eigen::Vector2cd& atom, double theta) {
    const double c = std::cos(0.5 * theta);
    const Complex ms(0.0, -std::sin(0.5 * theta));
    return {c * atom(0) + ms * atom(1), ms * atom(0) + c * atom(1)};
}

} // namespace qpulse
