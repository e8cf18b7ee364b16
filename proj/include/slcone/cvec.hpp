#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace slcone {

using cplx = std::complex<double>;
using C3 = std::array<cplx, 3>;
using R3 = std::array<double, 3>;

inline C3 operator+(const C3& a, const C3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline C3 operator-(const C3& a, const C3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline C3 operator*(cplx s, const C3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline C3 operator*(double s, const C3& a) { return {s * a[0], s * a[1], s * a[2]}; }

// Hermitian product <a, b> = sum conj(a_j) b_j.
inline cplx herm(const C3& a, const C3& b) {
  return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1] + std::conj(a[2]) * b[2];
}

// Euclidean inner product on R^6 = C^3.
inline double rdot(const C3& a, const C3& b) { return herm(a, b).real(); }

// Standard symplectic form sum dx^j ^ dy^j.
inline double omega(const C3& a, const C3& b) { return herm(a, b).imag(); }

inline double norm2(const C3& a) { return std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]); }
inline double norm(const C3& a) { return std::sqrt(norm2(a)); }

// Complex determinant of the matrix with columns a, b, c.
inline cplx det3(const C3& a, const C3& b, const C3& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - b[0] * (a[1] * c[2] - a[2] * c[1]) +
         c[0] * (a[1] * b[2] - a[2] * b[1]);
}

inline double dot(const R3& a, const R3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline R3 cross(const R3& a, const R3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace slcone
