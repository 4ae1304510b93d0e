#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "carleson_lab/errors.hpp"

namespace clab {

using Complex = std::complex<double>;
/// A point or tangent vector of C^n.
using CVec = Eigen::VectorXcd;
/// Real coordinates (Re z_1, Im z_1, ..., Re z_n, Im z_n) of a point of C^n.
using RVec = Eigen::VectorXd;
/// Columns are the vectors of a (partial) unitary frame.
using CMat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// Hermitian inner product <a, b> = sum a_j conj(b_j).
inline Complex hermitian(const CVec& a, const CVec& b) { return b.dot(a); }

inline RVec to_real(const CVec& z) {
    RVec x(2 * z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) {
        x(2 * j) = z(j).real();
        x(2 * j + 1) = z(j).imag();
    }
    return x;
}

inline CVec to_complex(const RVec& x) {
    CVec z(x.size() / 2);
    for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = Complex(x(2 * j), x(2 * j + 1));
    return z;
}

inline CVec make_point(std::initializer_list<Complex> coords) {
    CVec z(static_cast<Eigen::Index>(coords.size()));
    Eigen::Index j = 0;
    for (const auto& c : coords) z(j++) = c;
    return z;
}

inline bool all_finite(const CVec& z) {
    for (Eigen::Index j = 0; j < z.size(); ++j)
        if (!std::isfinite(z(j).real()) || !std::isfinite(z(j).imag())) return false;
    return true;
}

inline void require_finite(const CVec& z, const char* where) {
    if (!all_finite(z)) throw InputDomainError(std::string(where) + ": non-finite coordinate");
}

/// Lexicographic order on real coordinates.
inline bool lex_less(const CVec& a, const CVec& b) {
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        if (a(j).real() != b(j).real()) return a(j).real() < b(j).real();
        if (a(j).imag() != b(j).imag()) return a(j).imag() < b(j).imag();
    }
    return false;
}

/// Volume of the Euclidean unit ball of R^{2n}: pi^n / n!.
inline double unit_ball_volume(int n) {
    double v = 1.0;
    for (int k = 1; k <= n; ++k) v *= kPi / k;
    return v;
}

inline double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace clab
