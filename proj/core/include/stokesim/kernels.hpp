#pragma once

// Free-space Stokeslet kernels, singular and regularized, in two and three
// dimensions with unit viscosity. The regularized variants are the exact
// convolutions of the singular kernels with the power-law blobs
//
//   2D:  zeta_eps(r) = 3 eps^3 / (2 pi (r^2 + eps^2)^(5/2))
//   3D:  zeta_eps(r) = 15 eps^4 / (8 pi (r^2 + eps^2)^(7/2))
//
// which gives, with R = sqrt(|r|^2 + eps^2),
//
//   2D:  U_eps = (1/4pi) [ -I (ln(R+eps) - eps(R+2eps)/(R(R+eps)))
//                          + rr (R+2eps)/(R(R+eps)^2) ]
//   3D:  U_eps = (1/8pi) [  I (R^2+eps^2)/R^3 + rr/R^3 ]
//
// The test suite checks these against direct numerical convolution.

#include <array>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "stokesim/errors.hpp"

namespace stokesim {

template <int D>
using Vec = Eigen::Matrix<double, D, 1>;
template <int D>
using Mat = Eigen::Matrix<double, D, D>;

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;
using Tensor2 = Mat<2>;
using Tensor3 = Mat<3>;

struct KernelParams {
    int dimension = 2; // 2 or 3
    double epsilon = 0.1;
};

// Gradient of a d x d kernel: d[m](i,j) = dU_ij / dr_m.
template <int D>
struct KernelGradient {
    std::array<Mat<D>, D> d;

    // contraction (grad U . v)_ij = sum_m d[m](i,j) v_m
    Mat<D> contract(const Vec<D>& v) const {
        Mat<D> out = Mat<D>::Zero();
        for (int m = 0; m < D; ++m) out += d[m] * v[m];
        return out;
    }
};

inline constexpr double kSingularGuard = 1e-14;

namespace detail {

inline void check_separation(double r2, double scale) {
    const double guard = kSingularGuard * scale;
    if (!(r2 > guard * guard)) {
        std::ostringstream os;
        os << "singular kernel evaluated at separation " << std::sqrt(r2)
           << " below guard " << guard;
        throw SingularEvaluation(os.str());
    }
}

} // namespace detail

template <int D>
Mat<D> stokeslet_singular(const Vec<D>& r, double length_scale = 1.0);

template <>
inline Tensor2 stokeslet_singular<2>(const Vec2& r, double length_scale) {
    const double r2 = r.squaredNorm();
    detail::check_separation(r2, length_scale);
    const double pref = 1.0 / (4.0 * M_PI);
    Tensor2 out = (-pref * 0.5 * std::log(r2)) * Tensor2::Identity();
    out += (pref / r2) * (r * r.transpose());
    return out;
}

template <>
inline Tensor3 stokeslet_singular<3>(const Vec3& r, double length_scale) {
    const double r2 = r.squaredNorm();
    detail::check_separation(r2, length_scale);
    const double rn = std::sqrt(r2);
    const double pref = 1.0 / (8.0 * M_PI);
    Tensor3 out = (pref / rn) * Tensor3::Identity();
    out += (pref / (r2 * rn)) * (r * r.transpose());
    return out;
}

template <int D>
Mat<D> stokeslet_regularized(const Vec<D>& r, double epsilon);

template <>
inline Tensor2 stokeslet_regularized<2>(const Vec2& r, double epsilon) {
    const double e = epsilon;
    const double R = std::sqrt(r.squaredNorm() + e * e);
    const double L = std::log(R + e) - e * (R + 2.0 * e) / (R * (R + e));
    const double M = (R + 2.0 * e) / (R * (R + e) * (R + e));
    const double pref = 1.0 / (4.0 * M_PI);
    Tensor2 out = (-pref * L) * Tensor2::Identity();
    out += (pref * M) * (r * r.transpose());
    return out;
}

template <>
inline Tensor3 stokeslet_regularized<3>(const Vec3& r, double epsilon) {
    const double e = epsilon;
    const double R2 = r.squaredNorm() + e * e;
    const double R = std::sqrt(R2);
    const double R3 = R2 * R;
    const double pref = 1.0 / (8.0 * M_PI);
    Tensor3 out = (pref * (R2 + e * e) / R3) * Tensor3::Identity();
    out += (pref / R3) * (r * r.transpose());
    return out;
}

template <int D>
KernelGradient<D> stokeslet_regularized_gradient(const Vec<D>& r, double epsilon);

// dU_ij/dr_m = (1/4pi)[ -delta_ij L'(R) r_m/R
//                       + (delta_im r_j + delta_jm r_i) M(R)
//                       + r_i r_j M'(R) r_m/R ]
template <>
inline KernelGradient<2> stokeslet_regularized_gradient<2>(const Vec2& r, double epsilon) {
    const double e = epsilon;
    const double R2 = r.squaredNorm() + e * e;
    const double R = std::sqrt(R2);
    const double Re = R + e;
    const double M = Re + e; // R + 2 eps
    const double Mv = M / (R * Re * Re);
    const double Lp = 1.0 / Re + e * (R2 + 4.0 * R * e + 2.0 * e * e) / (R2 * Re * Re);
    const double Mp = -2.0 * (R2 + 3.0 * R * e + e * e) / (R2 * Re * Re * Re);
    const double pref = 1.0 / (4.0 * M_PI);

    KernelGradient<2> g;
    for (int m = 0; m < 2; ++m) {
        Tensor2 gm = (-Lp * r[m] / R) * Tensor2::Identity();
        gm += (Mp * r[m] / R) * (r * r.transpose());
        for (int j = 0; j < 2; ++j) {
            gm(m, j) += r[j] * Mv;
            gm(j, m) += r[j] * Mv;
        }
        g.d[m] = pref * gm;
    }
    return g;
}

// dU_ij/dr_m = (1/8pi)[ -delta_ij r_m (R^2 + 3 eps^2)/R^5
//                       + (delta_im r_j + delta_jm r_i)/R^3
//                       - 3 r_i r_j r_m / R^5 ]
template <>
inline KernelGradient<3> stokeslet_regularized_gradient<3>(const Vec3& r, double epsilon) {
    const double e = epsilon;
    const double R2 = r.squaredNorm() + e * e;
    const double R = std::sqrt(R2);
    const double R3 = R2 * R;
    const double R5 = R3 * R2;
    const double pref = 1.0 / (8.0 * M_PI);

    KernelGradient<3> g;
    for (int m = 0; m < 3; ++m) {
        Tensor3 gm = (-r[m] * (R2 + 3.0 * e * e) / R5) * Tensor3::Identity();
        gm += (-3.0 * r[m] / R5) * (r * r.transpose());
        for (int j = 0; j < 3; ++j) {
            gm(m, j) += r[j] / R3;
            gm(j, m) += r[j] / R3;
        }
        g.d[m] = pref * gm;
    }
    return g;
}

} // namespace stokesim
