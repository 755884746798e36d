// Copyright 2026 The cpgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Reference computations used by the tests. Nothing here calls into the
// library's propagators: operators are assembled from scratch and exponentiated
// with Eigen's Pade-based matrix exponential.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;

/// exp(-i h t), scaling-and-squaring Pade.
inline Mat expm(const Mat& h, double t) {
    const Mat m = Complex(0.0, -t) * h;
    return m.exp();
}

/// Two SQUIDs (4 levels each) and a resonator truncated at n_max photons.
struct Space {
    int n_max = 2;

    int fock() const { return n_max + 1; }
    int dim() const { return 16 * fock(); }
    int index(int a, int b, int n) const { return (a * 4 + b) * fock() + n; }

    Mat zero() const { return Mat::Zero(dim(), dim()); }

    Vec ket(int a, int b, int n) const {
        Vec v = Vec::Zero(dim());
        v(index(a, b, n)) = 1.0;
        return v;
    }

    /// Single-SQUID operator |lo><hi| on squid 0 (a) or 1 (b), identity elsewhere.
    Mat flip(int squid, int lo, int hi) const {
        Mat m = zero();
        for (int x = 0; x < 4; ++x) {
            for (int n = 0; n < fock(); ++n) {
                if (squid == 0) {
                    m(index(lo, x, n), index(hi, x, n)) = 1.0;
                } else {
                    m(index(x, lo, n), index(x, hi, n)) = 1.0;
                }
            }
        }
        return m;
    }

    /// g (c^dag |2><3| + h.c.) on one SQUID.
    Mat jc(int squid, double g) const {
        Mat m = zero();
        for (int x = 0; x < 4; ++x) {
            for (int n = 0; n < n_max; ++n) {
                const int from = squid == 0 ? index(3, x, n) : index(x, 3, n);
                const int to = squid == 0 ? index(2, x, n + 1) : index(x, 2, n + 1);
                m(to, from) = g * std::sqrt(n + 1.0);
                m(from, to) = g * std::sqrt(n + 1.0);
            }
        }
        return m;
    }

    /// Diagonal operator whose entry is f(a, b, n).
    Mat diag(const std::function<double(int, int, int)>& f) const {
        Mat m = zero();
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                for (int n = 0; n < fock(); ++n) m(index(a, b, n), index(a, b, n)) = f(a, b, n);
            }
        }
        return m;
    }

    /// Omega (e^{i phi}|lo><hi| + h.c.).
    Mat drive(int squid, int lo, int hi, double omega, double phi) const {
        const Mat f = flip(squid, lo, hi);
        const Mat up = omega * std::exp(Complex(0.0, phi)) * f;
        return up + Mat(up.adjoint());
    }
};

/// Ideal CP schedule assembled from scratch. `b_detuning` adds a diagonal
/// term (+s/2 on |1>_b, -s/2 on |2>_b, scaled by the photon number) during
/// the two simultaneous-pulse steps, the one imperfection the closed-form
/// fidelity accounts for.
struct CpOracle {
    double g_a = 1.0;
    double g_b = 1.0;
    double delta_c = 10.0;
    double omega13 = 10.0;
    double omega12 = 10.0;
    double b_detuning = 0.0;
    int n_max = 2;

    Mat unitary() const {
        const Space sp{n_max};
        const double t1 = kPi / (2.0 * omega13);
        const double t1p = kPi / (2.0 * g_a);
        const double t2 = kPi / (2.0 * omega12);
        const double t3 = kPi * delta_c / (g_b * g_b);
        const double chi = g_b * g_b / delta_c;
        const double s = b_detuning;

        const Mat wait = sp.jc(0, g_a) + sp.diag([&](int, int b, int n) {
            return chi * n * ((b == 3 ? 1.0 : 0.0) - (b == 2 ? 1.0 : 0.0));
        });
        const Mat shift = sp.diag([&](int, int b, int n) {
            return 0.5 * s * n * ((b == 1 ? 1.0 : 0.0) - (b == 2 ? 1.0 : 0.0));
        });
        const Mat p13 = sp.drive(0, 1, 3, omega13, kPi);
        const Mat ii = sp.drive(0, 0, 2, omega12, kPi / 2) + sp.drive(1, 1, 2, omega12, -kPi / 2) + shift;
        const Mat iv = sp.drive(0, 0, 2, omega12, -kPi / 2) + sp.drive(1, 1, 2, omega12, kPi / 2) + shift;

        Mat u = Mat::Identity(sp.dim(), sp.dim());
        for (const auto& [h, t] : std::vector<std::pair<Mat, double>>{
                 {p13, t1}, {wait, t1p}, {ii, t2}, {wait, t3}, {iv, t2}, {wait, t1p}, {p13, t1}}) {
            u = expm(h, t) * u;
        }
        return u;
    }

    /// |<psi_ideal|U psi>|^2 for qubit amplitudes (|00>,|01>,|10>,|11>).
    double fidelity(const Eigen::Vector4cd& psi) const {
        const Space sp{n_max};
        Vec in = Vec::Zero(sp.dim());
        Vec target = Vec::Zero(sp.dim());
        for (int i = 0; i < 4; ++i) {
            in(sp.index(i / 2, i % 2, 0)) = psi(i);
            target(sp.index(i / 2, i % 2, 0)) = (i == 3 ? -1.0 : 1.0) * psi(i);
        }
        return std::norm(target.dot(unitary() * in));
    }
};

/// Composite Simpson rule with `intervals` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int intervals = 10000) {
    const double h = (hi - lo) / intervals;
    double sum = f(lo) + f(hi);
    for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
    return sum * h / 3.0;
}

/// Local minima of a sampled function, by sign changes of the forward difference.
inline int count_local_minima(const std::function<double(double)>& f, double lo, double hi, int samples = 100001) {
    int minima = 0;
    const double h = (hi - lo) / (samples - 1);
    double prev_slope = f(lo + h) - f(lo);
    for (int i = 1; i + 1 < samples; ++i) {
        const double slope = f(lo + (i + 1) * h) - f(lo + i * h);
        if (prev_slope < 0.0 && slope >= 0.0) ++minima;
        prev_slope = slope;
    }
    return minima;
}

inline double wrap_phase(double phi) { return std::remainder(phi, 2.0 * kPi); }

}  // namespace oracle
