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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cpgate {

using Complex = std::complex<double>;
using Dims = std::vector<int>;

/// Product of subsystem dimensions.
std::size_t total_dimension(const Dims& dims);

/// Dense operator on a tensor-product space. Entries are stored in the
/// canonical row-major Kronecker ordering of `dims`.
class OperatorMatrix {
public:
    OperatorMatrix() = default;
    OperatorMatrix(Dims dims, Eigen::MatrixXcd entries);

    static OperatorMatrix identity(const Dims& dims);
    static OperatorMatrix zero(const Dims& dims);

    const Dims& dims() const noexcept { return dims_; }
    const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
    Eigen::Index dimension() const noexcept { return entries_.rows(); }

    Complex operator()(Eigen::Index row, Eigen::Index col) const { return entries_(row, col); }

    OperatorMatrix adjoint() const;

    /// max |H - H^dagger| over all entries.
    double hermiticity_error() const;
    /// max |U^dagger U - I| over all entries.
    double unitarity_error() const;

    OperatorMatrix& operator+=(const OperatorMatrix& other);
    OperatorMatrix& operator-=(const OperatorMatrix& other);
    OperatorMatrix& operator*=(Complex scale);

    friend OperatorMatrix operator+(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs += rhs; }
    friend OperatorMatrix operator-(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs -= rhs; }
    friend OperatorMatrix operator*(Complex scale, OperatorMatrix op) { return op *= scale; }
    friend OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

private:
    Dims dims_;
    Eigen::MatrixXcd entries_;
};

/// Pure state on a tensor-product space.
class StateVector {
public:
    StateVector() = default;
    StateVector(Dims dims, Eigen::VectorXcd amplitudes);

    static StateVector basis(const Dims& dims, Eigen::Index index);

    const Dims& dims() const noexcept { return dims_; }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
    Eigen::Index dimension() const noexcept { return amplitudes_.size(); }

    Complex operator[](Eigen::Index index) const { return amplitudes_(index); }

    double norm() const { return amplitudes_.norm(); }

    friend StateVector operator*(const OperatorMatrix& op, const StateVector& state);

private:
    Dims dims_;
    Eigen::VectorXcd amplitudes_;
};

/// Kronecker product; dims are concatenated.
OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b);

/// |i><j| on a single subsystem of dimension `dim`.
OperatorMatrix projector(int dim, int i, int j);

/// Truncated single-mode Fock space holding |0>, ..., |n_max>.
struct FockSpace {
    int n_max = 2;

    int dimension() const noexcept { return n_max + 1; }
};

struct FockOperators {
    OperatorMatrix create;
    OperatorMatrix annihilate;
};

/// Creation/annihilation operators on |0>..|n_max>. The creation operator
/// maps |n_max> to zero. Throws std::invalid_argument for n_max < 1.
FockOperators fock_ops(int n_max);

class NonHermitianError : public std::invalid_argument {
public:
    explicit NonHermitianError(double asymmetry);

    double asymmetry() const noexcept { return asymmetry_; }

private:
    double asymmetry_;
};

inline constexpr double kHermitianTolerance = 1e-12;

/// exp(-i h t) through the eigendecomposition of the Hermitian generator.
/// Throws NonHermitianError when max|h - h^dagger| exceeds 1e-12.
OperatorMatrix matexp_hermitian(const OperatorMatrix& h, double t);

/// <x|y>, conjugate-linear in `x`. Throws std::invalid_argument on a dims mismatch.
Complex overlap(const StateVector& x, const StateVector& y);

/// Fixed layout for the two-SQUID + resonator system:
/// [SQUID a (4 levels), SQUID b (4 levels), resonator (n_max + 1)].
struct SystemSpace {
    static constexpr int kSquidLevels = 4;

    int n_max = 2;

    int fock_dimension() const noexcept { return n_max + 1; }
    int dimension() const noexcept { return kSquidLevels * kSquidLevels * fock_dimension(); }
    Dims dims() const { return {kSquidLevels, kSquidLevels, fock_dimension()}; }

    /// (k * 4 + l) * (n_max + 1) + n
    Eigen::Index index(int level_a, int level_b, int photons) const;

    StateVector basis_state(int level_a, int level_b, int photons) const;
};

}  // namespace cpgate
