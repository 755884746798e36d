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

#include "cpgate/hilbert.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace cpgate {

std::size_t total_dimension(const Dims& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, [](std::size_t acc, int d) {
        if (d <= 0) {
            throw std::invalid_argument("subsystem dimensions must be positive");
        }
        return acc * static_cast<std::size_t>(d);
    });
}

OperatorMatrix::OperatorMatrix(Dims dims, Eigen::MatrixXcd entries)
    : dims_(std::move(dims)), entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw std::invalid_argument("operator matrix must be square");
    }
    if (static_cast<std::size_t>(entries_.rows()) != total_dimension(dims_)) {
        throw std::invalid_argument("operator side does not match the product of dims");
    }
}

OperatorMatrix OperatorMatrix::identity(const Dims& dims) {
    const auto n = static_cast<Eigen::Index>(total_dimension(dims));
    return {dims, Eigen::MatrixXcd::Identity(n, n)};
}

OperatorMatrix OperatorMatrix::zero(const Dims& dims) {
    const auto n = static_cast<Eigen::Index>(total_dimension(dims));
    return {dims, Eigen::MatrixXcd::Zero(n, n)};
}

OperatorMatrix OperatorMatrix::adjoint() const { return {dims_, entries_.adjoint()}; }

double OperatorMatrix::hermiticity_error() const {
    if (entries_.size() == 0) return 0.0;
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double OperatorMatrix::unitarity_error() const {
    if (entries_.size() == 0) return 0.0;
    const auto n = entries_.rows();
    return (entries_.adjoint() * entries_ - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& other) {
    if (dims_ != other.dims_) throw std::invalid_argument("operator dims mismatch in sum");
    entries_ += other.entries_;
    return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& other) {
    if (dims_ != other.dims_) throw std::invalid_argument("operator dims mismatch in difference");
    entries_ -= other.entries_;
    return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(Complex scale) {
    entries_ *= scale;
    return *this;
}

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
    if (lhs.dims_ != rhs.dims_) throw std::invalid_argument("operator dims mismatch in product");
    return {lhs.dims_, lhs.entries_ * rhs.entries_};
}

StateVector::StateVector(Dims dims, Eigen::VectorXcd amplitudes)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != total_dimension(dims_)) {
        throw std::invalid_argument("amplitude count does not match the product of dims");
    }
}

StateVector StateVector::basis(const Dims& dims, Eigen::Index index) {
    const auto n = static_cast<Eigen::Index>(total_dimension(dims));
    if (index < 0 || index >= n) throw std::out_of_range("basis index out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    v(index) = 1.0;
    return {dims, std::move(v)};
}

StateVector operator*(const OperatorMatrix& op, const StateVector& state) {
    if (op.dims() != state.dims_) throw std::invalid_argument("operator/state dims mismatch");
    return {state.dims_, op.entries() * state.amplitudes_};
}

OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b) {
    const auto& x = a.entries();
    const auto& y = b.entries();
    Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        }
    }
    Dims dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    return {std::move(dims), std::move(out)};
}

OperatorMatrix projector(int dim, int i, int j) {
    if (i < 0 || i >= dim || j < 0 || j >= dim) throw std::out_of_range("projector index out of range");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    m(i, j) = 1.0;
    return {{dim}, std::move(m)};
}

FockOperators fock_ops(int n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("Fock truncation n_max must be at least 1");
    }
    const int d = n_max + 1;
    Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) {
        lower(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    // a+ is the adjoint of a; its last column (acting on |n_max>) is zero.
    Eigen::MatrixXcd raise = lower.adjoint();
    return {OperatorMatrix({d}, std::move(raise)), OperatorMatrix({d}, std::move(lower))};
}

namespace {

std::string asymmetry_message(double asymmetry) {
    std::ostringstream os;
    os << "generator is not Hermitian: max|H - H^dagger| = " << asymmetry;
    return os.str();
}

}  // namespace

NonHermitianError::NonHermitianError(double asymmetry)
    : std::invalid_argument(asymmetry_message(asymmetry)), asymmetry_(asymmetry) {}

OperatorMatrix matexp_hermitian(const OperatorMatrix& h, double t) {
    const double asym = h.hermiticity_error();
    if (asym > kHermitianTolerance) throw NonHermitianError(asym);
    const Eigen::Index n = h.dimension();
    if (n == 0) return h;

    // Symmetrize so the solver sees an exactly Hermitian matrix.
    const Eigen::MatrixXcd sym = 0.5 * (h.entries() + h.entries().adjoint());

    // Exponentiate each connected block on its own: uncoupled levels then keep
    // exact phases, and the eigenproblems stay small.
    const auto size = static_cast<std::size_t>(n);
    std::vector<std::size_t> parent(size);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto root = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t j = 0; j < size; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            if (sym(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != Complex(0.0)) {
                parent[root(i)] = root(j);
            }
        }
    }
    std::vector<std::vector<Eigen::Index>> blocks(size);
    for (std::size_t i = 0; i < size; ++i) blocks[root(i)].push_back(static_cast<Eigen::Index>(i));

    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& idx : blocks) {
        if (idx.empty()) continue;
        const auto m = static_cast<Eigen::Index>(idx.size());
        if (m == 1) {
            u(idx[0], idx[0]) = std::polar(1.0, -sym(idx[0], idx[0]).real() * t);
            continue;
        }
        const Eigen::MatrixXcd sub = sym(idx, idx);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sub);
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("Hermitian eigendecomposition failed");
        }
        const Eigen::VectorXd& w = solver.eigenvalues();
        Eigen::VectorXcd phases(m);
        for (Eigen::Index k = 0; k < m; ++k) phases(k) = std::polar(1.0, -w(k) * t);
        const Eigen::MatrixXcd& v = solver.eigenvectors();
        u(idx, idx) = v * phases.asDiagonal() * v.adjoint();
    }
    return {h.dims(), std::move(u)};
}

Complex overlap(const StateVector& x, const StateVector& y) {
    if (x.dims() != y.dims()) throw std::invalid_argument("overlap of states with different dims");
    return x.amplitudes().dot(y.amplitudes());
}

Eigen::Index SystemSpace::index(int level_a, int level_b, int photons) const {
    if (level_a < 0 || level_a >= kSquidLevels || level_b < 0 || level_b >= kSquidLevels || photons < 0 ||
        photons > n_max) {
        throw std::out_of_range("system basis label out of range");
    }
    return static_cast<Eigen::Index>((level_a * kSquidLevels + level_b) * fock_dimension() + photons);
}

StateVector SystemSpace::basis_state(int level_a, int level_b, int photons) const {
    return StateVector::basis(dims(), index(level_a, level_b, photons));
}

}  // namespace cpgate
