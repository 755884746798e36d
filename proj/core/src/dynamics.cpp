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

#include "cpgate/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace cpgate {

namespace {

constexpr int kLevels = SystemSpace::kSquidLevels;

OperatorMatrix squid_identity() { return OperatorMatrix::identity({kLevels}); }

/// Embed `squid_op` (4x4) and `mode_op` ((n_max+1)^2) into the full space.
OperatorMatrix embed(const OperatorMatrix& squid_op, Squid squid, const OperatorMatrix& mode_op) {
    const OperatorMatrix& op_a = squid == Squid::a ? squid_op : squid_identity();
    const OperatorMatrix& op_b = squid == Squid::b ? squid_op : squid_identity();
    return tensor(tensor(op_a, op_b), mode_op);
}

OperatorMatrix mode_identity(int n_max) { return OperatorMatrix::identity({n_max + 1}); }

void check_n_max(int n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
}

}  // namespace

std::string_view to_string(Squid squid) { return squid == Squid::a ? "a" : "b"; }

std::string_view to_string(FidelityModelKind kind) { return kind == FidelityModelKind::ideal ? "ideal" : "full"; }

void GateParams::validate() const {
    if (!(g_a > 0.0) || !(g_b > 0.0)) throw std::invalid_argument("couplings g_a and g_b must be positive");
    if (!(delta_c > 0.0)) throw std::invalid_argument("detuning delta_c must be positive");
    if (!(omega_13 > 0.0) || !(omega_02 > 0.0) || !(omega_12 > 0.0)) {
        throw std::invalid_argument("Rabi frequencies must be positive");
    }
    if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
}

OperatorMatrix jc_resonant(double g, Squid squid, int n_max) {
    check_n_max(n_max);
    const auto [create, annihilate] = fock_ops(n_max);
    OperatorMatrix h = embed(projector(kLevels, 2, 3), squid, create);
    h += embed(projector(kLevels, 3, 2), squid, annihilate);
    return g * h;
}

OperatorMatrix dispersive(double g, double delta, Squid squid, int n_max) {
    check_n_max(n_max);
    if (!(delta > 0.0)) throw std::invalid_argument("dispersive detuning must be positive");
    const auto [create, annihilate] = fock_ops(n_max);
    const OperatorMatrix number = create * annihilate;
    const OperatorMatrix level_diff = projector(kLevels, 3, 3) - projector(kLevels, 2, 2);
    return (g * g / delta) * embed(level_diff, squid, number);
}

OperatorMatrix jc_detuned(double g, double delta, Squid squid, int n_max) {
    OperatorMatrix h = jc_resonant(g, squid, n_max);
    h += Complex(delta) * embed(projector(kLevels, 3, 3), squid, mode_identity(n_max));
    return h;
}

OperatorMatrix drive(double omega, double phi, LevelPair pair, Squid squid, int n_max) {
    check_n_max(n_max);
    if (pair.low == pair.high) throw std::invalid_argument("drive level pair must be two distinct levels");
    if (pair.low < 0 || pair.high < 0 || pair.low >= kLevels || pair.high >= kLevels) {
        throw std::invalid_argument("drive levels must lie in 0..3");
    }
    const Complex forward = std::polar(omega, phi);
    OperatorMatrix squid_op = forward * projector(kLevels, pair.low, pair.high);
    squid_op += std::conj(forward) * projector(kLevels, pair.high, pair.low);
    return embed(squid_op, squid, mode_identity(n_max));
}

StateVector evolve_closed_resonant(const StateVector& state, double g, double t, Squid squid) {
    if (state.dims().size() != 3) throw std::invalid_argument("expected [a, b, resonator] dims");
    const SystemSpace space{state.dims()[2] - 1};
    Eigen::VectorXcd out = state.amplitudes();
    for (int other = 0; other < kLevels; ++other) {
        for (int n = 0; n < space.n_max; ++n) {
            const auto upper = squid == Squid::a ? space.index(3, other, n) : space.index(other, 3, n);
            const auto lower = squid == Squid::a ? space.index(2, other, n + 1) : space.index(other, 2, n + 1);
            const double angle = g * std::sqrt(static_cast<double>(n + 1)) * t;
            const Complex c = std::cos(angle);
            const Complex s = Complex(0.0, -std::sin(angle));
            const Complex up = state[upper];
            const Complex lo = state[lower];
            out(upper) = c * up + s * lo;
            out(lower) = s * up + c * lo;
        }
    }
    return {state.dims(), std::move(out)};
}

StateVector evolve_closed_dispersive(const StateVector& state, double g, double delta, double t, Squid squid) {
    if (state.dims().size() != 3) throw std::invalid_argument("expected [a, b, resonator] dims");
    if (!(delta > 0.0)) throw std::invalid_argument("dispersive detuning must be positive");
    const SystemSpace space{state.dims()[2] - 1};
    const double rate = g * g / delta;
    Eigen::VectorXcd out = state.amplitudes();
    for (int other = 0; other < kLevels; ++other) {
        for (int n = 1; n <= space.n_max; ++n) {
            const auto two = squid == Squid::a ? space.index(2, other, n) : space.index(other, 2, n);
            const auto three = squid == Squid::a ? space.index(3, other, n) : space.index(other, 3, n);
            out(two) *= std::polar(1.0, rate * n * t);
            out(three) *= std::polar(1.0, -rate * n * t);
        }
    }
    return {state.dims(), std::move(out)};
}

OperatorMatrix HamiltonianSpec::realize(const GateParams& params) const {
    const int n_max = params.n_max;
    OperatorMatrix h = OperatorMatrix::zero(params.space().dims());
    for (const auto& term : terms) {
        if (const auto* d = std::get_if<DriveTerm>(&term)) {
            h += drive(d->omega, d->phase, d->levels, d->squid, n_max);
            continue;
        }
        const auto& c = std::get<CouplingTerm>(term);
        const double g = c.squid == Squid::a ? params.g_a : params.g_b;
        switch (c.kind) {
        case CouplingKind::jc_resonant:
            h += jc_resonant(g, c.squid, n_max);
            break;
        case CouplingKind::dispersive:
        case CouplingKind::jc_detuned:
            if (c.squid != Squid::b) {
                throw std::invalid_argument("only SQUID b is detuned from the resonator");
            }
            h += c.kind == CouplingKind::dispersive ? dispersive(g, params.delta_c, c.squid, n_max)
                                                     : jc_detuned(g, params.delta_c, c.squid, n_max);
            break;
        }
    }
    return h;
}

OperatorMatrix propagator(const std::vector<TimedHamiltonian>& segments, const GateParams& params) {
    const Dims dims = params.space().dims();
    OperatorMatrix u = OperatorMatrix::identity(dims);
    for (const auto& seg : segments) {
        if (seg.duration < 0.0) throw std::invalid_argument("segment duration must be nonnegative");
        u = matexp_hermitian(seg.hamiltonian.realize(params), seg.duration) * u;
    }
    return u;
}

StateVector propagate(const StateVector& state, const std::vector<TimedHamiltonian>& segments,
                      const GateParams& params) {
    if (state.dims() != params.space().dims()) throw std::invalid_argument("state dims do not match params");
    StateVector out = state;
    for (const auto& seg : segments) {
        if (seg.duration < 0.0) throw std::invalid_argument("segment duration must be nonnegative");
        out = matexp_hermitian(seg.hamiltonian.realize(params), seg.duration) * out;
    }
    return out;
}

}  // namespace cpgate
