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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cpgate/analysis.hpp"
#include "cpgate/device.hpp"
#include "cpgate/pulseseq.hpp"
#include "support/oracles.hpp"
#include "support/random_schedule.hpp"

namespace {

using namespace cpgate;
namespace ps = cpgate::pseq;

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

struct Criterion {
    const char* name;
    double time_limit_s;  ///< <= 0 means untimed
    std::function<Outcome()> check;
};

std::string fmt(const char* format, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

StateVector random_state(const SystemSpace& space, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::VectorXcd v(space.dimension());
    for (auto& x : v) x = Complex(n(rng), n(rng));
    return {space.dims(), v / v.norm()};
}

Eigen::Vector4cd state_with_x(double x, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::Vector3cd rest;
    for (auto& c : rest) c = Complex(n(rng), n(rng));
    rest *= std::sqrt(1.0 - x) / rest.norm();
    const double phase = 2 * kPi * std::uniform_real_distribution<double>(0, 1)(rng);
    return {rest(0), rest(1), rest(2), std::polar(std::sqrt(x), phase)};
}

Outcome truth_table() {
    Outcome o;
    const TruthTable tt = run_truth_table(GateParams{}, ModelConfig::ideal());
    const Eigen::Matrix4cd want = Eigen::Vector4cd(1, 1, 1, -1).asDiagonal();
    const double amp = (tt.matrix() - want).cwiseAbs().maxCoeff();
    double phase = std::abs(oracle::wrap_phase(tt.rows[3].relative_phase - kPi));
    for (int i = 1; i < 3; ++i) phase = std::max(phase, std::abs(oracle::wrap_phase(tt.rows[i].relative_phase)));
    o.require(amp < 1e-10, "amplitude error " + fmt("%.3g", amp));
    o.require(phase < 1e-10, "phase error " + fmt("%.3g", phase));
    o.require(tt.max_leakage() < 1e-10, "leakage " + fmt("%.3g", tt.max_leakage()));
    // Independent construction of the same schedule.
    const double oracle_dev = (schedule_propagator(build_schedule(GateParams{}), GateParams{}, ModelConfig::ideal())
                                   .entries() -
                               oracle::CpOracle{}.unitary())
                                  .cwiseAbs()
                                  .maxCoeff();
    o.require(oracle_dev < 1e-9, "oracle mismatch " + fmt("%.3g", oracle_dev));
    o.detail = o.pass ? "max amplitude error " + fmt("%.2g", amp) : o.detail;
    return o;
}

Outcome gate_time_check() {
    Outcome o;
    const double g_si = 3.0e9;
    const double tau = gate_time(GateParams{}) / g_si;
    const double want = 11.2 * kPi / 3.0e9;
    o.require(std::abs(tau - want) <= 1e-12 * want, "tau = " + fmt("%.6g s", tau));
    o.require(std::abs(tau - 12e-9) / 12e-9 < 0.05, "not within 5% of 12 ns");
    if (o.pass) o.detail = "tau = " + fmt("%.4f ns", tau * 1e9);
    return o;
}

Outcome occupation() {
    Outcome o;
    const double p3 = occupation_p3(1.0, 10.0);
    o.require(std::abs(p3 - 1.0 / 26.0) <= 1e-15, "p3 = " + fmt("%.17g", p3));
    o.require(fmt("%.2g", p3) == "0.038" || fmt("%.1g", p3) == "0.04", "p3 not ~0.04");
    if (o.pass) o.detail = "p3 = " + fmt("%.4f", p3);
    return o;
}

Outcome perfect_limit() {
    Outcome o;
    double worst = 0.0;
    for (double omega : {0.1, 0.6, 1.0, 10.0}) {
        const FidelityTerms t = fidelity_terms_from_shift(omega, 0.0);
        for (int i = 0; i <= 100; ++i) worst = std::max(worst, std::abs(fidelity_F(i / 100.0, t) - 1.0));
        worst = std::max(worst, std::abs(average_fidelity(t) - 1.0));
    }
    o.require(worst <= 1e-12, "max |F - 1| = " + fmt("%.3g", worst));
    if (o.pass) o.detail = "max |F - 1| = " + fmt("%.2g", worst);
    return o;
}

Outcome fig_regression() {
    Outcome o;
    constexpr double kFrozen = 0.9999409844439079;
    const double f = average_fidelity(fidelity_terms(0.6, 1.0, 10.0));
    o.require(f >= 0.999, "F_avg = " + fmt("%.10f", f));
    o.require(std::abs(f - kFrozen) < 1e-12, "drifted from frozen value: " + fmt("%.16f", f));
    std::vector<double> grid;
    for (int i = 0; i <= 70; ++i) grid.push_back(0.3 + 0.01 * i);
    const auto rows = sweep_average_fidelity(grid, 1.0, 10.0);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].avg_fidelity_analytic < rows[i - 1].avg_fidelity_analytic) {
            o.require(false, "sweep decreases at " + fmt("%.2f", grid[i]));
            break;
        }
    }
    if (o.pass) o.detail = "F_avg(0.6) = " + fmt("%.10f", f);
    return o;
}

Outcome closed_forms() {
    Outcome o;
    const SystemSpace space{2};
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.05, 5.0);
    double res = 0.0;
    double disp = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        GateParams p;
        p.g_a = u(rng);
        const double t = u(rng);
        const auto psi = random_state(space, rng);
        const HamiltonianSpec spec{{CouplingTerm{CouplingKind::jc_resonant, Squid::a}}};
        const Eigen::VectorXcd pade = oracle::expm(jc_resonant(p.g_a, Squid::a, 2).entries(), t) * psi.amplitudes();
        const auto closed = evolve_closed_resonant(psi, p.g_a, t).amplitudes();
        res = std::max({res, (propagate(psi, {{spec, t}}, p).amplitudes() - closed).cwiseAbs().maxCoeff(),
                        (pade - closed).cwiseAbs().maxCoeff()});
    }
    for (int trial = 0; trial < 100; ++trial) {
        GateParams p;
        p.g_b = u(rng);
        p.delta_c = 5.0 * p.g_b + u(rng);
        const double t = 10.0 * u(rng);
        const auto psi = random_state(space, rng);
        const HamiltonianSpec spec{{CouplingTerm{CouplingKind::dispersive, Squid::b}}};
        const auto closed = evolve_closed_dispersive(psi, p.g_b, p.delta_c, t).amplitudes();
        disp = std::max(disp, (propagate(psi, {{spec, t}}, p).amplitudes() - closed).cwiseAbs().maxCoeff());
    }
    o.require(res < 1e-10, "resonant deviation " + fmt("%.3g", res));
    o.require(disp < 1e-12, "dispersive deviation " + fmt("%.3g", disp));
    if (o.pass) o.detail = "max deviations " + fmt("%.2g", res) + " / " + fmt("%.2g", disp);
    return o;
}

Outcome analytic_vs_simulated() {
    Outcome o;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> omega(0.2, 2.0);
    std::uniform_real_distribution<double> shift(0.0, 0.5);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        oracle::CpOracle c;
        c.omega12 = omega(rng);
        c.b_detuning = shift(rng);
        const double x = ux(rng);
        const double brute = c.fidelity(state_with_x(x, rng));
        worst = std::max(worst, std::abs(fidelity_F(x, fidelity_terms_from_shift(c.omega12, c.b_detuning)) - brute));
    }
    o.require(worst < 1e-6, "max deviation " + fmt("%.3g", worst));
    if (o.pass) o.detail = "max deviation " + fmt("%.2g", worst);
    return o;
}

Outcome quadrature() {
    Outcome o;
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> omega(0.05, 3.0);
    std::uniform_real_distribution<double> shift(0.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const FidelityTerms t = fidelity_terms_from_shift(omega(rng), shift(rng));
        const double integral = oracle::simpson([&](double x) { return fidelity_F(x, t); }, 0.0, 1.0);
        worst = std::max(worst, std::abs(average_fidelity(t) - integral));
    }
    o.require(worst < 1e-9, "max deviation " + fmt("%.3g", worst));
    if (o.pass) o.detail = "max deviation " + fmt("%.2g", worst);
    return o;
}

Outcome dispersive_trend() {
    Outcome o;
    const SystemSpace space{2};
    std::vector<double> err;
    for (double ratio : {10.0, 20.0, 40.0}) {
        GateParams p;
        p.delta_c = ratio;
        const HamiltonianSpec spec{{CouplingTerm{CouplingKind::jc_detuned, Squid::b}}};
        const auto u = propagator({{spec, kPi * ratio}}, p);
        const Complex moving = u(space.index(0, 2, 1), space.index(0, 2, 1));
        const Complex still = u(space.index(0, 0, 1), space.index(0, 0, 1));
        err.push_back(std::abs(oracle::wrap_phase(std::arg(moving / still) - kPi)));
    }
    o.require(err[0] > err[1] && err[1] > err[2], "phase error not monotone");
    o.require(err[2] < 0.01, "phase error at 40 still " + fmt("%.3g", err[2]));
    if (o.pass) {
        o.detail = "phase errors " + fmt("%.3g", err[0]) + ", " + fmt("%.3g", err[1]) + ", " + fmt("%.3g", err[2]);
    }
    return o;
}

Outcome full_model_trends() {
    Outcome o;
    const auto with_omega = [](double w) {
        GateParams p;
        p.omega_13 = p.omega_02 = p.omega_12 = w;
        return p;
    };
    const double m10 = full_model_average_fidelity(with_omega(10.0), 200, 0).mean;
    const double m50 = full_model_average_fidelity(with_omega(50.0), 200, 0).mean;
    GateParams lo;
    lo.omega_02 = lo.omega_12 = 0.3;
    GateParams hi;
    hi.omega_02 = hi.omega_12 = 0.6;
    const double l = full_model_average_fidelity(lo, 200, 0).mean;
    const double h = full_model_average_fidelity(hi, 200, 0).mean;
    o.require(m50 > m10, "no gain from stronger pulses");
    o.require(h > l, "no gain from larger omega_12");
    if (o.pass) {
        o.detail = "omega 10->50: " + fmt("%.4f", m10) + " -> " + fmt("%.4f", m50) + ", omega_12 0.3->0.6: " +
                   fmt("%.4f", l) + " -> " + fmt("%.4f", h);
    }
    return o;
}

Outcome device() {
    Outcome o;
    const SquidParams harmonic{100e-15, 100e-12, 0.0, 0.5 * kFluxQuantum};
    const double w = 1.0 / std::sqrt(harmonic.inductance * harmonic.capacitance);
    const LevelStructure ls = eigenlevels(harmonic);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(ls.transition(i, i + 1) - w) / w);
    o.require(worst < 1e-3, "spacing error " + fmt("%.3g", worst));
    double change = ls.max_relative_change;
    for (const SquidParams& p : {SquidParams{100e-15, 300e-12, 1.3165e-6, 0.499 * kFluxQuantum},
                                 SquidParams{60e-15, 300e-12, 1.3165e-6, 0.499 * kFluxQuantum}}) {
        change = std::max(change, eigenlevels(p).max_relative_change);
    }
    o.require(change < 1e-3, "doubling change " + fmt("%.3g", change));
    if (o.pass) o.detail = "spacing error " + fmt("%.2g", worst) + ", doubling change " + fmt("%.2g", change);
    return o;
}

Outcome round_trip() {
    Outcome o;
    const std::string text = ps::load_file(std::string(CPGATE_DATA_DIR) + "/cpgate.pseq");
    const GateParams p;
    const Schedule compiled = ps::compile(ps::parse(text), p);
    const Schedule built = build_schedule(p);
    bool durations = compiled.segments.size() == built.segments.size();
    for (std::size_t k = 0; durations && k < built.segments.size(); ++k) {
        durations = std::abs(compiled.segments[k].duration - built.segments[k].duration) <= 1e-12;
    }
    o.require(durations && ps::approx_equal(compiled, built, 1e-12), "shipped file differs from builder");
    std::mt19937_64 rng(31);
    int failures = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const Schedule s = testing_support::random_schedule(rng);
        if (!ps::approx_equal(s, ps::compile(ps::parse(ps::serialize(s)), p), 1e-12)) ++failures;
    }
    o.require(failures == 0, std::to_string(failures) + " of 50 random schedules changed");
    if (o.pass) o.detail = "shipped file + 50 random schedules";
    return o;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"truth table", 1.0, truth_table},
        {"gate time", 0.0, gate_time_check},
        {"occupation probability", 0.0, occupation},
        {"perfect-limit fidelity", 0.0, perfect_limit},
        {"average fidelity regression and sweep", 0.0, fig_regression},
        {"closed forms vs numeric propagation", 10.0, closed_forms},
        {"analytic vs simulated fidelity", 0.0, analytic_vs_simulated},
        {"quadrature identity", 0.0, quadrature},
        {"dispersive-limit trend", 0.0, dispersive_trend},
        {"full-model improvement trends", 120.0, full_model_trends},
        {"device levels", 5.0, device},
        {"pulse-sequence round trip", 0.0, round_trip},
    };

    int failed = 0;
    int index = 0;
    for (const Criterion& c : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome result;
        try {
            result = c.check();
        } catch (const std::exception& e) {
            result = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0 && elapsed > c.time_limit_s) {
            result.pass = false;
            result.detail += fmt("; exceeded %.0f s limit", c.time_limit_s);
        }
        if (!result.pass) ++failed;
        std::printf("%s %2d %s: %s (%.2f s)\n", result.pass ? "PASS" : "FAIL", index, c.name, result.detail.c_str(),
                    elapsed);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
