// SPDX-License-Identifier: Apache-2.0
//
// starbeam - wideband beamforming simulator for STAR-RIS assisted THz links
// Copyright (C) 2026 starbeam developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <doctest.h>

#include <cmath>

#include "starbeam/solvers.hpp"

using namespace starbeam;

namespace {

CMat random_psd(Rng &rng, int n, double min_eig, double max_eig)
{
    CMat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<CMat> qr(a);
    const CMat q = qr.householderQ();
    RVec eigs(n);
    for (int i = 0; i < n; ++i)
        eigs[i] = rng.uniform(min_eig, max_eig);
    return q * eigs.asDiagonal() * q.adjoint();
}

CVec random_cvec(Rng &rng, int n, double scale)
{
    CVec v(n);
    for (int i = 0; i < n; ++i)
        v[i] = scale * rng.complex_normal();
    return v;
}

double qcqp_objective(const QcqpProblem &p, const CVec &d)
{
    return (d.adjoint() * p.quadratic * d)(0).real() - 2.0 * (p.linear.adjoint() * d)(0).real();
}

double amplitude_objective(const AmplitudeProblem &p, const RVec &br, const RVec &bt)
{
    return br.dot(p.delta_r * br) - 2.0 * p.upsilon_r.dot(br) + bt.dot(p.delta_t * bt) -
           2.0 * p.upsilon_t.dot(bt);
}

} // namespace

TEST_CASE("qcqp interior solution")
{
    // E = I, C = I, ||v||^2 <= p_max: unconstrained optimum d = v is feasible.
    Rng rng(3);
    QcqpProblem p;
    p.quadratic = CMat::Identity(6, 6);
    p.constraint = CMat::Identity(6, 6);
    p.linear = random_cvec(rng, 6, 0.2);
    p.p_max = 4.0;
    const QcqpResult res = solve_qcqp(p);
    CHECK(res.lambda == 0.0);
    CHECK((res.d - p.linear).norm() < 1e-8 * p.linear.norm());
}

TEST_CASE("qcqp boundary solution with zero curvature")
{
    // E = 0, C = I: maximize 2 Re(v^H d) on the ball -> d = sqrt(P) v/||v||.
    Rng rng(5);
    QcqpProblem p;
    p.quadratic = CMat::Zero(5, 5);
    p.constraint = CMat::Identity(5, 5);
    p.linear = random_cvec(rng, 5, 1.0);
    p.p_max = 2.5;
    const QcqpResult res = solve_qcqp(p);
    const CVec expected = std::sqrt(p.p_max) * p.linear / p.linear.norm();
    CHECK((res.d - expected).norm() < 1e-6 * expected.norm());
    CHECK(res.power == doctest::Approx(p.p_max).epsilon(1e-7));
}

TEST_CASE("qcqp matches the projected-gradient oracle on random instances")
{
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        const int n = 8;
        QcqpProblem p;
        p.quadratic = random_psd(rng, n, 0.1, 3.0);
        p.constraint = random_psd(rng, n, 0.5, 2.0);
        p.linear = random_cvec(rng, n, 1.0);
        p.p_max = rng.uniform(0.5, 3.0);
        const QcqpResult res = solve_qcqp(p);
        const CVec oracle = projected_gradient_qcqp(p, 100000);
        const double gap = qcqp_objective(p, res.d) - qcqp_objective(p, oracle);
        // The solver must be at least as good as the oracle up to 1e-6.
        CHECK(gap <= 1e-6 * std::max(1.0, std::abs(qcqp_objective(p, oracle))));
        // Feasibility and KKT certificates.
        CHECK(res.power <= p.p_max * (1.0 + 1e-8));
        CHECK(res.kkt_residual <= 1e-6);
        CHECK(std::abs(res.lambda * (res.power - p.p_max)) <= 1e-6 * p.p_max * std::max(res.lambda, 1.0));
    }
}

TEST_CASE("qcqp rejects non-PSD input")
{
    QcqpProblem p;
    p.quadratic = -CMat::Identity(3, 3);
    p.constraint = CMat::Identity(3, 3);
    p.linear = CVec::Ones(3);
    p.p_max = 1.0;
    CHECK_THROWS_AS(solve_qcqp(p), SolverError);

    QcqpProblem q;
    q.quadratic = CMat::Identity(3, 3);
    q.constraint = CMat::Identity(3, 3);
    q.constraint(0, 1) = cxd(0.5, 0.0); // not Hermitian
    q.linear = CVec::Ones(3);
    q.p_max = 1.0;
    CHECK_THROWS_AS(solve_qcqp(q), SolverError);
}

TEST_CASE("qcqp reports bracketing failure")
{
    // p_max = 0 with a nonzero linear term cannot be met on the boundary:
    // the power never reaches zero exactly, so the doubling search runs out.
    QcqpProblem p;
    p.quadratic = CMat::Identity(3, 3) * 1e-6;
    p.constraint = CMat::Identity(3, 3);
    p.linear = CVec::Ones(3);
    p.p_max = 0.0;
    CHECK_THROWS_AS(solve_qcqp(p), SolverError);
}

TEST_CASE("qcqp zero linear term returns zero")
{
    QcqpProblem p;
    p.quadratic = CMat::Identity(4, 4);
    p.constraint = CMat::Identity(4, 4);
    p.linear = CVec::Zero(4);
    p.p_max = 1.0;
    const QcqpResult res = solve_qcqp(p);
    CHECK(res.d.norm() == 0.0);
}

TEST_CASE("amplitude projection")
{
    double r = -0.3, t = 0.4;
    project_amplitude_pair(r, t);
    CHECK(r == 0.0);
    CHECK(t == doctest::Approx(0.4));
    r = 0.9;
    t = 0.9;
    project_amplitude_pair(r, t);
    CHECK(r * r + t * t == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r == doctest::Approx(t));
    r = 2.0;
    t = 0.0;
    project_amplitude_pair(r, t);
    CHECK(r == doctest::Approx(1.0));
}

TEST_CASE("admm: unconstrained minimum at the origin")
{
    const int n = 6;
    AmplitudeProblem p;
    p.delta_r = RMat::Identity(n, n);
    p.delta_t = RMat::Identity(n, n);
    p.upsilon_r = RVec::Zero(n);
    p.upsilon_t = RVec::Zero(n);
    const AdmmResult res = solve_amplitudes_admm(p);
    CHECK(res.converged);
    CHECK(res.beta_r.cwiseAbs().maxCoeff() < 1e-6);
    CHECK(res.beta_t.cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("admm: separable clipped optimum")
{
    // Delta = I, upsilon_r = 2, upsilon_t = 0: per element min of b^2 - 4b
    // over the quarter disk is b_R = 1, b_T = 0.
    const int n = 5;
    AmplitudeProblem p;
    p.delta_r = RMat::Identity(n, n);
    p.delta_t = RMat::Identity(n, n);
    p.upsilon_r = RVec::Constant(n, 2.0);
    p.upsilon_t = RVec::Zero(n);
    const AdmmResult res = solve_amplitudes_admm(p);
    for (int i = 0; i < n; ++i) {
        CHECK(res.beta_r[i] == doctest::Approx(1.0).epsilon(1e-5));
        CHECK(std::abs(res.beta_t[i]) < 1e-5);
    }
}

TEST_CASE("admm matches the projected-gradient oracle on random instances")
{
    Rng rng(13);
    for (int t = 0; t < 20; ++t) {
        const int n = 16;
        AmplitudeProblem p;
        p.delta_r = random_psd(rng, n, 0.05, 2.0).real();
        p.delta_t = random_psd(rng, n, 0.05, 2.0).real();
        p.upsilon_r = random_cvec(rng, n, 1.0).real();
        p.upsilon_t = random_cvec(rng, n, 1.0).real();
        const AdmmResult res = solve_amplitudes_admm(p);
        const auto [obr, obt] = projected_gradient_amplitudes(p, 100000);
        const double gap =
            amplitude_objective(p, res.beta_r, res.beta_t) - amplitude_objective(p, obr, obt);
        CHECK(gap <= 1e-4 * std::max(1.0, std::abs(amplitude_objective(p, obr, obt))));
        // Feasibility is exact on the returned iterate.
        for (int i = 0; i < n; ++i) {
            CHECK(res.beta_r[i] >= 0.0);
            CHECK(res.beta_t[i] >= 0.0);
            CHECK(res.beta_r[i] * res.beta_r[i] + res.beta_t[i] * res.beta_t[i] <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("admm is deterministic and reports a warning at the cap")
{
    Rng rng(17);
    AmplitudeProblem p;
    p.delta_r = random_psd(rng, 8, 0.1, 1.0).real();
    p.delta_t = random_psd(rng, 8, 0.1, 1.0).real();
    p.upsilon_r = random_cvec(rng, 8, 1.0).real();
    p.upsilon_t = random_cvec(rng, 8, 1.0).real();
    const AdmmResult a = solve_amplitudes_admm(p);
    const AdmmResult b = solve_amplitudes_admm(p);
    CHECK((a.beta_r - b.beta_r).norm() == 0.0);
    CHECK((a.beta_t - b.beta_t).norm() == 0.0);

    AdmmKnobs strict;
    strict.tol = 0.0; // unreachable
    strict.max_iters = 5;
    strict.warn_tol = 1e-12;
    const AdmmResult warned = solve_amplitudes_admm(p, strict);
    CHECK(!warned.converged);
    CHECK(warned.warning);
    CHECK(warned.beta_r.allFinite());
}

TEST_CASE("projected gradient descends monotonically on a convex instance")
{
    Rng rng(23);
    QcqpProblem p;
    p.quadratic = random_psd(rng, 6, 0.2, 2.0);
    p.constraint = CMat::Identity(6, 6);
    p.linear = random_cvec(rng, 6, 1.0);
    p.p_max = 1.0;
    double prev = 1e300;
    for (int steps : {10, 100, 1000, 10000}) {
        const double obj = qcqp_objective(p, projected_gradient_qcqp(p, steps));
        CHECK(obj <= prev + 1e-12);
        prev = obj;
    }
    // And it reproduces the analytic boundary solution.
    QcqpProblem b;
    b.quadratic = CMat::Zero(4, 4);
    b.constraint = CMat::Identity(4, 4);
    b.linear = random_cvec(rng, 4, 1.0);
    b.p_max = 3.0;
    const CVec oracle = projected_gradient_qcqp(b, 50000);
    const CVec expected = std::sqrt(b.p_max) * b.linear / b.linear.norm();
    CHECK((oracle - expected).norm() < 1e-5 * expected.norm());
}

TEST_CASE("projected gradient on amplitudes finds the origin when optimal")
{
    AmplitudeProblem p;
    p.delta_r = RMat::Identity(4, 4);
    p.delta_t = RMat::Identity(4, 4);
    p.upsilon_r = RVec::Zero(4);
    p.upsilon_t = RVec::Zero(4);
    const auto [br, bt] = projected_gradient_amplitudes(p, 20000);
    CHECK(br.cwiseAbs().maxCoeff() < 1e-6);
    CHECK(bt.cwiseAbs().maxCoeff() < 1e-6);
}
