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

#include "starbeam/solvers.hpp"

#include <cmath>

namespace starbeam {

namespace {

void check_hermitian_psd(const CMat &a, const char *name)
{
    if (a.rows() != a.cols())
        throw SolverError(std::string(name) + " must be square");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw SolverError(std::string(name) + " is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat> eig(a, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10 * scale)
        throw SolverError(std::string(name) + " is not positive semidefinite");
}

double constraint_power(const CMat &c, const CVec &d)
{
    return (d.adjoint() * c * d)(0).real();
}

} // namespace

QcqpResult solve_qcqp(const QcqpProblem &p, const QcqpKnobs &knobs)
{
    const Eigen::Index dim = p.quadratic.rows();
    if (p.linear.size() != dim || p.constraint.rows() != dim || p.constraint.cols() != dim)
        throw SolverError("QCQP dimension mismatch");
    if (p.p_max < 0.0)
        throw SolverError("QCQP power bound must be >= 0");
    check_hermitian_psd(p.quadratic, "E");
    check_hermitian_psd(p.constraint, "C");

    QcqpResult res;
    if (p.linear.norm() == 0.0) {
        res.d = CVec::Zero(dim);
        return res;
    }

    const double mu = 1e-12 * p.quadratic.trace().real() / double(dim);
    const CMat identity = CMat::Identity(dim, dim);

    auto solve_for = [&](double lambda) -> CVec {
        const CMat lhs = p.quadratic + lambda * p.constraint + mu * identity;
        return lhs.ldlt().solve(p.linear);
    };

    // Interior try at lambda = 0. Skip when E (+ ridge) is effectively
    // singular: the unconstrained optimum is unbounded along null(E) and the
    // boundary search below handles it.
    const bool interior_possible = p.quadratic.trace().real() > 0.0;
    if (interior_possible) {
        const CVec d0 = solve_for(0.0);
        const double residual = (p.quadratic * d0 + mu * d0 - p.linear).norm();
        const double pow0 = constraint_power(p.constraint, d0);
        if (residual <= 1e-8 * p.linear.norm() && pow0 <= p.p_max) {
            res.d = d0;
            res.lambda = 0.0;
            res.power = pow0;
            res.kkt_residual = (p.quadratic * d0 - p.linear).norm() / p.linear.norm();
            return res;
        }
    }

    // Bracket: power(lambda) is nonincreasing; double until it drops under
    // the budget.
    double lo = 0.0;
    double hi = std::max(p.quadratic.trace().real() / std::max(p.constraint.trace().real(), 1e-300),
                         1e-12);
    int doublings = 0;
    while (true) {
        const CVec d = solve_for(hi);
        if (constraint_power(p.constraint, d) <= p.p_max)
            break;
        lo = hi;
        hi *= 2.0;
        if (++doublings > knobs.max_doublings)
            throw SolverError("QCQP bracket search failed after " +
                              std::to_string(knobs.max_doublings) + " doublings");
    }

    CVec d = solve_for(hi);
    double lambda = hi;
    double power = constraint_power(p.constraint, d);
    for (int it = 0; it < knobs.max_bisections; ++it) {
        if (std::abs(power - p.p_max) <= knobs.power_tol * p.p_max)
            break;
        const double mid = 0.5 * (lo + hi);
        const CVec dm = solve_for(mid);
        const double pm = constraint_power(p.constraint, dm);
        if (pm > p.p_max)
            lo = mid;
        else {
            hi = mid;
            d = dm;
            lambda = mid;
            power = pm;
        }
        res.bisect_iters = it + 1;
    }

    res.d = d;
    res.lambda = lambda;
    res.power = power;
    res.kkt_residual =
        (p.quadratic * d + lambda * (p.constraint * d) - p.linear).norm() / p.linear.norm();
    if (res.kkt_residual > 1e-6)
        throw SolverError("QCQP stationarity residual " + std::to_string(res.kkt_residual) +
                          " above 1e-6");
    if (std::abs(power - p.p_max) > knobs.power_tol * p.p_max && lambda > 0.0)
        throw SolverError("QCQP bisection did not reach the power tolerance");
    return res;
}

void project_amplitude_pair(double &beta_r, double &beta_t)
{
    beta_r = std::max(beta_r, 0.0);
    beta_t = std::max(beta_t, 0.0);
    const double norm2 = beta_r * beta_r + beta_t * beta_t;
    if (norm2 > 1.0) {
        const double inv = 1.0 / std::sqrt(norm2);
        beta_r *= inv;
        beta_t *= inv;
    }
}

AdmmResult solve_amplitudes_admm(const AmplitudeProblem &p, const AdmmKnobs &knobs,
                                 const RVec *warm_beta_r, const RVec *warm_beta_t)
{
    const Eigen::Index n = p.delta_r.rows();
    if (p.delta_t.rows() != n || p.upsilon_r.size() != n || p.upsilon_t.size() != n)
        throw SolverError("amplitude problem dimension mismatch");

    const double rho = knobs.penalty;
    // x-updates solve (2 Delta_i + rho I) x = 2 upsilon_i + rho (z - u);
    // the factorizations are reused across iterations.
    const RMat identity = RMat::Identity(n, n);
    const Eigen::LLT<RMat> llt_r((2.0 * p.delta_r + rho * identity).eval());
    const Eigen::LLT<RMat> llt_t((2.0 * p.delta_t + rho * identity).eval());
    if (llt_r.info() != Eigen::Success || llt_t.info() != Eigen::Success)
        throw SolverError("amplitude subproblem factorization failed (Delta not PSD?)");

    RVec z_r = warm_beta_r ? *warm_beta_r : RVec::Constant(n, 1.0 / std::sqrt(2.0));
    RVec z_t = warm_beta_t ? *warm_beta_t : RVec::Constant(n, 1.0 / std::sqrt(2.0));
    RVec u_r = RVec::Zero(n), u_t = RVec::Zero(n);

    AdmmResult res;
    for (int it = 0; it < knobs.max_iters; ++it) {
        const RVec x_r = llt_r.solve(2.0 * p.upsilon_r + rho * (z_r - u_r));
        const RVec x_t = llt_t.solve(2.0 * p.upsilon_t + rho * (z_t - u_t));

        const RVec z_r_prev = z_r, z_t_prev = z_t;
        for (Eigen::Index i = 0; i < n; ++i) {
            double br = x_r[i] + u_r[i];
            double bt = x_t[i] + u_t[i];
            project_amplitude_pair(br, bt);
            z_r[i] = br;
            z_t[i] = bt;
        }
        u_r += x_r - z_r;
        u_t += x_t - z_t;

        res.iters = it + 1;
        res.primal_residual =
            std::sqrt((x_r - z_r).squaredNorm() + (x_t - z_t).squaredNorm());
        res.dual_residual =
            rho * std::sqrt((z_r - z_r_prev).squaredNorm() + (z_t - z_t_prev).squaredNorm());
        if (res.primal_residual < knobs.tol && res.dual_residual < knobs.tol) {
            res.converged = true;
            break;
        }
    }
    res.beta_r = z_r;
    res.beta_t = z_t;
    if (!res.converged)
        res.warning = res.primal_residual > knobs.warn_tol || res.dual_residual > knobs.warn_tol;
    return res;
}

CVec projected_gradient_qcqp(const QcqpProblem &p, int steps)
{
    const Eigen::Index dim = p.quadratic.rows();
    // Whiten the constraint: y = L^H d with C = L L^H, feasible set
    // ||y||^2 <= p_max. A small Tikhonov term keeps L invertible when C is
    // only semidefinite.
    const double c_scale = std::max(p.constraint.cwiseAbs().maxCoeff(), 1e-300);
    const CMat c_reg = p.constraint + 1e-14 * c_scale * CMat::Identity(dim, dim);
    const Eigen::LLT<CMat> llt(c_reg);
    if (llt.info() != Eigen::Success)
        throw SolverError("constraint factorization failed in the PG oracle");
    const CMat l = llt.matrixL();
    const CMat linv = l.triangularView<Eigen::Lower>().solve(CMat::Identity(dim, dim));
    // min_y y^H B y - 2 Re(w^H y), B = L^-1 E L^-H, w = L^-1 v.
    const CMat b = linv * p.quadratic * linv.adjoint();
    const CVec w = linv * p.linear;

    const double radius = std::sqrt(p.p_max);
    double lipschitz = 2.0 * b.cwiseAbs().rowwise().sum().maxCoeff(); // Gershgorin bound
    lipschitz = std::max(lipschitz, 1e-12);
    const double step0 = 1.0 / lipschitz;

    CVec y = CVec::Zero(dim);
    for (int t = 0; t < steps; ++t) {
        const CVec grad = 2.0 * (b * y - w);
        const double step = step0 / (1.0 + 1e-4 * double(t));
        y -= step * grad;
        const double norm = y.norm();
        if (norm > radius)
            y *= radius / norm;
    }
    return linv.adjoint() * y; // d = L^-H y
}

std::pair<RVec, RVec> projected_gradient_amplitudes(const AmplitudeProblem &p, int steps)
{
    const Eigen::Index n = p.delta_r.rows();
    double lipschitz = 2.0 * std::max(p.delta_r.cwiseAbs().rowwise().sum().maxCoeff(),
                                      p.delta_t.cwiseAbs().rowwise().sum().maxCoeff());
    lipschitz = std::max(lipschitz, 1e-12);
    const double step0 = 1.0 / lipschitz;

    RVec beta_r = RVec::Constant(n, 0.5), beta_t = RVec::Constant(n, 0.5);
    for (int t = 0; t < steps; ++t) {
        const RVec grad_r = 2.0 * (p.delta_r * beta_r - p.upsilon_r);
        const RVec grad_t = 2.0 * (p.delta_t * beta_t - p.upsilon_t);
        const double step = step0 / (1.0 + 1e-4 * double(t));
        beta_r -= step * grad_r;
        beta_t -= step * grad_t;
        for (Eigen::Index i = 0; i < n; ++i)
            project_amplitude_pair(beta_r[i], beta_t[i]);
    }
    return {beta_r, beta_t};
}

} // namespace starbeam
