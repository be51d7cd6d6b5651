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

#pragma once

#include <vector>

#include "starbeam/common.hpp"

namespace starbeam {

/// min_d d^H E d - 2 Re(v^H d)  s.t.  d^H C d <= p_max,
/// with E, C Hermitian positive semidefinite.
struct QcqpProblem {
    CMat quadratic;  // E
    CVec linear;     // v
    CMat constraint; // C
    double p_max = 1.0;
};

struct QcqpResult {
    CVec d;
    double lambda = 0.0;    // multiplier of the power constraint
    double power = 0.0;     // d^H C d at the solution
    int bisect_iters = 0;
    double kkt_residual = 0.0; // ||(E + lambda C) d - v|| / ||v||
};

struct QcqpKnobs {
    double power_tol = 1e-8;  // relative |power - p_max| at the boundary exit
    int max_doublings = 200;  // bracket search cap
    int max_bisections = 200;
};

/// Lagrange-multiplier bisection: d(lambda) = (E + lambda C + mu I)^-1 v with
/// a scale-free ridge mu = 1e-12 tr(E)/dim. Returns the interior solution
/// d(0) when feasible, otherwise bisects lambda > 0 until the power matches
/// p_max. KKT residual and complementary slackness are certified on exit.
QcqpResult solve_qcqp(const QcqpProblem &p, const QcqpKnobs &knobs = {});

/// min_{b_R, b_T} sum_i (b_i^T Delta_i b_i - 2 upsilon_i^T b_i)
/// s.t. b_R[n]^2 + b_T[n]^2 <= 1, 0 <= b <= 1 per element,
/// with Delta_i real symmetric positive semidefinite.
struct AmplitudeProblem {
    RMat delta_r, delta_t;
    RVec upsilon_r, upsilon_t;
};

struct AdmmKnobs {
    double penalty = 1.0;
    double tol = 1e-6; // primal and dual residual threshold
    int max_iters = 500;
    double warn_tol = 1e-3; // residuals above this at the cap raise a warning
};

struct AdmmResult {
    RVec beta_r, beta_t; // projected iterate, feasible by construction
    int iters = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    bool converged = false;
    bool warning = false; // residuals above warn_tol at the iteration cap
};

/// ADMM with the splitting x = (b_R, b_T), z = copy constrained to the
/// per-element quarter disk. The projection clamps negatives to zero and
/// rescales radially onto the unit circle when needed, which is the exact
/// Euclidean projection onto the intersection.
AdmmResult solve_amplitudes_admm(const AmplitudeProblem &p, const AdmmKnobs &knobs = {},
                                 const RVec *warm_beta_r = nullptr,
                                 const RVec *warm_beta_t = nullptr);

/// Project one (b_R, b_T) pair onto the feasible quarter disk.
void project_amplitude_pair(double &beta_r, double &beta_t);

/// Test oracle: projected gradient descent with diminishing steps on the
/// QCQP, run in the whitened variable y = chol(C)^H d where the feasible set
/// is the ball ||y||^2 <= p_max. Independent of the bisection path.
CVec projected_gradient_qcqp(const QcqpProblem &p, int steps);

/// Test oracle: projected gradient descent on the amplitude problem.
std::pair<RVec, RVec> projected_gradient_amplitudes(const AmplitudeProblem &p, int steps);

} // namespace starbeam
