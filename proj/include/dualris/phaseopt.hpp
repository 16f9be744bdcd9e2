// SPDX-License-Identifier: Apache-2.0
//
// dualris: joint beamforming and dual-RIS phase optimization
// Copyright (C) 2026 The dualris authors
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

#ifndef DUALRIS_PHASEOPT_HPP
#define DUALRIS_PHASEOPT_HPP

#include <vector>

#include "dualris/beamformer.hpp"

// Phase-shift subproblem for fixed beamformers and WMMSE auxiliaries.
//
// Both surfaces are handled as one stacked vector phi = [phi1; phi2] of length
// 2N. The weighted-MSE terms that depend on phi are
//
//     f(phi) = phi^H Psi phi - 2 Re[phi^H conj(c)]
//
// with Psi = sum_k Psi_k Hermitian PSD (2N x 2N) and c = sum_k c_k. The
// diagonal N x N blocks of Psi_k are A_sk (.) B_s^T with A_sk = q_k |u_k|^2
// g_sk^H g_sk and B_s = H_s V_s V_s^H H_s^H. Under Coupling::joint the
// off-diagonal block A_12k (.) B_21^T carries the cross-surface interference
// terms; under Coupling::per_surface it is zero.
//
// Each MM step majorizes phi^H Psi phi by its tangent on the unit-modulus set,
// linearizes the most violated per-user QoS constraint at the current point,
// and solves the resulting linear program over the torus in closed form with a
// scalar multiplier found by bisection.

namespace dualris
{

/// Stacks both surfaces into one 2N vector.
CVector stack_phases(const PhasePair &ph);
PhasePair unstack_phases(const CVector &stacked);

struct PhaseQuadratics
{
    Coupling coupling = Coupling::joint;
    int num_elements = 0;
    std::vector<CMatrix> user_quad; // Psi_k, 2N x 2N
    std::vector<CVector> user_lin;  // c_k, 2N
    CMatrix quad;                   // Psi = sum_k Psi_k
    CVector lin;                    // c = sum_k c_k
    /// Optional 2N x K^2 factor. Columns kK..kK+K-1 give Psi_k = F_k F_k^H
    /// (per-surface coupling keeps only the diagonal blocks of that product).
    /// Used to evaluate forms cheaply; clear it when editing quad or user_quad.
    CMatrix factor;

    /// N x N block (s, t) of the aggregate quadratic.
    CMatrix block(int s, int t) const;
    /// N x N block (s, t) of user k's quadratic.
    CMatrix user_block(int k, int s, int t) const;
    CVector surface_lin(int s) const;
    CVector user_surface_lin(int k, int s) const;

    /// Objective f(phi).
    double objective(const CVector &phi) const;
    /// QoS left-hand side of user k: 2 Re[phi^H conj(c_k)] - phi^H Psi_k phi.
    double constraint_lhs(int k, const CVector &phi) const;
};

PhaseQuadratics build_quadratics(const ChannelSet &ch, const BeamPair &bp, const WmmseState &state,
                                 Coupling coupling = Coupling::joint);

/// Linearized QoS constraint 2 Re[phi^H d] >= r_hat for one user.
struct ScaConstraint
{
    int user = 0;
    CVector direction; // d = conj(c_k) - Psi_k phi_n
    double r_hat = 0.0; // R - phi_n^H Psi_k phi_n
};

ScaConstraint sca_threshold(const PhaseQuadratics &pq, const CVector &phi_n, int user, double threshold);

/// Constraint of the user whose exact QoS margin at phi_n is the most negative
/// (or least positive).
ScaConstraint select_constraint(const PhaseQuadratics &pq, const CVector &phi_n, double threshold);

/// Spectral bound per surface. Under Coupling::joint both entries hold the
/// largest eigenvalue of the full Psi; otherwise each holds that of its block.
struct MmBounds
{
    double lambda_max[kSurfaces] = {0.0, 0.0};
};

MmBounds majorization_bounds(const PhaseQuadratics &pq);

struct MmLinearization
{
    CVector t; // conj(c) + (Lambda - Psi) phi_n, stacked
    MmBounds bounds;
    double constant = 0.0; // phi_n^H (Lambda - Psi) phi_n
};

MmLinearization mm_linearize(const PhaseQuadratics &pq, const MmBounds &bounds, const CVector &phi_n);
MmLinearization mm_linearize(const PhaseQuadratics &pq, const CVector &phi_n);

/// Majorizer g(phi | phi_n) of f, including all constant terms.
double surrogate_value(const PhaseQuadratics &pq, const MmLinearization &lin, const CVector &phi);

/// Elementwise exp(j arg(t_n + x d_n)); a zero argument maps to 1.
CVector phase_closed_form(const CVector &t, const CVector &d, double x);

struct MultiplierResult
{
    double x = 0.0;
    CVector phi;
    double y = 0.0; // 2 Re[phi^H d]
    int iterations = 0;
};

inline constexpr int kMultiplierDoublings = 60;
inline constexpr int kMultiplierMaxIterations = 200;

/// Smallest multiplier x >= 0 (to relative bracket width eps) whose
/// closed-form phases satisfy 2 Re[phi(x)^H d] >= r_hat. Throws
/// Error(infeasible) when no bracket is found within the doubling cap.
MultiplierResult multiplier_bisection(const CVector &t, const CVector &d, double r_hat, double eps);

struct PhaseOptions
{
    int max_iterations = 100;
    double tolerance = 1e-6;      // change of f relative to the weighted sum-MSE
    double bisection_eps = 1e-12; // relative bracket width for the multiplier
    Coupling coupling = Coupling::joint;
    // Extrapolate the MM point from the last two iterates; a step that would
    // raise f is discarded and replaced by the plain step.
    bool accelerate = true;
    // Rounds of MM descent. Between rounds the decoders and weights are
    // recomputed for the current phases with the beamformers held fixed.
    int receiver_rounds = 20;
};

struct PhaseStageResult
{
    PhasePair phases;
    std::vector<double> objective;  // f of the round's quadratics at each accepted iterate
    std::vector<double> multiplier; // x per iteration
    std::vector<int> active_user;   // linearized constraint per iteration
    std::vector<double> min_margin; // min_k (lhs_k - R) at each accepted iterate
    std::vector<int> round_start;   // index into objective where each round begins
    int rounds = 0;
    int iterations = 0;             // MM iterations over all rounds
    bool cap_hit = false;           // some round stopped at max_iterations
    bool infeasible = false; // some linearized QoS constraint could not be met
};

/// Phase update with the beamformers fixed. Each round runs MM/SCA steps on
/// the quadratics built from the current decoders and weights until f settles,
/// then refreshes the decoders and weights at the new phases. A linearized QoS
/// constraint that cannot be met ends the stage at the best feasible iterate
/// (or takes the unconstrained step if none exists yet) and sets `infeasible`.
PhaseStageResult phase_stage(const ChannelSet &ch, const BeamPair &bp, const WmmseState &state,
                             const PhasePair &init, const SystemConfig &cfg, const PhaseOptions &opt = {});

} // namespace dualris

#endif
