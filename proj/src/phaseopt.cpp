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

#include "dualris/phaseopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace dualris
{

namespace
{

double real_quadratic(const CMatrix &quad, const CVector &phi)
{
    return phi.dot(quad * phi).real();
}

// 2 Re[phi^H conj(c)] = 2 Re[c^T phi]
double real_linear(const CVector &lin, const CVector &phi)
{
    return 2.0 * (lin.transpose() * phi).value().real();
}

// 2 Re[phi^H d]
double real_inner(const CVector &phi, const CVector &d)
{
    return 2.0 * phi.dot(d).real();
}

// Use factor columns [first, first + count) in place of `full` when that is cheaper.
bool use_factor(const PhaseQuadratics &pq, Eigen::Index count, const CVector &phi)
{
    const Eigen::Index n = 2 * pq.num_elements;
    return pq.factor.rows() == n && phi.size() == n && count > 0 && count < n;
}

// phi^H full phi, where full = F F^H for the selected factor columns F.
double quadratic_form(const PhaseQuadratics &pq, const CMatrix &full, Eigen::Index first, Eigen::Index count,
                      const CVector &phi)
{
    if (!use_factor(pq, count, phi))
        return real_quadratic(full, phi);
    const Eigen::Index N = pq.num_elements;
    const auto f = pq.factor.middleCols(first, count);
    if (pq.coupling == Coupling::joint)
        return (f.adjoint() * phi).squaredNorm();
    return (f.topRows(N).adjoint() * phi.head(N)).squaredNorm() +
           (f.bottomRows(N).adjoint() * phi.tail(N)).squaredNorm();
}

// Psi phi
CVector apply_quad(const PhaseQuadratics &pq, const CVector &phi)
{
    const Eigen::Index count = pq.factor.cols();
    if (!use_factor(pq, count, phi))
        return pq.quad * phi;
    const Eigen::Index N = pq.num_elements;
    if (pq.coupling == Coupling::joint)
        return pq.factor * (pq.factor.adjoint() * phi);
    CVector out(2 * N);
    out.head(N) = pq.factor.topRows(N) * (pq.factor.topRows(N).adjoint() * phi.head(N));
    out.tail(N) = pq.factor.bottomRows(N) * (pq.factor.bottomRows(N).adjoint() * phi.tail(N));
    return out;
}

} // namespace

CVector stack_phases(const PhasePair &ph)
{
    CVector out(ph.shifts[0].size() + ph.shifts[1].size());
    out << ph.shifts[0], ph.shifts[1];
    return out;
}

PhasePair unstack_phases(const CVector &stacked)
{
    if (stacked.size() % 2 != 0)
        throw Error(ErrorKind::dimension, "unstack_phases: odd stacked length");
    const Eigen::Index N = stacked.size() / 2;
    PhasePair ph;
    ph.shifts[0] = stacked.head(N);
    ph.shifts[1] = stacked.tail(N);
    return ph;
}

CMatrix PhaseQuadratics::block(int s, int t) const
{
    return quad.block(s * num_elements, t * num_elements, num_elements, num_elements);
}

CMatrix PhaseQuadratics::user_block(int k, int s, int t) const
{
    return user_quad.at(k).block(s * num_elements, t * num_elements, num_elements, num_elements);
}

CVector PhaseQuadratics::surface_lin(int s) const
{
    return lin.segment(s * num_elements, num_elements);
}

CVector PhaseQuadratics::user_surface_lin(int k, int s) const
{
    return user_lin.at(k).segment(s * num_elements, num_elements);
}

double PhaseQuadratics::objective(const CVector &phi) const
{
    return quadratic_form(*this, quad, 0, factor.cols(), phi) - real_linear(lin, phi);
}

double PhaseQuadratics::constraint_lhs(int k, const CVector &phi) const
{
    const Eigen::Index users = static_cast<Eigen::Index>(user_quad.size());
    return real_linear(user_lin.at(k), phi) - quadratic_form(*this, user_quad.at(k), k * users, users, phi);
}

PhaseQuadratics build_quadratics(const ChannelSet &ch, const BeamPair &bp, const WmmseState &state,
                                 Coupling coupling)
{
    const Eigen::Index N = ch.bs_to_ris[0].rows();
    const Eigen::Index K = ch.ris_to_users[0].rows();
    for (int s = 0; s < kSurfaces; ++s)
    {
        if (ch.bs_to_ris[s].rows() != N || ch.ris_to_users[s].cols() != N || ch.ris_to_users[s].rows() != K)
            throw Error(ErrorKind::dimension, "build_quadratics: inconsistent channel blocks");
        if (bp.beams[s].rows() != ch.bs_to_ris[s].cols() || bp.beams[s].cols() != K)
            throw Error(ErrorKind::dimension, "build_quadratics: beamformer shape does not match channels");
    }
    if (state.decoder.size() != K || state.weight.size() != K)
        throw Error(ErrorKind::dimension, "build_quadratics: WMMSE state does not match the user count");

    // Column j of reflected[s] is H_s v_sj, the field arriving at surface s for user j.
    const CMatrix reflected[kSurfaces] = {ch.bs_to_ris[0] * bp.beams[0], ch.bs_to_ris[1] * bp.beams[1]};

    // beam_corr[s][t] = conj(X_s) X_t^T = B_ts^T
    CMatrix beam_corr[kSurfaces][kSurfaces];
    for (int s = 0; s < kSurfaces; ++s)
        for (int t = 0; t < kSurfaces; ++t)
            beam_corr[s][t] = reflected[s].conjugate() * reflected[t].transpose();

    PhaseQuadratics pq;
    pq.coupling = coupling;
    pq.num_elements = static_cast<int>(N);
    pq.quad = CMatrix::Zero(2 * N, 2 * N);
    pq.lin = CVector::Zero(2 * N);
    pq.factor = CMatrix::Zero(2 * N, K * K);

    for (Eigen::Index k = 0; k < K; ++k)
    {
        const double quad_weight = state.weight(k) * std::norm(state.decoder(k));
        const cdouble lin_weight = state.weight(k) * std::conj(state.decoder(k));

        CMatrix user = CMatrix::Zero(2 * N, 2 * N);
        CVector lin(2 * N);
        for (int s = 0; s < kSurfaces; ++s)
        {
            const CRowVector g_s = ch.ris_to_users[s].row(k);
            for (int t = 0; t < kSurfaces; ++t)
            {
                if (s != t && coupling == Coupling::per_surface)
                    continue;
                const CRowVector g_t = ch.ris_to_users[t].row(k);
                const CMatrix receive = quad_weight * (g_s.adjoint() * g_t);
                user.block(s * N, t * N, N, N) = hadamard(receive, beam_corr[s][t]);
            }
            // Diagonal of H_s v_sk q_k u_k^* g_sk.
            lin.segment(s * N, N) = lin_weight * reflected[s].col(k).cwiseProduct(g_s.transpose());
            for (Eigen::Index j = 0; j < K; ++j)
                pq.factor.col(k * K + j).segment(s * N, N) =
                    std::sqrt(quad_weight) * reflected[s].col(j).cwiseProduct(g_s.transpose()).conjugate();
        }
        user = hermitian_part(user);
        pq.quad += user;
        pq.lin += lin;
        pq.user_quad.push_back(std::move(user));
        pq.user_lin.push_back(std::move(lin));
    }
    return pq;
}

ScaConstraint sca_threshold(const PhaseQuadratics &pq, const CVector &phi_n, int user, double threshold)
{
    if (user < 0 || user >= static_cast<int>(pq.user_quad.size()))
        throw Error(ErrorKind::dimension, "sca_threshold: user index out of range");
    const CMatrix &psi = pq.user_quad[user];
    if (phi_n.size() != psi.rows())
        throw Error(ErrorKind::dimension, "sca_threshold: phase vector has the wrong length");

    const CVector psi_phi = psi * phi_n;
    ScaConstraint out;
    out.user = user;
    out.direction = pq.user_lin[user].conjugate() - psi_phi;
    out.r_hat = threshold - phi_n.dot(psi_phi).real();
    return out;
}

ScaConstraint select_constraint(const PhaseQuadratics &pq, const CVector &phi_n, double threshold)
{
    int worst = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < static_cast<int>(pq.user_quad.size()); ++k)
    {
        const double margin = pq.constraint_lhs(k, phi_n) - threshold;
        if (margin < worst_margin)
        {
            worst_margin = margin;
            worst = k;
        }
    }
    return sca_threshold(pq, phi_n, worst, threshold);
}

MmBounds majorization_bounds(const PhaseQuadratics &pq)
{
    const Eigen::Index N = pq.num_elements;
    const bool factored = pq.factor.rows() == 2 * N && pq.factor.cols() > 0;

    // The nonzero spectrum of F F^H equals that of F^H F; take the smaller one.
    auto top_of = [&](const CMatrix &full, Eigen::Index row, Eigen::Index rows) {
        if (factored && pq.factor.cols() < rows)
        {
            const auto f = pq.factor.middleRows(row, rows);
            return std::max(0.0, max_eigenvalue(f.adjoint() * f));
        }
        return std::max(0.0, max_eigenvalue(full));
    };

    MmBounds b;
    if (pq.coupling == Coupling::joint)
    {
        const double top = top_of(pq.quad, 0, 2 * N);
        b.lambda_max[0] = top;
        b.lambda_max[1] = top;
    }
    else
    {
        for (int s = 0; s < kSurfaces; ++s)
            b.lambda_max[s] = top_of(pq.block(s, s), s * N, N);
    }
    return b;
}

MmLinearization mm_linearize(const PhaseQuadratics &pq, const MmBounds &bounds, const CVector &phi_n)
{
    const Eigen::Index N = pq.num_elements;
    if (phi_n.size() != 2 * N)
        throw Error(ErrorKind::dimension, "mm_linearize: phase vector has the wrong length");

    CVector shifted(2 * N); // Lambda phi_n
    shifted.head(N) = bounds.lambda_max[0] * phi_n.head(N);
    shifted.tail(N) = bounds.lambda_max[1] * phi_n.tail(N);
    const CVector slack = shifted - apply_quad(pq, phi_n); // (Lambda - Psi) phi_n

    MmLinearization out;
    out.bounds = bounds;
    out.t = pq.lin.conjugate() + slack;
    out.constant = phi_n.dot(slack).real();
    return out;
}

MmLinearization mm_linearize(const PhaseQuadratics &pq, const CVector &phi_n)
{
    return mm_linearize(pq, majorization_bounds(pq), phi_n);
}

double surrogate_value(const PhaseQuadratics &pq, const MmLinearization &lin, const CVector &phi)
{
    const Eigen::Index N = pq.num_elements;
    return lin.bounds.lambda_max[0] * phi.head(N).squaredNorm() + lin.bounds.lambda_max[1] * phi.tail(N).squaredNorm() -
           real_inner(phi, lin.t) + lin.constant;
}

CVector phase_closed_form(const CVector &t, const CVector &d, double x)
{
    if (t.size() != d.size())
        throw Error(ErrorKind::dimension, "phase_closed_form: t and d differ in length");
    if (!(x >= 0.0))
        throw Error(ErrorKind::numerical, "phase_closed_form: multiplier must be non-negative", x);
    CVector phi(t.size());
    for (Eigen::Index n = 0; n < t.size(); ++n)
    {
        const cdouble z = t(n) + x * d(n);
        phi(n) = z == cdouble(0.0, 0.0) ? cdouble(1.0, 0.0) : std::polar(1.0, std::arg(z));
    }
    return phi;
}

MultiplierResult multiplier_bisection(const CVector &t, const CVector &d, double r_hat, double eps)
{
    if (!(eps > 0.0))
        throw Error(ErrorKind::config, "multiplier_bisection: eps must be positive");

    auto evaluate = [&](double x) {
        MultiplierResult r;
        r.x = x;
        r.phi = phase_closed_form(t, d, x);
        r.y = real_inner(r.phi, d);
        return r;
    };

    MultiplierResult lo = evaluate(0.0);
    if (lo.y >= r_hat)
        return lo;

    // Grow the upper bracket until the constraint holds.
    MultiplierResult hi = evaluate(1.0);
    int doublings = 0;
    while (hi.y < r_hat)
    {
        if (doublings == kMultiplierDoublings)
            throw Error(ErrorKind::infeasible,
                        "multiplier_bisection: linearized QoS constraint unreachable (best " + std::to_string(hi.y) +
                            " < " + std::to_string(r_hat) + ")",
                        r_hat - hi.y);
        lo = hi;
        hi = evaluate(2.0 * hi.x);
        ++doublings;
    }

    int it = 0;
    while (it < kMultiplierMaxIterations && hi.x - lo.x > eps * std::max(1.0, hi.x))
    {
        const double mid = 0.5 * (lo.x + hi.x);
        if (mid <= lo.x || mid >= hi.x)
            break;
        MultiplierResult m = evaluate(mid);
        ++it;
        if (m.y >= r_hat)
            hi = std::move(m);
        else
            lo = std::move(m);
    }
    hi.iterations = it + doublings;
    return hi;
}

namespace
{

// f plus this offset is the weighted sum-MSE sum_k q_k e_k > 0, the scale
// against which changes of f are judged.
double mse_offset(const WmmseState &state, double noise_power)
{
    double offset = 0.0;
    for (Eigen::Index k = 0; k < state.weight.size(); ++k)
        offset += state.weight(k) * (1.0 + std::norm(state.decoder(k)) * noise_power);
    return offset;
}

// MM/SCA iterations on one set of quadratics, appending to `out`. Returns the
// final phases.
CVector mm_descent(const PhaseQuadratics &pq, CVector phi, double threshold, double offset, const PhaseOptions &opt,
                   PhaseStageResult &out)
{
    const MmBounds bounds = majorization_bounds(pq);

    auto min_margin = [&](const CVector &p) {
        double m = std::numeric_limits<double>::infinity();
        for (int k = 0; k < static_cast<int>(pq.user_quad.size()); ++k)
            m = std::min(m, pq.constraint_lhs(k, p) - threshold);
        return m;
    };

    double f_prev = pq.objective(phi);
    out.objective.push_back(f_prev);
    out.min_margin.push_back(min_margin(phi));

    // Best iterate meeting every exact QoS constraint, for the infeasible exit.
    CVector best_feasible;
    double best_feasible_f = std::numeric_limits<double>::infinity();
    auto consider = [&](const CVector &candidate, double f, double margin) {
        if (margin >= 0.0 && f < best_feasible_f)
        {
            best_feasible = candidate;
            best_feasible_f = f;
        }
    };
    consider(phi, f_prev, out.min_margin.back());

    struct Step
    {
        CVector phi;
        double x;
        int user;
    };
    // One MM/SCA update linearized at `point`. With `relaxed` set, an
    // unattainable linearized constraint gives the unconstrained step x = 0
    // instead of an error.
    auto step_from = [&](const CVector &point, bool relaxed) {
        const ScaConstraint con = select_constraint(pq, point, threshold);
        const MmLinearization lin = mm_linearize(pq, bounds, point);
        try
        {
            MultiplierResult r = multiplier_bisection(lin.t, con.direction, con.r_hat, opt.bisection_eps);
            return Step{std::move(r.phi), r.x, con.user};
        }
        catch (const Error &e)
        {
            if (!relaxed || e.kind() != ErrorKind::infeasible)
                throw;
            out.infeasible = true;
            return Step{phase_closed_form(lin.t, con.direction, 0.0), 0.0, con.user};
        }
    };

    CVector previous = phi;
    int momentum = 1;
    for (int it = 1; it <= opt.max_iterations; ++it)
    {
        std::optional<Step> step;
        double f = 0.0;
        if (opt.accelerate && momentum > 1)
        {
            const double beta = (momentum - 1.0) / (momentum + 2.0);
            CVector point = phi + beta * (phi - previous);
            for (Eigen::Index i = 0; i < point.size(); ++i)
                point(i) = std::abs(point(i)) > 0.0 ? point(i) / std::abs(point(i)) : phi(i);
            try
            {
                step = step_from(point, false);
                f = pq.objective(step->phi);
                if (f > f_prev)
                    step.reset();
            }
            catch (const Error &e)
            {
                if (e.kind() != ErrorKind::infeasible)
                    throw;
                step.reset();
            }
        }
        if (step)
            ++momentum;
        else
        {
            momentum = 2;
            // Once some iterate met every constraint, infeasibility ends the
            // descent at the best such iterate. Before that there is nothing
            // to protect and the descent continues on f alone.
            try
            {
                step = step_from(phi, best_feasible.size() == 0);
            }
            catch (const Error &e)
            {
                if (e.kind() != ErrorKind::infeasible)
                    throw;
                out.infeasible = true;
                return best_feasible;
            }
            f = pq.objective(step->phi);
        }

        previous = std::move(phi);
        phi = std::move(step->phi);
        ++out.iterations;
        out.objective.push_back(f);
        out.multiplier.push_back(step->x);
        out.active_user.push_back(step->user);
        out.min_margin.push_back(min_margin(phi));
        consider(phi, f, out.min_margin.back());

        if (std::abs(f - f_prev) <= opt.tolerance * std::max(std::abs(f_prev + offset), 1e-300))
            break;
        if (it == opt.max_iterations)
            out.cap_hit = true;
        f_prev = f;
    }
    return phi;
}

} // namespace

PhaseStageResult phase_stage(const ChannelSet &ch, const BeamPair &bp, const WmmseState &state,
                             const PhasePair &init, const SystemConfig &cfg, const PhaseOptions &opt)
{
    check_dimensions(ch, cfg);
    check_dimensions(bp, cfg);
    check_dimensions(init, cfg);
    if (init.modulus_deviation() > 1e-9)
        throw Error(ErrorKind::shape, "phase_stage: initial phases are not unit-modulus", init.modulus_deviation());
    if (opt.receiver_rounds < 1)
        throw Error(ErrorKind::config, "phase_stage: receiver_rounds must be >= 1", opt.receiver_rounds);

    PhaseStageResult out;
    CVector phi = stack_phases(init);
    WmmseState current = state;
    for (int round = 1; round <= opt.receiver_rounds; ++round)
    {
        out.round_start.push_back(static_cast<int>(out.objective.size()));
        const PhaseQuadratics pq = build_quadratics(ch, bp, current, opt.coupling);
        phi = mm_descent(pq, std::move(phi), cfg.qos_threshold, mse_offset(current, cfg.noise_power), opt, out);
        out.rounds = round;
        if (round == opt.receiver_rounds)
            break;

        // Receivers for the new phases; stop once they no longer move the rate.
        WmmseState next = refresh_state(effective_channels(ch, unstack_phases(phi)), bp, cfg);
        const double before = current.weight.array().log().sum();
        const double after = next.weight.array().log().sum();
        current = std::move(next);
        if (std::abs(after - before) <= opt.tolerance * std::max(1.0, std::abs(before)))
            break;
    }

    out.phases = unstack_phases(phi);
    return out;
}

} // namespace dualris
