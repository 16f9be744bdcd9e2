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

#include "dualris/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dualris
{

const char *to_string(ErrorKind kind)
{
    switch (kind)
    {
    case ErrorKind::dimension:
        return "dimension";
    case ErrorKind::shape:
        return "shape";
    case ErrorKind::numerical:
        return "numerical";
    case ErrorKind::convergence:
        return "convergence";
    case ErrorKind::infeasible:
        return "infeasible";
    case ErrorKind::config:
        return "config";
    case ErrorKind::io:
        return "io";
    }
    return "unknown";
}

void require_square(const CMatrix &a, const char *what)
{
    if (a.rows() != a.cols())
        throw Error(ErrorKind::dimension, std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                                              std::to_string(a.cols()) + ", expected square");
}

void require_finite(const CMatrix &a, const char *what)
{
    if (!a.allFinite())
        throw Error(ErrorKind::numerical, std::string(what) + ": non-finite entry");
}

double hermitian_deviation(const CMatrix &a)
{
    if (a.size() == 0)
        return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

CMatrix hermitian_part(const CMatrix &a)
{
    return (a + a.adjoint()) * 0.5;
}

namespace
{

Eigen::SelfAdjointEigenSolver<CMatrix> checked_solver(const CMatrix &a, const char *what, int options)
{
    require_square(a, what);
    require_finite(a, what);

    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double deviation = hermitian_deviation(a);
    if (deviation > tolerance::hermitian * scale)
        throw Error(ErrorKind::shape, std::string(what) + ": input deviates from its adjoint by " +
                                          std::to_string(deviation),
                    deviation);

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(a), options);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::convergence, std::string(what) + ": eigensolver did not converge");
    return solver;
}

} // namespace

HermitianEig hermitian_eig(const CMatrix &a)
{
    if (a.size() == 0 && a.rows() == a.cols())
        return {RVector(0), CMatrix(0, 0)};
    const auto solver = checked_solver(a, "hermitian_eig", Eigen::ComputeEigenvectors);
    // Eigen already sorts ascending.
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double max_eigenvalue(const CMatrix &a)
{
    if (a.size() == 0 && a.rows() == a.cols())
        return 0.0;
    const auto solver = checked_solver(a, "max_eigenvalue", Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

CMatrix hadamard(const CMatrix &a, const CMatrix &b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorKind::dimension, "hadamard: operand sizes differ");
    return a.cwiseProduct(b);
}

cdouble trace(const CMatrix &a)
{
    require_square(a, "trace");
    return a.trace();
}

CMatrix solve_hpd(const CMatrix &a, const CMatrix &b)
{
    require_square(a, "solve_hpd");
    if (b.rows() != a.rows())
        throw Error(ErrorKind::dimension, "solve_hpd: right-hand side has " + std::to_string(b.rows()) +
                                              " rows, expected " + std::to_string(a.rows()));

    const auto eig = hermitian_eig(a);
    if (eig.eigenvalues.size() == 0)
        return CMatrix(0, b.cols());
    const double min_ev = eig.eigenvalues(0);
    const double max_ev = eig.eigenvalues(eig.eigenvalues.size() - 1);
    if (!(min_ev > tolerance::hpd_min_eigenvalue * std::max(1.0, max_ev)))
        throw Error(ErrorKind::numerical,
                    "solve_hpd: matrix is not positive definite (min eigenvalue " + std::to_string(min_ev) + ")",
                    min_ev);

    Eigen::LLT<CMatrix> llt(hermitian_part(a));
    if (llt.info() != Eigen::Success)
        throw Error(ErrorKind::numerical, "solve_hpd: Cholesky factorization failed", min_ev);
    return llt.solve(b);
}

double relative_error(const CMatrix &a, const CMatrix &b)
{
    const double denom = std::max(b.norm(), std::numeric_limits<double>::min());
    return (a - b).norm() / denom;
}

} // namespace dualris
