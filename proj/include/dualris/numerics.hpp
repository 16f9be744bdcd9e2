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

#ifndef DUALRIS_NUMERICS_HPP
#define DUALRIS_NUMERICS_HPP

#include <complex>

#include <Eigen/Dense>

#include "dualris/errors.hpp"

// Dense complex linear-algebra kernel shared by all optimization stages.
// Every function is pure; inputs are never modified.

namespace dualris
{

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;
using RVector = Eigen::VectorXd;

namespace tolerance
{
/// Max |a - a^H| accepted as Hermitian, relative to max(1, max|a_ij|).
inline constexpr double hermitian = 1e-10;
/// Relative Frobenius reconstruction error of an eigendecomposition.
inline constexpr double eig_reconstruction = 1e-9;
/// Max deviation of T^H T from identity.
inline constexpr double eig_unitarity = 1e-10;
/// Eigenvalues of a PSD input may dip this far below zero.
inline constexpr double psd_floor = 1e-10;
/// solve_hpd requires min eigenvalue above this (relative to max(1, max eigenvalue)).
inline constexpr double hpd_min_eigenvalue = 1e-12;
/// Relative residual promised by solve_hpd.
inline constexpr double solve_residual = 1e-9;
} // namespace tolerance

struct HermitianEig
{
    RVector eigenvalues;  // ascending
    CMatrix eigenvectors; // columns, unitary
};

/// Throws Error(dimension) if the matrix is not square.
void require_square(const CMatrix &a, const char *what);

/// Throws Error(numerical) on any NaN/Inf entry.
void require_finite(const CMatrix &a, const char *what);

/// Largest |a_ij - conj(a_ji)|.
double hermitian_deviation(const CMatrix &a);

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized as
/// (a + a^H)/2 before factorization, so small floating-point asymmetry is
/// tolerated up to tolerance::hermitian.
HermitianEig hermitian_eig(const CMatrix &a);

/// Largest eigenvalue of a Hermitian matrix.
double max_eigenvalue(const CMatrix &a);

CMatrix hadamard(const CMatrix &a, const CMatrix &b);

cdouble trace(const CMatrix &a);

/// Solves a x = b for Hermitian positive definite a (Cholesky).
CMatrix solve_hpd(const CMatrix &a, const CMatrix &b);

/// (a + a^H) / 2
CMatrix hermitian_part(const CMatrix &a);

/// Relative Frobenius distance ||a - b|| / max(||b||, tiny).
double relative_error(const CMatrix &a, const CMatrix &b);

} // namespace dualris

#endif
