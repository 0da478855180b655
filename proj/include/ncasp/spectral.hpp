/*
   Copyright 2026 The ncasp authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ncasp/shift_set.hpp"

namespace ncasp {

/// One isotypic piece of a Fourier decomposition: an irreducible of dimension
/// `dim` appearing `multiplicity` times, its matrix frequencies (one d x d
/// matrix per generator) and the projector onto the whole homogeneous
/// component.
struct IrrepBlock {
    int dim = 0;
    int multiplicity = 0;
    std::vector<CMatrix> freqs;  // Lambda_{k,i} = phi_i(g_k)
    CMatrix projector;           // n x n, idempotent
};

/// A verified decomposition (M, rho) ~ (+) m_i copies of (U_i, phi_i): the
/// change of basis Q makes every shift block-diagonal with m_i copies of
/// Lambda_{k,i} per block, blocks laid out in list order, copies contiguous.
struct IrrepTable {
    int dim = 0;  // n = sum_i m_i * d_i
    std::vector<IrrepBlock> blocks;
    CMatrix basis;  // Q

    int block_offset(int i) const;  // first coordinate of block i in the Q basis
};

/// The regular representation of the symmetric group on three letters acting
/// on its own group algebra: shifts are the 6 x 6 left-multiplication
/// matrices of a transposition and a 3-cycle; the table lists the trivial,
/// sign and two-dimensional standard irreducibles (the latter with
/// multiplicity two). Q is orthogonal.
std::pair<ShiftSet, IrrepTable> s3_regular_fixture();

/// Single cyclic shift of size N: the classical DFT case with N
/// one-dimensional blocks, frequencies exp(2 pi i k / N), projectors
/// v_k v_k^* / N on Fourier vectors.
std::pair<ShiftSet, IrrepTable> cycle_fixture(int n);

struct DecompositionReport {
    double block_residual = 0.0;      // max_k ||Q^-1 S_k Q - blockdiag(...)||_F
    double projector_residual = 0.0;  // idempotency, mutual annihilation, sum to I
    bool dimensions_consistent = false;
    bool ok(double tol = 1e-9) const {
        return dimensions_consistent && block_residual <= tol && projector_residual <= tol;
    }
};

DecompositionReport verify_decomposition(const ShiftSet& shifts, const IrrepTable& table);

/// p evaluated at one block's frequency matrices.
CMatrix block_value(const NcPolynomial& p, const IrrepBlock& block);

struct SpectralFilterReport {
    double operator_residual = 0.0;    // || p(S) - sum_i lift(p(Lambda_i)) P_i ||_F
    double projection_residual = 0.0;  // max_x, blockwise || y^_i - p(Lambda_i) x^_i ||
};

/// Both sides of the filtering spectral theorem on a fixture: the operator
/// identity and the per-component action on random signals.
SpectralFilterReport spectral_filter_check(const NcPolynomial& p, const ShiftSet& shifts,
                                           const IrrepTable& table, int num_signals = 20,
                                           std::uint64_t seed = 0);

/// max_i || p(Lambda_{1,i}, ..., Lambda_{m,i}) ||_2; equals the norm of the
/// realized filter when Q is unitary (maximum property).
double filter_norm_via_blocks(const NcPolynomial& p, const IrrepTable& table);

/// Lossless text round-trip of a table (matrices row-major).
void save_irrep_table(const IrrepTable& table, const std::string& path);
IrrepTable load_irrep_table(const std::string& path);

}  // namespace ncasp
