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

#include "ncasp/spectral.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ncasp/linalg.hpp"
#include "ncasp/rng.hpp"

namespace ncasp {

int IrrepTable::block_offset(int i) const {
    int off = 0;
    for (int b = 0; b < i; ++b) off += blocks[static_cast<size_t>(b)].dim * blocks[static_cast<size_t>(b)].multiplicity;
    return off;
}

namespace {

// ---- symmetric group on three letters ----

using Perm = std::array<int, 3>;

Perm compose(const Perm& a, const Perm& b) {  // (a*b)(i) = a(b(i))
    return {a[b[0]], a[b[1]], a[b[2]]};
}

Perm inverse(const Perm& a) {
    Perm inv{};
    for (int i = 0; i < 3; ++i) inv[a[i]] = i;
    return inv;
}

int sign_of(const Perm& a) {
    int s = 1;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (a[i] > a[j]) s = -s;
    return s;
}

const std::array<Perm, 6>& s3_elements() {
    // identity, three transpositions, two 3-cycles
    static const std::array<Perm, 6> elems = {
        Perm{0, 1, 2}, Perm{1, 0, 2}, Perm{2, 1, 0},
        Perm{0, 2, 1}, Perm{1, 2, 0}, Perm{2, 0, 1},
    };
    return elems;
}

int element_index(const Perm& p) {
    const auto& elems = s3_elements();
    for (int i = 0; i < 6; ++i)
        if (elems[static_cast<size_t>(i)] == p) return i;
    throw std::logic_error("s3: element not found");
}

// left multiplication on the group algebra: e_h -> e_{g h}
Matrix left_regular(const Perm& g) {
    Matrix l = Matrix::Zero(6, 6);
    const auto& elems = s3_elements();
    for (int v = 0; v < 6; ++v) l(element_index(compose(g, elems[static_cast<size_t>(v)])), v) = 1.0;
    return l;
}

// standard two-dimensional irrep: permutation action restricted to the
// zero-sum plane in R^3, expressed in an orthonormal basis of that plane
Matrix standard_irrep(const Perm& g) {
    Matrix u(3, 2);
    u.col(0) << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0;
    u.col(1) << 1.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0), -2.0 / std::sqrt(6.0);
    Matrix perm = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) perm(g[i], i) = 1.0;
    return u.transpose() * perm * u;
}

}  // namespace

std::pair<ShiftSet, IrrepTable> s3_regular_fixture() {
    const auto& elems = s3_elements();
    const Perm transposition{1, 0, 2};  // swaps the first two letters
    const Perm three_cycle{1, 2, 0};
    const std::array<Perm, 2> generators = {transposition, three_cycle};

    ShiftSet shifts({left_regular(transposition), left_regular(three_cycle)});

    // irreducible matrix coefficients per element, per irrep
    auto trivial = [](const Perm&) { return Matrix::Identity(1, 1); };
    auto sign = [](const Perm& g) { return Matrix::Constant(1, 1, static_cast<double>(sign_of(g))); };

    struct IrrepDef {
        int dim;
        std::function<Matrix(const Perm&)> rep;
    };
    const std::array<IrrepDef, 3> irreps = {IrrepDef{1, trivial}, IrrepDef{1, sign},
                                            IrrepDef{2, standard_irrep}};

    IrrepTable table;
    table.dim = 6;
    Matrix q(6, 0);
    for (const auto& def : irreps) {
        const int d = def.dim;
        // matrix units p_jk = (d/|G|) sum_g rep(g^-1)_{kj} L_g
        auto unit = [&](int j, int k) {
            Matrix acc = Matrix::Zero(6, 6);
            for (const auto& g : elems) acc += def.rep(inverse(g))(k, j) * left_regular(g);
            return Matrix((static_cast<double>(d) / 6.0) * acc);
        };

        // isotypic projector = sum_j p_jj
        Matrix projector = Matrix::Zero(6, 6);
        for (int j = 0; j < d; ++j) projector += unit(j, j);

        // orthonormal basis of Image(p_11) spans the multiplicity space
        Matrix p11 = unit(0, 0);
        Eigen::ColPivHouseholderQR<Matrix> qr(p11);
        qr.setThreshold(1e-9);
        const int mult = static_cast<int>(qr.rank());
        Matrix range = qr.householderQ() * Matrix::Identity(6, mult);

        // adapted basis: one contiguous d-column group per copy
        Matrix adapted(6, d * mult);
        for (int t = 0; t < mult; ++t)
            for (int j = 0; j < d; ++j) adapted.col(t * d + j) = unit(j, 0) * range.col(t);
        // columns are orthonormal up to roundoff; tighten with Gram-Schmidt
        for (int c = 0; c < adapted.cols(); ++c) {
            for (int prev = 0; prev < c; ++prev)
                adapted.col(c) -= adapted.col(prev).dot(adapted.col(c)) * adapted.col(prev);
            adapted.col(c).normalize();
        }

        IrrepBlock block;
        block.dim = d;
        block.multiplicity = mult;
        for (const auto& g : generators) block.freqs.push_back(def.rep(g).cast<std::complex<double>>());
        block.projector = projector.cast<std::complex<double>>();
        table.blocks.push_back(std::move(block));

        Matrix widened(6, q.cols() + adapted.cols());
        widened << q, adapted;
        q = std::move(widened);
    }
    table.basis = q.cast<std::complex<double>>();
    return {std::move(shifts), std::move(table)};
}

std::pair<ShiftSet, IrrepTable> cycle_fixture(int n) {
    if (n < 2) throw std::invalid_argument("cycle_fixture: need n >= 2");
    Matrix shift = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) shift((j + 1) % n, j) = 1.0;  // circular delay

    IrrepTable table;
    table.dim = n;
    table.basis = CMatrix(n, n);
    const std::complex<double> i2pi(0.0, 2.0 * M_PI / n);
    for (int k = 0; k < n; ++k) {
        CVector v(n);
        for (int t = 0; t < n; ++t) v(t) = std::exp(-i2pi * static_cast<double>(k * t));
        v /= std::sqrt(static_cast<double>(n));
        table.basis.col(k) = v;

        IrrepBlock block;
        block.dim = 1;
        block.multiplicity = 1;
        CMatrix freq(1, 1);
        freq(0, 0) = std::exp(i2pi * static_cast<double>(k));
        block.freqs.push_back(std::move(freq));
        block.projector = v * v.adjoint();
        table.blocks.push_back(std::move(block));
    }
    return {ShiftSet({shift}), std::move(table)};
}

namespace {

CMatrix solve_in_basis(const CMatrix& q, const CMatrix& a) {
    Eigen::FullPivLU<CMatrix> lu(q);
    if (!lu.isInvertible()) throw std::invalid_argument("irrep table: singular change of basis");
    return lu.solve(a);  // Q^-1 a
}

CMatrix expected_block_diagonal(const IrrepTable& table, int generator) {
    CMatrix out = CMatrix::Zero(table.dim, table.dim);
    int off = 0;
    for (const auto& b : table.blocks) {
        for (int copy = 0; copy < b.multiplicity; ++copy) {
            out.block(off, off, b.dim, b.dim) = b.freqs[static_cast<size_t>(generator)];
            off += b.dim;
        }
    }
    return out;
}

}  // namespace

DecompositionReport verify_decomposition(const ShiftSet& shifts, const IrrepTable& table) {
    if (shifts.dim() != table.dim)
        throw std::invalid_argument("verify_decomposition: dimension mismatch");
    DecompositionReport rep;

    int total = 0;
    for (const auto& b : table.blocks) total += b.dim * b.multiplicity;
    rep.dimensions_consistent = (total == table.dim);

    for (int k = 0; k < shifts.count(); ++k) {
        CMatrix in_basis = solve_in_basis(table.basis, shifts[k].cast<std::complex<double>>() * table.basis);
        rep.block_residual =
            std::max(rep.block_residual, (in_basis - expected_block_diagonal(table, k)).norm());
    }

    const int n = table.dim;
    CMatrix sum = CMatrix::Zero(n, n);
    for (size_t i = 0; i < table.blocks.size(); ++i) {
        const CMatrix& pi = table.blocks[i].projector;
        sum += pi;
        rep.projector_residual = std::max(rep.projector_residual, (pi * pi - pi).norm());
        for (size_t j = i + 1; j < table.blocks.size(); ++j)
            rep.projector_residual =
                std::max(rep.projector_residual, (pi * table.blocks[j].projector).norm());
    }
    rep.projector_residual = std::max(rep.projector_residual, (sum - CMatrix::Identity(n, n)).norm());
    return rep;
}

CMatrix block_value(const NcPolynomial& p, const IrrepBlock& block) {
    return eval_at<CMatrix>(p, std::span<const CMatrix>(block.freqs));
}

SpectralFilterReport spectral_filter_check(const NcPolynomial& p, const ShiftSet& shifts,
                                           const IrrepTable& table, int num_signals,
                                           std::uint64_t seed) {
    if (shifts.dim() != table.dim)
        throw std::invalid_argument("spectral_filter_check: dimension mismatch");
    if (p.num_generators() != shifts.count())
        throw std::invalid_argument("spectral_filter_check: generator count mismatch");

    const int n = table.dim;
    CMatrix realized = eval(p, shifts).cast<std::complex<double>>();

    // operator side: sum of lifted block values times projectors
    CMatrix assembled = CMatrix::Zero(n, n);
    Eigen::FullPivLU<CMatrix> lu(table.basis);
    if (!lu.isInvertible()) throw std::invalid_argument("spectral_filter_check: singular basis");
    CMatrix q_inv = lu.inverse();
    for (size_t i = 0; i < table.blocks.size(); ++i) {
        const auto& b = table.blocks[i];
        CMatrix value = block_value(p, b);
        CMatrix lifted = CMatrix::Zero(n, n);
        int off = table.block_offset(static_cast<int>(i));
        for (int copy = 0; copy < b.multiplicity; ++copy) {
            lifted.block(off, off, b.dim, b.dim) = value;
            off += b.dim;
        }
        assembled += table.basis * lifted * q_inv * b.projector;
    }
    SpectralFilterReport rep;
    rep.operator_residual = (realized - assembled).norm();

    // projection side: hat(y)_i = p(Lambda_i) hat(x)_i on random signals
    std::mt19937_64 g(seed_mix(seed, 0x5bec7a11));
    for (int s = 0; s < num_signals; ++s) {
        CVector x(n);
        for (int t = 0; t < n; ++t) x(t) = std::complex<double>(uniform(g, -1.0, 1.0), uniform(g, -1.0, 1.0));
        CVector x_hat = q_inv * x;
        CVector y_hat = q_inv * (realized * x);
        for (size_t i = 0; i < table.blocks.size(); ++i) {
            const auto& b = table.blocks[i];
            CMatrix value = block_value(p, b);
            int off = table.block_offset(static_cast<int>(i));
            for (int copy = 0; copy < b.multiplicity; ++copy) {
                CVector expected = value * x_hat.segment(off, b.dim);
                rep.projection_residual =
                    std::max(rep.projection_residual, (y_hat.segment(off, b.dim) - expected).norm());
                off += b.dim;
            }
        }
    }
    return rep;
}

double filter_norm_via_blocks(const NcPolynomial& p, const IrrepTable& table) {
    double out = 0.0;
    for (const auto& b : table.blocks) out = std::max(out, operator_norm(block_value(p, b)));
    return out;
}

void save_irrep_table(const IrrepTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_irrep_table: cannot open " + path);
    char buf[96];
    auto write_cmatrix = [&](const CMatrix& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                std::snprintf(buf, sizeof buf, "%.17g %.17g", m(r, c).real(), m(r, c).imag());
                out << buf << (c + 1 < m.cols() ? " " : "");
            }
            out << '\n';
        }
    };
    const int generators = table.blocks.empty() ? 0 : static_cast<int>(table.blocks[0].freqs.size());
    out << "irrep-table v1\n";
    out << table.dim << ' ' << table.blocks.size() << ' ' << generators << '\n';
    for (const auto& b : table.blocks) {
        out << "block " << b.dim << ' ' << b.multiplicity << '\n';
        for (const auto& f : b.freqs) write_cmatrix(f);
        write_cmatrix(b.projector);
    }
    out << "basis\n";
    write_cmatrix(table.basis);
}

IrrepTable load_irrep_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_irrep_table: cannot open " + path);
    std::string header, version;
    in >> header >> version;
    if (header != "irrep-table" || version != "v1")
        throw std::runtime_error("load_irrep_table: unknown format in " + path);
    int n = 0, num_blocks = 0, generators = 0;
    if (!(in >> n >> num_blocks >> generators))
        throw std::runtime_error("load_irrep_table: malformed header in " + path);
    auto read_cmatrix = [&](Eigen::Index rows, Eigen::Index cols) {
        CMatrix m(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c) {
                double re = 0.0, im = 0.0;
                if (!(in >> re >> im)) throw std::runtime_error("load_irrep_table: truncated matrix");
                m(r, c) = {re, im};
            }
        return m;
    };
    IrrepTable table;
    table.dim = n;
    for (int b = 0; b < num_blocks; ++b) {
        std::string tag;
        IrrepBlock block;
        if (!(in >> tag >> block.dim >> block.multiplicity) || tag != "block")
            throw std::runtime_error("load_irrep_table: malformed block header");
        for (int k = 0; k < generators; ++k) block.freqs.push_back(read_cmatrix(block.dim, block.dim));
        block.projector = read_cmatrix(n, n);
        table.blocks.push_back(std::move(block));
    }
    std::string tag;
    in >> tag;
    if (tag != "basis") throw std::runtime_error("load_irrep_table: missing basis");
    table.basis = read_cmatrix(n, n);
    return table;
}

}  // namespace ncasp
