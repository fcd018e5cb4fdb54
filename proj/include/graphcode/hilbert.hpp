// Copyright 2026 The graphcode authors
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

#ifndef GRAPHCODE_HILBERT_HPP
#define GRAPHCODE_HILBERT_HPP

/// Dense Hilbert-space layer. States are complex functions on F_d^K stored
/// in the orthonormal position basis |q>, indexed lexicographically in the
/// declared vertex order (first site most significant).
///
/// Operator conventions, fixed here and relied on everywhere else:
///   z(p)|q> = chi(p,q)|q>                      (multiplier)
///   x(s)|q> = |q-s>                            (shift)
///   w(p,s)  = z(p) x(s)                        (Weyl)
/// which gives the composition law
///   w(xi1) w(xi2) = chi(p2, q1) w(xi1 + xi2)
/// and makes the Fourier matrix F[p,q] = d^{-n/2} chi(p,q) satisfy
///   F z(p) F^* = x(p) exactly.

#include <complex>
#include <vector>

#include "phase_space.hpp"

namespace graphcode {

/// An ordered set of qudit sites sharing one modulus.
struct Sites {
    Labels labels;
    uint32_t d = 2;

    Sites() = default;
    Sites(Labels ls, uint32_t modulus) : labels(std::move(ls)), d(modulus) {
        require_no_duplicates(labels);
    }

    size_t n() const {
        return labels.size();
    }
    size_t dim() const {
        size_t out = 1;
        for (size_t k = 0; k < labels.size(); k++) {
            out *= d;
        }
        return out;
    }
    friend bool operator==(const Sites &a, const Sites &b) {
        return a.d == b.d && a.labels == b.labels;
    }
};

inline void index_to_config(size_t idx, size_t n, uint32_t d, uint32_t *out) {
    for (size_t k = n; k-- > 0;) {
        out[k] = uint32_t(idx % d);
        idx /= d;
    }
}

inline size_t config_to_index(const uint32_t *cfg, size_t n, uint32_t d) {
    size_t idx = 0;
    for (size_t k = 0; k < n; k++) {
        idx = idx * d + cfg[k];
    }
    return idx;
}

inline FVec index_to_fvec(size_t idx, const Sites &s) {
    FVec out(s.labels, s.d);
    index_to_config(idx, s.n(), s.d, out.v.data());
    return out;
}

inline size_t fvec_to_index(const FVec &v, uint32_t d) {
    return config_to_index(v.v.data(), v.size(), d);
}

/// Plain dense complex matrix, row-major.
struct Mat {
    size_t nr = 0, nc = 0;
    std::vector<cplx> a;

    Mat() = default;
    Mat(size_t rows, size_t cols) : nr(rows), nc(cols), a(rows * cols, cplx(0, 0)) {}

    cplx &at(size_t r, size_t c) {
        return a[r * nc + c];
    }
    cplx at(size_t r, size_t c) const {
        return a[r * nc + c];
    }

    static Mat identity(size_t n) {
        Mat m(n, n);
        for (size_t k = 0; k < n; k++) {
            m.at(k, k) = 1.0;
        }
        return m;
    }

    Mat adjoint() const {
        Mat out(nc, nr);
        for (size_t r = 0; r < nr; r++) {
            for (size_t c = 0; c < nc; c++) {
                out.at(c, r) = std::conj(at(r, c));
            }
        }
        return out;
    }

    cplx trace() const {
        cplx t = 0;
        for (size_t k = 0; k < nr && k < nc; k++) {
            t += at(k, k);
        }
        return t;
    }

    double fro_norm() const {
        double s = 0;
        for (const auto &x : a) {
            s += std::norm(x);
        }
        return std::sqrt(s);
    }

    friend Mat operator*(const Mat &m, const Mat &n) {
        if (m.nc != n.nr) {
            throw std::invalid_argument("matrix dimension mismatch");
        }
        Mat out(m.nr, n.nc);
        for (size_t r = 0; r < m.nr; r++) {
            for (size_t k = 0; k < m.nc; k++) {
                cplx f = m.at(r, k);
                if (f == cplx(0, 0)) {
                    continue;
                }
                const cplx *src = &n.a[k * n.nc];
                cplx *dst = &out.a[r * out.nc];
                for (size_t c = 0; c < n.nc; c++) {
                    dst[c] += f * src[c];
                }
            }
        }
        return out;
    }

    friend Mat operator+(const Mat &m, const Mat &n) {
        Mat out = m;
        for (size_t k = 0; k < out.a.size(); k++) {
            out.a[k] += n.a[k];
        }
        return out;
    }
    friend Mat operator-(const Mat &m, const Mat &n) {
        Mat out = m;
        for (size_t k = 0; k < out.a.size(); k++) {
            out.a[k] -= n.a[k];
        }
        return out;
    }
    friend Mat operator*(cplx s, const Mat &m) {
        Mat out = m;
        for (auto &x : out.a) {
            x *= s;
        }
        return out;
    }
};

inline double mat_distance(const Mat &m, const Mat &n) {
    if (m.nr != n.nr || m.nc != n.nc) {
        throw std::invalid_argument("matrix dimension mismatch");
    }
    return (m - n).fro_norm();
}

/// A linear operator between two labelled registers.
struct DenseOp {
    Sites out_sites, in_sites;
    Mat m;

    DenseOp() = default;
    DenseOp(Sites out, Sites in) : out_sites(std::move(out)), in_sites(std::move(in)), m(out_sites.dim(), in_sites.dim()) {}
    DenseOp(Sites out, Sites in, Mat mat) : out_sites(std::move(out)), in_sites(std::move(in)), m(std::move(mat)) {
        if (m.nr != out_sites.dim() || m.nc != in_sites.dim()) {
            throw std::invalid_argument("operator matrix does not match its registers");
        }
    }

    static DenseOp identity(const Sites &s) {
        return DenseOp(s, s, Mat::identity(s.dim()));
    }

    DenseOp adjoint() const {
        return DenseOp(in_sites, out_sites, m.adjoint());
    }

    friend DenseOp operator*(const DenseOp &a, const DenseOp &b) {
        if (!(a.in_sites == b.out_sites)) {
            throw std::invalid_argument("operator registers do not compose");
        }
        return DenseOp(a.out_sites, b.in_sites, a.m * b.m);
    }
    friend DenseOp operator+(const DenseOp &a, const DenseOp &b) {
        return DenseOp(a.out_sites, a.in_sites, a.m + b.m);
    }
    friend DenseOp operator-(const DenseOp &a, const DenseOp &b) {
        return DenseOp(a.out_sites, a.in_sites, a.m - b.m);
    }
    friend DenseOp operator*(cplx s, const DenseOp &a) {
        return DenseOp(a.out_sites, a.in_sites, s * a.m);
    }
};

/// Deviation of U from an isometry, |U^* U - 1|_F.
inline double isometry_defect(const DenseOp &u) {
    return mat_distance((u.adjoint() * u).m, Mat::identity(u.in_sites.dim()));
}

struct StateVec {
    Sites sites;
    std::vector<cplx> a;

    StateVec() = default;
    explicit StateVec(Sites s) : sites(std::move(s)), a(sites.dim(), cplx(0, 0)) {}

    double norm() const {
        double s = 0;
        for (const auto &x : a) {
            s += std::norm(x);
        }
        return std::sqrt(s);
    }
};

/// The shift-invariant standard state: every amplitude d^{-n/2}.
inline StateVec omega(const Sites &s) {
    StateVec psi(s);
    double amp = 1.0 / std::sqrt(double(s.dim()));
    for (auto &x : psi.a) {
        x = amp;
    }
    return psi;
}

inline StateVec apply(const DenseOp &op, const StateVec &psi) {
    if (!(op.in_sites == psi.sites)) {
        throw std::invalid_argument("operator/state register mismatch");
    }
    StateVec out(op.out_sites);
    for (size_t r = 0; r < op.m.nr; r++) {
        cplx acc = 0;
        for (size_t c = 0; c < op.m.nc; c++) {
            acc += op.m.at(r, c) * psi.a[c];
        }
        out.a[r] = acc;
    }
    return out;
}

/// Shift x(s): x(s)|q> = |q-s>.
inline DenseOp shift_op(const FVec &s) {
    Sites reg(s.labels, s.d);
    DenseOp op(reg, reg);
    size_t n = reg.n(), dim = reg.dim();
    std::vector<uint32_t> cfg(n);
    for (size_t c = 0; c < dim; c++) {
        index_to_config(c, n, s.d, cfg.data());
        for (size_t k = 0; k < n; k++) {
            cfg[k] = fp_sub(cfg[k], s.v[k], s.d);
        }
        op.m.at(config_to_index(cfg.data(), n, s.d), c) = 1.0;
    }
    return op;
}

/// Multiplier z(p): z(p)|q> = chi(p,q)|q>.
inline DenseOp mult_op(const FVec &p) {
    Sites reg(p.labels, p.d);
    DenseOp op(reg, reg);
    size_t n = reg.n(), dim = reg.dim();
    std::vector<uint32_t> cfg(n);
    for (size_t c = 0; c < dim; c++) {
        index_to_config(c, n, p.d, cfg.data());
        uint32_t e = 0;
        for (size_t k = 0; k < n; k++) {
            e = fp_add(e, fp_mul(p.v[k], cfg[k], p.d), p.d);
        }
        op.m.at(c, c) = unit_root(e, p.d);
    }
    return op;
}

/// Weyl operator w(xi) = z(p) x(q); w(p,q)|c> = chi(p, c-q)|c-q>.
inline DenseOp weyl_op(const PhaseVec &xi) {
    Sites reg(xi.labels(), xi.modulus());
    DenseOp op(reg, reg);
    uint32_t d = xi.modulus();
    size_t n = reg.n(), dim = reg.dim();
    std::vector<uint32_t> cfg(n);
    for (size_t c = 0; c < dim; c++) {
        index_to_config(c, n, d, cfg.data());
        uint32_t e = 0;
        for (size_t k = 0; k < n; k++) {
            cfg[k] = fp_sub(cfg[k], xi.q.v[k], d);
            e = fp_add(e, fp_mul(xi.p.v[k], cfg[k], d), d);
        }
        op.m.at(config_to_index(cfg.data(), n, d), c) = unit_root(e, d);
    }
    return op;
}

/// Left-multiplication by w(xi) on a matrix whose rows are indexed by the
/// configurations of `reg`: row u of the result is chi(p,u) times row u+q
/// of the input. Avoids materialising the Weyl matrix.
inline Mat weyl_apply_left(const PhaseVec &xi, const Sites &reg, const Mat &m, bool dagger = false) {
    if (!(reg.labels == xi.labels()) || reg.d != xi.modulus()) {
        throw std::invalid_argument("weyl_apply_left: register mismatch");
    }
    uint32_t d = reg.d;
    size_t n = reg.n(), dim = reg.dim();
    if (m.nr != dim) {
        throw std::invalid_argument("weyl_apply_left: row dimension mismatch");
    }
    Mat out(m.nr, m.nc);
    std::vector<uint32_t> cfg(n);
    for (size_t u = 0; u < dim; u++) {
        index_to_config(u, n, d, cfg.data());
        uint32_t e = 0;
        std::vector<uint32_t> src(cfg);
        for (size_t k = 0; k < n; k++) {
            if (!dagger) {
                // w(p,q): row u <- chi(p,u) * row (u+q)
                e = fp_add(e, fp_mul(xi.p.v[k], cfg[k], d), d);
                src[k] = fp_add(cfg[k], xi.q.v[k], d);
            } else {
                // w(p,q)^*: row u <- conj(chi(p,u-q)) * row (u-q)
                src[k] = fp_sub(cfg[k], xi.q.v[k], d);
                e = fp_add(e, fp_mul(d - xi.p.v[k] % d, src[k], d), d);
            }
        }
        cplx f = unit_root(e, d);
        size_t si = config_to_index(src.data(), n, d);
        for (size_t c = 0; c < m.nc; c++) {
            out.at(u, c) = f * m.at(si, c);
        }
    }
    return out;
}

/// Fourier transform F[p,q] = d^{-n/2} chi(p,q); maps the x-basis to the
/// z-basis and satisfies F z(p) F^* = x(p).
inline DenseOp fourier_op(const Sites &s) {
    DenseOp op(s, s);
    size_t n = s.n(), dim = s.dim();
    double amp = 1.0 / std::sqrt(double(dim));
    std::vector<uint32_t> row(n), col(n);
    for (size_t r = 0; r < dim; r++) {
        index_to_config(r, n, s.d, row.data());
        for (size_t c = 0; c < dim; c++) {
            index_to_config(c, n, s.d, col.data());
            uint32_t e = 0;
            for (size_t k = 0; k < n; k++) {
                e = fp_add(e, fp_mul(row[k], col[k], s.d), s.d);
            }
            op.m.at(r, c) = amp * unit_root(e, s.d);
        }
    }
    return op;
}

/// Diagonal graph dynamics u(G): |q> -> tau(sign*G, q)|q>. One elementary
/// step of the two-qudit interaction pattern given by G.
inline DenseOp graph_unitary(const FMat &g, int sign = +1) {
    require_symmetric_zero_diagonal(g);
    Sites reg(g.rows, g.d);
    FMat gs = sign >= 0 ? g : -g;
    DenseOp op(reg, reg);
    size_t n = reg.n(), dim = reg.dim();
    FVec cfg(reg.labels, reg.d);
    for (size_t c = 0; c < dim; c++) {
        index_to_config(c, n, reg.d, cfg.v.data());
        op.m.at(c, c) = unit_root(tau_exponent(gs, cfg), reg.d);
    }
    return op;
}

/// Embed an operator into a larger register by acting trivially elsewhere.
/// Site order inside `ambient` is respected; op sites must be a subset.
inline DenseOp embed_op(const DenseOp &op, const Sites &ambient) {
    if (!(op.in_sites == op.out_sites)) {
        throw std::invalid_argument("embed_op expects an endomorphism");
    }
    std::vector<size_t> pos;
    for (const auto &l : op.in_sites.labels) {
        pos.push_back(label_index(ambient.labels, l));
    }
    DenseOp out(ambient, ambient);
    size_t n = ambient.n(), dim = ambient.dim();
    size_t sub_n = op.in_sites.n();
    std::vector<uint32_t> cfg(n), sub_row(sub_n), sub_col(sub_n);
    for (size_t c = 0; c < dim; c++) {
        index_to_config(c, n, ambient.d, cfg.data());
        for (size_t k = 0; k < sub_n; k++) {
            sub_col[k] = cfg[pos[k]];
        }
        size_t sc = config_to_index(sub_col.data(), sub_n, ambient.d);
        for (size_t sr = 0; sr < op.m.nr; sr++) {
            cplx val = op.m.at(sr, sc);
            if (val == cplx(0, 0)) {
                continue;
            }
            index_to_config(sr, sub_n, ambient.d, sub_row.data());
            std::vector<uint32_t> row_cfg = cfg;
            for (size_t k = 0; k < sub_n; k++) {
                row_cfg[pos[k]] = sub_row[k];
            }
            out.m.at(config_to_index(row_cfg.data(), n, ambient.d), c) = val;
        }
    }
    return out;
}

}  // namespace graphcode

#endif
