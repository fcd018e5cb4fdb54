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

#ifndef GRAPHCODE_FP_HPP
#define GRAPHCODE_FP_HPP

/// Exact arithmetic and dense linear algebra over the prime field F_d,
/// with rows/columns indexed by named vertex labels. Everything is a value
/// type; moduli are carried alongside the data and checked on every mixed
/// operation.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace graphcode {

using Label = std::string;
using Labels = std::vector<Label>;

inline bool is_prime(uint32_t d) {
    if (d < 2) {
        return false;
    }
    for (uint32_t k = 2; k * k <= d; k++) {
        if (d % k == 0) {
            return false;
        }
    }
    return true;
}

inline void require_prime(uint32_t d) {
    if (!is_prime(d)) {
        throw std::invalid_argument("modulus " + std::to_string(d) + " is not prime");
    }
}

inline uint32_t fp_add(uint32_t a, uint32_t b, uint32_t d) {
    return (a + b) % d;
}

inline uint32_t fp_sub(uint32_t a, uint32_t b, uint32_t d) {
    return (a + d - b % d) % d;
}

inline uint32_t fp_neg(uint32_t a, uint32_t d) {
    return (d - a % d) % d;
}

inline uint32_t fp_mul(uint32_t a, uint32_t b, uint32_t d) {
    return (uint64_t(a) * uint64_t(b)) % d;
}

/// Multiplicative inverse mod prime d via Fermat. Inverting 0 is an error.
inline uint32_t fp_inv(uint32_t a, uint32_t d) {
    a %= d;
    if (a == 0) {
        throw std::domain_error("inverse of zero in F_" + std::to_string(d));
    }
    uint32_t result = 1;
    uint32_t base = a;
    uint32_t e = d - 2;
    while (e) {
        if (e & 1) {
            result = fp_mul(result, base, d);
        }
        base = fp_mul(base, base, d);
        e >>= 1;
    }
    return result;
}

/// A single residue with its modulus attached. Mixed-modulus operations throw.
struct Fp {
    uint32_t v = 0;
    uint32_t d = 2;

    Fp() = default;
    Fp(uint32_t value, uint32_t modulus) : v(value % modulus), d(modulus) {}

    friend Fp operator+(Fp a, Fp b) {
        check(a, b);
        return Fp(fp_add(a.v, b.v, a.d), a.d);
    }
    friend Fp operator-(Fp a, Fp b) {
        check(a, b);
        return Fp(fp_sub(a.v, b.v, a.d), a.d);
    }
    friend Fp operator*(Fp a, Fp b) {
        check(a, b);
        return Fp(fp_mul(a.v, b.v, a.d), a.d);
    }
    friend Fp operator-(Fp a) {
        return Fp(fp_neg(a.v, a.d), a.d);
    }
    Fp inv() const {
        return Fp(fp_inv(v, d), d);
    }
    friend bool operator==(Fp a, Fp b) {
        return a.v == b.v && a.d == b.d;
    }

  private:
    static void check(Fp a, Fp b) {
        if (a.d != b.d) {
            throw std::invalid_argument("modulus mismatch: " + std::to_string(a.d) + " vs " + std::to_string(b.d));
        }
    }
};

inline size_t label_index(const Labels &labels, const Label &l) {
    auto it = std::find(labels.begin(), labels.end(), l);
    if (it == labels.end()) {
        throw std::invalid_argument("unknown vertex label '" + l + "'");
    }
    return size_t(it - labels.begin());
}

inline bool labels_equal(const Labels &a, const Labels &b) {
    return a == b;
}

inline Labels labels_concat(const Labels &a, const Labels &b) {
    Labels out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline void require_no_duplicates(const Labels &labels) {
    Labels sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("duplicate vertex label");
    }
}

/// Vector over F_d indexed by an ordered label list.
struct FVec {
    Labels labels;
    std::vector<uint32_t> v;
    uint32_t d = 2;

    FVec() = default;
    FVec(Labels ls, uint32_t modulus) : labels(std::move(ls)), v(labels.size(), 0), d(modulus) {}
    FVec(Labels ls, std::vector<uint32_t> vals, uint32_t modulus)
        : labels(std::move(ls)), v(std::move(vals)), d(modulus) {
        if (labels.size() != v.size()) {
            throw std::invalid_argument("label/value size mismatch");
        }
        for (auto &x : v) {
            x %= d;
        }
    }

    size_t size() const {
        return v.size();
    }
    uint32_t at(const Label &l) const {
        return v[label_index(labels, l)];
    }
    bool is_zero() const {
        return std::all_of(v.begin(), v.end(), [](uint32_t x) { return x == 0; });
    }

    /// Restriction to a sub-label-set, in the order given by `sub`.
    FVec sub(const Labels &subset) const {
        FVec out(subset, d);
        for (size_t k = 0; k < subset.size(); k++) {
            out.v[k] = v[label_index(labels, subset[k])];
        }
        return out;
    }

    friend FVec operator+(const FVec &a, const FVec &b) {
        check(a, b);
        FVec out(a.labels, a.d);
        for (size_t k = 0; k < a.v.size(); k++) {
            out.v[k] = fp_add(a.v[k], b.v[k], a.d);
        }
        return out;
    }
    friend FVec operator-(const FVec &a, const FVec &b) {
        check(a, b);
        FVec out(a.labels, a.d);
        for (size_t k = 0; k < a.v.size(); k++) {
            out.v[k] = fp_sub(a.v[k], b.v[k], a.d);
        }
        return out;
    }
    friend FVec operator-(const FVec &a) {
        FVec out(a.labels, a.d);
        for (size_t k = 0; k < a.v.size(); k++) {
            out.v[k] = fp_neg(a.v[k], a.d);
        }
        return out;
    }
    friend bool operator==(const FVec &a, const FVec &b) {
        return a.d == b.d && a.labels == b.labels && a.v == b.v;
    }

    /// Sum_k a_k b_k in F_d.
    friend uint32_t dot(const FVec &a, const FVec &b) {
        check(a, b);
        uint32_t acc = 0;
        for (size_t k = 0; k < a.v.size(); k++) {
            acc = fp_add(acc, fp_mul(a.v[k], b.v[k], a.d), a.d);
        }
        return acc;
    }

    /// Concatenation; label sets must be disjoint.
    friend FVec concat(const FVec &a, const FVec &b) {
        if (a.d != b.d) {
            throw std::invalid_argument("modulus mismatch in concat");
        }
        FVec out(labels_concat(a.labels, b.labels), a.d);
        require_no_duplicates(out.labels);
        std::copy(a.v.begin(), a.v.end(), out.v.begin());
        std::copy(b.v.begin(), b.v.end(), out.v.begin() + a.v.size());
        return out;
    }

  private:
    static void check(const FVec &a, const FVec &b) {
        if (a.d != b.d) {
            throw std::invalid_argument("modulus mismatch");
        }
        if (a.labels != b.labels) {
            throw std::invalid_argument("index set mismatch");
        }
    }
};

/// Dense matrix over F_d with labelled rows and columns. Blocks are
/// addressed by sub-label-sets.
struct FMat {
    Labels rows, cols;
    std::vector<uint32_t> a;  // row-major
    uint32_t d = 2;

    FMat() = default;
    FMat(Labels r, Labels c, uint32_t modulus)
        : rows(std::move(r)), cols(std::move(c)), a(rows.size() * cols.size(), 0), d(modulus) {}

    size_t nrows() const {
        return rows.size();
    }
    size_t ncols() const {
        return cols.size();
    }
    uint32_t &at(size_t r, size_t c) {
        return a[r * cols.size() + c];
    }
    uint32_t at(size_t r, size_t c) const {
        return a[r * cols.size() + c];
    }
    uint32_t at(const Label &r, const Label &c) const {
        return at(label_index(rows, r), label_index(cols, c));
    }

    static FMat identity(const Labels &ls, uint32_t modulus) {
        FMat m(ls, ls, modulus);
        for (size_t k = 0; k < ls.size(); k++) {
            m.at(k, k) = 1;
        }
        return m;
    }

    bool is_zero() const {
        return std::all_of(a.begin(), a.end(), [](uint32_t x) { return x == 0; });
    }

    /// Sub-block with rows `rs` and columns `cs` (in the order given).
    FMat block(const Labels &rs, const Labels &cs) const {
        FMat out(rs, cs, d);
        for (size_t r = 0; r < rs.size(); r++) {
            size_t ri = label_index(rows, rs[r]);
            for (size_t c = 0; c < cs.size(); c++) {
                out.at(r, c) = at(ri, label_index(cols, cs[c]));
            }
        }
        return out;
    }

    FMat transpose() const {
        FMat out(cols, rows, d);
        for (size_t r = 0; r < nrows(); r++) {
            for (size_t c = 0; c < ncols(); c++) {
                out.at(c, r) = at(r, c);
            }
        }
        return out;
    }

    friend FVec operator*(const FMat &m, const FVec &x) {
        if (m.d != x.d) {
            throw std::invalid_argument("modulus mismatch");
        }
        if (m.cols != x.labels) {
            throw std::invalid_argument("index set mismatch in mat*vec");
        }
        FVec out(m.rows, m.d);
        for (size_t r = 0; r < m.nrows(); r++) {
            uint32_t acc = 0;
            for (size_t c = 0; c < m.ncols(); c++) {
                acc = fp_add(acc, fp_mul(m.at(r, c), x.v[c], m.d), m.d);
            }
            out.v[r] = acc;
        }
        return out;
    }

    friend FMat operator*(const FMat &m, const FMat &n) {
        if (m.d != n.d) {
            throw std::invalid_argument("modulus mismatch");
        }
        if (m.cols != n.rows) {
            throw std::invalid_argument("index set mismatch in mat*mat");
        }
        FMat out(m.rows, n.cols, m.d);
        for (size_t r = 0; r < m.nrows(); r++) {
            for (size_t c = 0; c < n.ncols(); c++) {
                uint32_t acc = 0;
                for (size_t k = 0; k < m.ncols(); k++) {
                    acc = fp_add(acc, fp_mul(m.at(r, k), n.at(k, c), m.d), m.d);
                }
                out.at(r, c) = acc;
            }
        }
        return out;
    }

    friend FMat operator-(const FMat &m) {
        FMat out = m;
        for (auto &x : out.a) {
            x = fp_neg(x, m.d);
        }
        return out;
    }

    friend bool operator==(const FMat &m, const FMat &n) {
        return m.d == n.d && m.rows == n.rows && m.cols == n.cols && m.a == n.a;
    }
};

namespace detail {

// Row-reduce in place with first-nonzero pivoting. Returns pivot column
// per row (in order) so kernels and solutions come out deterministic.
inline std::vector<size_t> rref_inplace(std::vector<uint32_t> &a, size_t nr, size_t nc, uint32_t d) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < nc && row < nr; col++) {
        size_t sel = row;
        while (sel < nr && a[sel * nc + col] == 0) {
            sel++;
        }
        if (sel == nr) {
            continue;
        }
        if (sel != row) {
            for (size_t c = 0; c < nc; c++) {
                std::swap(a[sel * nc + c], a[row * nc + c]);
            }
        }
        uint32_t s = fp_inv(a[row * nc + col], d);
        for (size_t c = 0; c < nc; c++) {
            a[row * nc + c] = fp_mul(a[row * nc + c], s, d);
        }
        for (size_t r = 0; r < nr; r++) {
            if (r == row || a[r * nc + col] == 0) {
                continue;
            }
            uint32_t f = a[r * nc + col];
            for (size_t c = 0; c < nc; c++) {
                a[r * nc + c] = fp_sub(a[r * nc + c], fp_mul(f, a[row * nc + c], d), d);
            }
        }
        pivots.push_back(col);
        row++;
    }
    return pivots;
}

}  // namespace detail

/// Any particular solution of M x = b, or absence when inconsistent.
inline std::optional<FVec> solve_linear(const FMat &m, const FVec &b) {
    if (m.d != b.d || m.rows != b.labels) {
        throw std::invalid_argument("index set mismatch in solve_linear");
    }
    size_t nr = m.nrows(), nc = m.ncols();
    std::vector<uint32_t> aug((nc + 1) * nr);
    for (size_t r = 0; r < nr; r++) {
        for (size_t c = 0; c < nc; c++) {
            aug[r * (nc + 1) + c] = m.at(r, c);
        }
        aug[r * (nc + 1) + nc] = b.v[r];
    }
    auto pivots = detail::rref_inplace(aug, nr, nc + 1, m.d);
    for (size_t p : pivots) {
        if (p == nc) {
            return std::nullopt;  // pivot in the augmented column
        }
    }
    FVec x(m.cols, m.d);
    for (size_t r = 0; r < pivots.size(); r++) {
        x.v[pivots[r]] = aug[r * (nc + 1) + nc];
    }
    return x;
}

/// Deterministic basis of {x : M x = 0}; empty for a trivial kernel.
inline std::vector<FVec> kernel_basis(const FMat &m) {
    size_t nr = m.nrows(), nc = m.ncols();
    std::vector<uint32_t> red = m.a;
    auto pivots = detail::rref_inplace(red, nr, nc, m.d);
    std::vector<bool> is_pivot(nc, false);
    for (size_t p : pivots) {
        is_pivot[p] = true;
    }
    std::vector<FVec> basis;
    for (size_t f = 0; f < nc; f++) {
        if (is_pivot[f]) {
            continue;
        }
        FVec x(m.cols, m.d);
        x.v[f] = 1;
        for (size_t r = 0; r < pivots.size(); r++) {
            x.v[pivots[r]] = fp_neg(red[r * nc + f], m.d);
        }
        basis.push_back(std::move(x));
    }
    return basis;
}

inline size_t rank(const FMat &m) {
    std::vector<uint32_t> red = m.a;
    return detail::rref_inplace(red, m.nrows(), m.ncols(), m.d).size();
}

/// Inverse of a square block; throws on non-square or singular input.
/// The result maps back: rows take the input's column labels.
inline FMat invert_block(const FMat &m) {
    size_t n = m.nrows();
    if (n != m.ncols()) {
        throw std::invalid_argument("invert_block: block is not square");
    }
    std::vector<uint32_t> aug(n * 2 * n, 0);
    for (size_t r = 0; r < n; r++) {
        for (size_t c = 0; c < n; c++) {
            aug[r * 2 * n + c] = m.at(r, c);
        }
        aug[r * 2 * n + n + r] = 1;
    }
    auto pivots = detail::rref_inplace(aug, n, 2 * n, m.d);
    if (pivots.size() < n || pivots[n - 1] != n - 1) {
        throw std::domain_error("invert_block: singular matrix");
    }
    FMat inv(m.cols, m.rows, m.d);
    for (size_t r = 0; r < n; r++) {
        for (size_t c = 0; c < n; c++) {
            inv.at(r, c) = aug[r * 2 * n + n + c];
        }
    }
    return inv;
}

}  // namespace graphcode

#endif
