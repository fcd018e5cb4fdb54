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

#ifndef GRAPHCODE_PHASE_SPACE_HPP
#define GRAPHCODE_PHASE_SPACE_HPP

/// Discrete phase space over F_d: the additive character eps, the symmetric
/// bicharacter chi, the graph phase tau, and weight-bounded enumeration of
/// phase-space points.
///
/// Conventions (fixed once for the whole library):
///   eps(x)   = exp(2*pi*i*x/d)
///   chi(p,q) = eps(sum_k p_k q_k)
///   tau(G,q) = eps(sum_{k<l} G_{kl} q_k q_l)   for symmetric zero-diagonal G,
/// where k<l runs over the declared vertex order. tau satisfies the cocycle
///   tau(G, q1+q2) = tau(G,q1) tau(G,q2) chi(G q1, q2)
/// for every prime d, including d = 2.

#include <cmath>
#include <complex>

#include "fp.hpp"

namespace graphcode {

using cplx = std::complex<double>;

/// exp(2*pi*i*k/d), computed from a residue to keep phases exactly cyclic.
inline cplx unit_root(uint32_t k, uint32_t d) {
    double angle = 2.0 * M_PI * double(k % d) / double(d);
    return cplx(std::cos(angle), std::sin(angle));
}

inline cplx epsilon(uint32_t x, uint32_t d) {
    return unit_root(x, d);
}

inline cplx epsilon(Fp x) {
    return unit_root(x.v, x.d);
}

/// Residue exponent of chi(p,q); apply unit_root to get the phase.
inline uint32_t chi_exponent(const FVec &p, const FVec &q) {
    return dot(p, q);
}

inline cplx chi(const FVec &p, const FVec &q) {
    return unit_root(chi_exponent(p, q), p.d);
}

inline void require_symmetric_zero_diagonal(const FMat &g) {
    if (g.rows != g.cols) {
        throw std::invalid_argument("adjacency matrix must be square on one vertex set");
    }
    for (size_t r = 0; r < g.nrows(); r++) {
        if (g.at(r, r) != 0) {
            throw std::invalid_argument("adjacency matrix has a self-loop at '" + g.rows[r] + "'");
        }
        for (size_t c = r + 1; c < g.ncols(); c++) {
            if (g.at(r, c) != g.at(c, r)) {
                throw std::invalid_argument("adjacency matrix is not symmetric");
            }
        }
    }
}

/// Residue exponent of tau(G, q) = eps(sum_{k<l} G_{kl} q_k q_l).
inline uint32_t tau_exponent(const FMat &g, const FVec &q) {
    if (g.cols != q.labels) {
        throw std::invalid_argument("tau: vector labels do not match the graph vertex set");
    }
    uint32_t acc = 0;
    for (size_t k = 0; k < q.size(); k++) {
        if (q.v[k] == 0) {
            continue;
        }
        for (size_t l = k + 1; l < q.size(); l++) {
            acc = fp_add(acc, fp_mul(g.at(k, l), fp_mul(q.v[k], q.v[l], g.d), g.d), g.d);
        }
    }
    return acc;
}

inline cplx tau(const FMat &g, const FVec &q) {
    require_symmetric_zero_diagonal(g);
    return unit_root(tau_exponent(g, q), g.d);
}

/// A discrete phase-space point: momentum and position over one index set.
struct PhaseVec {
    FVec p, q;

    PhaseVec() = default;
    PhaseVec(FVec momentum, FVec position) : p(std::move(momentum)), q(std::move(position)) {
        if (p.d != q.d || p.labels != q.labels) {
            throw std::invalid_argument("phase-space point needs matching momentum/position index sets");
        }
    }

    static PhaseVec zero(const Labels &ls, uint32_t d) {
        return PhaseVec(FVec(ls, d), FVec(ls, d));
    }

    const Labels &labels() const {
        return p.labels;
    }
    uint32_t modulus() const {
        return p.d;
    }
    bool is_zero() const {
        return p.is_zero() && q.is_zero();
    }

    friend PhaseVec operator+(const PhaseVec &a, const PhaseVec &b) {
        return PhaseVec(a.p + b.p, a.q + b.q);
    }
    friend PhaseVec operator-(const PhaseVec &a) {
        return PhaseVec(-a.p, -a.q);
    }
    friend bool operator==(const PhaseVec &a, const PhaseVec &b) {
        return a.p == b.p && a.q == b.q;
    }

    PhaseVec sub(const Labels &subset) const {
        return PhaseVec(p.sub(subset), q.sub(subset));
    }
};

/// Number of sites where (p_j, q_j) != (0, 0).
inline uint32_t weight(const PhaseVec &xi) {
    uint32_t w = 0;
    for (size_t k = 0; k < xi.p.size(); k++) {
        if (xi.p.v[k] != 0 || xi.q.v[k] != 0) {
            w++;
        }
    }
    return w;
}

/// All phase-space points of weight <= t over the given sites, enumerated
/// once each in a fixed deterministic order: by weight, then by the chosen
/// site subset (lexicographic), then by the nonzero (p,q) values per site.
struct PhaseBall {
    Labels labels;
    uint32_t d = 2;
    uint32_t t = 0;
    std::vector<PhaseVec> elements;
};

namespace detail {

inline void ball_fill_sites(const Labels &ls, uint32_t d, const std::vector<size_t> &sites, size_t pos, PhaseVec &cur,
                            std::vector<PhaseVec> &out) {
    if (pos == sites.size()) {
        out.push_back(cur);
        return;
    }
    size_t site = sites[pos];
    for (uint32_t pv = 0; pv < d; pv++) {
        for (uint32_t qv = 0; qv < d; qv++) {
            if (pv == 0 && qv == 0) {
                continue;
            }
            cur.p.v[site] = pv;
            cur.q.v[site] = qv;
            ball_fill_sites(ls, d, sites, pos + 1, cur, out);
        }
    }
    cur.p.v[site] = 0;
    cur.q.v[site] = 0;
}

inline void ball_choose(const Labels &ls, uint32_t d, uint32_t w, size_t first, std::vector<size_t> &sites,
                        PhaseVec &cur, std::vector<PhaseVec> &out) {
    if (sites.size() == w) {
        ball_fill_sites(ls, d, sites, 0, cur, out);
        return;
    }
    for (size_t s = first; s + (w - sites.size()) <= ls.size(); s++) {
        sites.push_back(s);
        ball_choose(ls, d, w, s + 1, sites, cur, out);
        sites.pop_back();
    }
}

}  // namespace detail

inline PhaseBall phase_ball(const Labels &ls, uint32_t d, uint32_t t) {
    PhaseBall ball;
    ball.labels = ls;
    ball.d = d;
    ball.t = t;
    PhaseVec cur = PhaseVec::zero(ls, d);
    for (uint32_t w = 0; w <= t && w <= ls.size(); w++) {
        std::vector<size_t> sites;
        detail::ball_choose(ls, d, w, 0, sites, cur, ball.elements);
    }
    return ball;
}

}  // namespace graphcode

#endif
