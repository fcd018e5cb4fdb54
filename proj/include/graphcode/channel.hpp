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

#ifndef GRAPHCODE_CHANNEL_HPP
#define GRAPHCODE_CHANNEL_HPP

/// Quantum channels and instruments as Kraus families, stored in the
/// Schroedinger picture; Heisenberg action is available through adjoints.
/// Builds the encoding channel, the syndrome instrument, the conditional
/// correction and the composed decoder from a scheme, the admissible noise
/// class, and the channel-distance proxy used by the memory module.

#include <functional>
#include <random>

#include "scheme.hpp"

namespace graphcode {

struct QChannel {
    Sites in_sites, out_sites;
    std::vector<Mat> kraus;

    static QChannel identity(const Sites &s) {
        QChannel c;
        c.in_sites = s;
        c.out_sites = s;
        c.kraus.push_back(Mat::identity(s.dim()));
        return c;
    }

    /// Schroedinger action rho -> sum_K K rho K^*; defined for any linear
    /// operator argument by linear extension.
    Mat apply(const Mat &rho) const {
        Mat out(out_sites.dim(), out_sites.dim());
        for (const Mat &k : kraus) {
            out = out + k * rho * k.adjoint();
        }
        return out;
    }

    /// Heisenberg action a -> sum_K K^* a K.
    Mat apply_heisenberg(const Mat &a) const {
        Mat out(in_sites.dim(), in_sites.dim());
        for (const Mat &k : kraus) {
            out = out + k.adjoint() * a * k;
        }
        return out;
    }

    /// |sum_K K^* K - 1|_F; zero for a trace-preserving channel.
    double completeness_defect() const {
        Mat acc(in_sites.dim(), in_sites.dim());
        for (const Mat &k : kraus) {
            acc = acc + k.adjoint() * k;
        }
        return mat_distance(acc, Mat::identity(in_sites.dim()));
    }
};

inline QChannel compose(const QChannel &second, const QChannel &first) {
    if (!(first.out_sites == second.in_sites)) {
        throw std::invalid_argument("channels do not compose: register mismatch");
    }
    QChannel out;
    out.in_sites = first.in_sites;
    out.out_sites = second.out_sites;
    for (const Mat &k2 : second.kraus) {
        for (const Mat &k1 : first.kraus) {
            out.kraus.push_back(k2 * k1);
        }
    }
    return out;
}

/// Choi matrix sum_K vec(K) vec(K)^* with row-major vec; two channels are
/// equal as maps iff their Choi matrices coincide.
inline Mat choi_matrix(const QChannel &c) {
    size_t n = c.out_sites.dim() * c.in_sites.dim();
    Mat choi(n, n);
    for (const Mat &k : c.kraus) {
        for (size_t r = 0; r < n; r++) {
            cplx vr = k.a[r];
            if (vr == cplx(0, 0)) {
                continue;
            }
            for (size_t s = 0; s < n; s++) {
                choi.at(r, s) += vr * std::conj(k.a[s]);
            }
        }
    }
    return choi;
}

inline double choi_distance(const QChannel &a, const QChannel &b) {
    return mat_distance(choi_matrix(a), choi_matrix(b));
}

/// Classical-outcome-indexed family of CP maps whose sum is a channel.
struct Instrument {
    Sites in_sites, out_sites;
    Sites outcome_sites;  // classical register labelling outcomes
    // branch k covers outcome index k
    std::vector<std::vector<Mat>> branches;

    QChannel marginal() const {
        QChannel c;
        c.in_sites = in_sites;
        c.out_sites = out_sites;
        for (const auto &b : branches) {
            c.kraus.insert(c.kraus.end(), b.begin(), b.end());
        }
        return c;
    }

    /// Probability of each outcome on a unit-trace state.
    std::vector<double> outcome_probabilities(const Mat &rho) const {
        std::vector<double> probs;
        probs.reserve(branches.size());
        for (const auto &b : branches) {
            double p = 0;
            for (const Mat &k : b) {
                p += std::real((k * rho * k.adjoint()).trace());
            }
            probs.push_back(p);
        }
        return probs;
    }
};

// ---------------------------------------------------------------------------
// Channels of a scheme.
// ---------------------------------------------------------------------------

/// Encoder: the single isometric Kraus operator v_0.
inline QChannel encoder_channel(const Scheme &s) {
    QChannel c;
    c.in_sites = s.input_sites();
    c.out_sites = s.output_sites();
    c.kraus.push_back(s.v0.m);
    return c;
}

/// Syndrome measurement: outcome q^L has the single Kraus v_{q^L}^*.
inline Instrument syndrome_instrument(const Scheme &s) {
    Instrument ins;
    ins.in_sites = s.output_sites();
    ins.out_sites = s.input_sites();
    ins.outcome_sites = s.syndrome_sites();
    for (const DenseOp &v : s.isometries) {
        ins.branches.push_back({v.m.adjoint()});
    }
    return ins;
}

/// Correction for one syndrome outcome: w(xi^I)^* applied on the input
/// register, the identity for left-over syndromes.
inline Mat correction_kraus(const Scheme &s, const FVec &q_l) {
    PhaseVec xi = s.table.correction(q_l);
    return weyl_op(xi).m.adjoint();
}

/// Decoder D = correction after syndrome measurement: Kraus family
/// { w(xi^I_{q^L})^* v_{q^L}^* } over all syndromes.
inline QChannel decoder_channel(const Scheme &s) {
    QChannel c;
    c.in_sites = s.output_sites();
    c.out_sites = s.input_sites();
    Sites l_sites = s.syndrome_sites();
    for (size_t k = 0; k < s.isometries.size(); k++) {
        FVec q_l = index_to_fvec(k, l_sites);
        c.kraus.push_back(correction_kraus(s, q_l) * s.isometries[k].m.adjoint());
    }
    return c;
}

// ---------------------------------------------------------------------------
// The admissible noise class: channels whose Kraus operators are linear
// combinations of the scheme's error basis.
// ---------------------------------------------------------------------------

/// Weyl-diagonal channel from outcome probabilities: Kraus sqrt(p) w(xi).
inline QChannel weyl_diagonal_noise(const Sites &sites, const std::vector<std::pair<PhaseVec, double>> &probs) {
    double total = 0;
    for (const auto &[xi, p] : probs) {
        if (p < -1e-12) {
            throw std::invalid_argument("negative probability in noise spec");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("noise probabilities do not sum to 1");
    }
    QChannel c;
    c.in_sites = sites;
    c.out_sites = sites;
    for (const auto &[xi, p] : probs) {
        if (p <= 0) {
            continue;
        }
        c.kraus.push_back(std::sqrt(p) * weyl_op(xi).m);
    }
    return c;
}

/// Channel T(a) = sum_{x,y} t_{x,y} w_x^* a w_y (Heisenberg) from a PSD
/// coefficient matrix over the given error labels. The matrix must be PSD
/// and satisfy the trace-preservation constraint; both are checked. Kraus
/// operators come from a diagonally pivoted Cholesky factor, so each one
/// is a combination of the listed error operators.
inline QChannel noise_from_matrix(const Sites &sites, const std::vector<PhaseVec> &labels, const Mat &tmat,
                                  double tol = 1e-9) {
    size_t n = labels.size();
    if (tmat.nr != n || tmat.nc != n) {
        throw std::invalid_argument("coefficient matrix does not match the label count");
    }
    for (size_t r = 0; r < n; r++) {
        for (size_t c = 0; c < n; c++) {
            if (std::abs(tmat.at(r, c) - std::conj(tmat.at(c, r))) > tol) {
                throw std::invalid_argument("coefficient matrix is not Hermitian");
            }
        }
    }
    // The Schroedinger form is rho -> sum t_{x,y} w_y rho w_x^*, so the
    // Kraus coefficient matrix C (columns = Kraus operators) must satisfy
    // C C^* = t^T. Diagonally pivoted outer-product Cholesky, with an
    // index permutation so factor rows stay aligned with `labels`.
    Mat work = tmat.adjoint();  // t^T for Hermitian t
    Mat factor(n, n);
    std::vector<size_t> perm(n);
    for (size_t k = 0; k < n; k++) {
        perm[k] = k;
    }
    size_t rank_found = 0;
    for (size_t k = 0; k < n; k++) {
        size_t best = k;
        for (size_t j = k; j < n; j++) {
            if (std::real(work.at(perm[j], perm[j])) > std::real(work.at(perm[best], perm[best]))) {
                best = j;
            }
        }
        std::swap(perm[k], perm[best]);
        double pv = std::real(work.at(perm[k], perm[k]));
        if (pv < -1e3 * tol) {
            throw std::invalid_argument("coefficient matrix is not positive semidefinite");
        }
        if (pv <= tol) {
            break;
        }
        double s = std::sqrt(pv);
        for (size_t r = k; r < n; r++) {
            factor.at(perm[r], rank_found) = work.at(perm[r], perm[k]) / s;
        }
        for (size_t r = k; r < n; r++) {
            for (size_t c = k; c < n; c++) {
                work.at(perm[r], perm[c]) -=
                    factor.at(perm[r], rank_found) * std::conj(factor.at(perm[c], rank_found));
            }
        }
        rank_found++;
    }
    // Residual of the untouched trailing block catches indefinite matrices
    // whose diagonal never goes negative.
    double residual = 0;
    for (size_t r = rank_found; r < n; r++) {
        for (size_t c = rank_found; c < n; c++) {
            residual = std::max(residual, std::abs(work.at(perm[r], perm[c])));
        }
    }
    if (residual > 1e3 * tol) {
        throw std::invalid_argument("coefficient matrix is not positive semidefinite");
    }
    QChannel out;
    out.in_sites = sites;
    out.out_sites = sites;
    std::vector<Mat> weyls;
    weyls.reserve(n);
    for (const PhaseVec &xi : labels) {
        weyls.push_back(weyl_op(xi).m);
    }
    for (size_t r = 0; r < rank_found; r++) {
        Mat k(sites.dim(), sites.dim());
        for (size_t y = 0; y < n; y++) {
            cplx coeff = factor.at(y, r);
            if (coeff == cplx(0, 0)) {
                continue;
            }
            for (size_t e = 0; e < k.a.size(); e++) {
                k.a[e] += coeff * weyls[y].a[e];
            }
        }
        out.kraus.push_back(std::move(k));
    }
    if (out.completeness_defect() > 1e-6) {
        throw std::invalid_argument("coefficient matrix does not give a trace-preserving channel");
    }
    return out;
}

/// Expansion coefficients of an operator in the Weyl basis of `sites`:
/// tr(w(xi)^* A) / dim. Weyl operators are monomial matrices (one entry
/// per row), so each coefficient is a single O(dim) sweep.
inline std::vector<cplx> weyl_coefficients(const Sites &sites, const Mat &op) {
    size_t dim = sites.dim();
    uint32_t d = sites.d;
    size_t n = sites.n();
    std::vector<cplx> coeffs;
    coeffs.reserve(dim * dim);
    std::vector<uint32_t> ucfg(n), vcfg(n), qcfg(n), pcfg(n);
    for (size_t pi = 0; pi < dim; pi++) {
        index_to_config(pi, n, d, pcfg.data());
        for (size_t qi = 0; qi < dim; qi++) {
            index_to_config(qi, n, d, qcfg.data());
            // w(p,q)[u, u+q] = chi(p, u); Frobenius pairing with A.
            cplx acc = 0;
            for (size_t u = 0; u < dim; u++) {
                index_to_config(u, n, d, ucfg.data());
                uint32_t e = 0;
                for (size_t k = 0; k < n; k++) {
                    e = fp_add(e, fp_mul(pcfg[k], ucfg[k], d), d);
                    vcfg[k] = fp_add(ucfg[k], qcfg[k], d);
                }
                acc += std::conj(unit_root(e, d)) * op.at(u, config_to_index(vcfg.data(), n, d));
            }
            coeffs.push_back(acc / double(dim));
        }
    }
    return coeffs;
}

/// Checks that every Kraus operator of T lies in the span of the weight-t
/// ball of Weyl operators; throws otherwise.
inline void require_noise_in_class(const QChannel &noise, uint32_t t, double tol = 1e-8) {
    const Sites &s = noise.in_sites;
    size_t dim = s.dim();
    for (const Mat &k : noise.kraus) {
        auto coeffs = weyl_coefficients(s, k);
        for (size_t pi = 0; pi < dim; pi++) {
            for (size_t qi = 0; qi < dim; qi++) {
                PhaseVec xi(index_to_fvec(pi, s), index_to_fvec(qi, s));
                if (weight(xi) > t && std::abs(coeffs[pi * dim + qi]) > tol) {
                    throw std::invalid_argument("noise has support on errors of weight > t");
                }
            }
        }
    }
}

/// Uniform double in [0, 1) from the raw engine stream (portable across
/// standard-library implementations, unlike the std distributions).
inline double uniform01(std::mt19937_64 &rng) {
    return double(rng() >> 11) * (1.0 / 9007199254740992.0);
}

/// Standard complex Gaussian via Box-Muller.
inline cplx gaussian_cplx(std::mt19937_64 &rng) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    double r = std::sqrt(-2.0 * std::log(u1 + 1e-300));
    return cplx(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)) * M_SQRT1_2;
}

/// Haar-ish random unitary: QR of a complex Gaussian matrix by modified
/// Gram-Schmidt. Exactly unitary to machine precision.
inline Mat random_unitary(size_t n, std::mt19937_64 &rng) {
    Mat a(n, n);
    for (auto &x : a.a) {
        x = gaussian_cplx(rng);
    }
    for (size_t c = 0; c < n; c++) {
        for (size_t prev = 0; prev < c; prev++) {
            cplx ip = 0;
            for (size_t r = 0; r < n; r++) {
                ip += std::conj(a.at(r, prev)) * a.at(r, c);
            }
            for (size_t r = 0; r < n; r++) {
                a.at(r, c) -= ip * a.at(r, prev);
            }
        }
        double nrm = 0;
        for (size_t r = 0; r < n; r++) {
            nrm += std::norm(a.at(r, c));
        }
        nrm = std::sqrt(nrm);
        for (size_t r = 0; r < n; r++) {
            a.at(r, c) /= nrm;
        }
    }
    return a;
}

/// Random trace-preserving channel whose Kraus operators stay inside the
/// weight-t error span: a convex mixture of unitaries, each supported on a
/// single site. The coefficient matrix of such a mixture is PSD with full
/// off-diagonal structure. Deterministic for a given seed.
inline QChannel random_noise_in_class(const Sites &sites, uint32_t t, std::mt19937_64 &rng, size_t terms = 3) {
    if (t < 1) {
        throw std::invalid_argument("random noise needs t >= 1");
    }
    std::vector<double> lambda(terms);
    double total = 0;
    for (auto &l : lambda) {
        l = uniform01(rng) + 1e-3;
        total += l;
    }
    QChannel c;
    c.in_sites = sites;
    c.out_sites = sites;
    for (size_t k = 0; k < terms; k++) {
        size_t site = rng() % sites.n();
        Sites one({sites.labels[site]}, sites.d);
        Mat u = random_unitary(sites.d, rng);
        Mat big = embed_op(DenseOp(one, one, u), sites).m;
        c.kraus.push_back(std::sqrt(lambda[k] / total) * big);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Channel distance proxy.
// ---------------------------------------------------------------------------

/// Max over the Weyl input basis of |T1(w) - T2(w)|_F / |w|_F. Zero iff the
/// channels agree on the full operator basis. This is the computable proxy
/// used for decoherence comparisons; it is not the cb norm.
inline double map_distance(const std::function<Mat(const Mat &)> &apply1, const std::function<Mat(const Mat &)> &apply2,
                           const Sites &in_sites) {
    size_t dim = in_sites.dim();
    double wnorm = std::sqrt(double(dim));
    double worst = 0;
    for (size_t pi = 0; pi < dim; pi++) {
        for (size_t qi = 0; qi < dim; qi++) {
            PhaseVec xi(index_to_fvec(pi, in_sites), index_to_fvec(qi, in_sites));
            Mat w = weyl_op(xi).m;
            worst = std::max(worst, mat_distance(apply1(w), apply2(w)) / wnorm);
        }
    }
    return worst;
}

inline double channel_distance(const QChannel &a, const QChannel &b) {
    if (!(a.in_sites == b.in_sites) || !(a.out_sites == b.out_sites)) {
        throw std::invalid_argument("channel_distance: register mismatch");
    }
    return map_distance([&](const Mat &m) { return a.apply(m); }, [&](const Mat &m) { return b.apply(m); },
                        a.in_sites);
}

// ---------------------------------------------------------------------------
// Theorem-style verification: encode, corrupt, decode, compare.
// ---------------------------------------------------------------------------

/// Max deviation of decode(T(encode(a))) from a over the full input
/// operator basis, for noise supported on the scheme's error span.
inline double verify_exact_correction(const Scheme &s, const QChannel &noise, double support_tol = 1e-8) {
    require_noise_in_class(noise, s.t, support_tol);
    QChannel enc = encoder_channel(s);
    QChannel dec = decoder_channel(s);
    Sites in = s.input_sites();
    return map_distance([&](const Mat &m) { return dec.apply(noise.apply(enc.apply(m))); },
                        [](const Mat &m) { return m; }, in);
}

}  // namespace graphcode

#endif
