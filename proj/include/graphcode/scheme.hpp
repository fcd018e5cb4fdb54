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

#ifndef GRAPHCODE_SCHEME_HPP
#define GRAPHCODE_SCHEME_HPP

/// Error-correcting scheme built from a certified coding graph: the family
/// of code isometries, the unitary error basis, the correction operators,
/// and the syndrome table.
///
/// With the operator conventions of hilbert.hpp, the isometry labelled by a
/// syndrome configuration g = q^L has matrix elements
///
///   v_g[q^J, q^I] = d^{-|J|/2} tau(Lam, (q^I, q^J, q^L))
///
/// and the following exact identities hold for admissible graphs (Lam_AB
/// denotes the block with rows A, columns B; bar denotes the inverse of
/// the J x (I+L) block):
///
///   (i)   v_g = z(Lam_JL g) v_0
///   (ii)  v_g w(xi^I) = eps(-p.q) z(-Lam_JI q) v_g z(p),        xi^I = (p,q)
///   (iii) w(xi^J) v_g = tau(Lam,(0,q,g)) z(p + Lam_JJ q) v_g z(Lam_IJ q)
///   (iv)  w(-Lam_JJ q, q) v_g = tau(Lam,(0,q,g)) v_g      for Lam_IJ q = 0
///
/// The syndrome relation pairs an error xi^J with (q^L, xi^I) through the
/// linear system
///
///   p^I = Lam_IJ q^J
///   p^J + Lam_JI q^I + Lam_JJ q^J - Lam_JL q^L = 0
///
/// whose unique solution is written in closed form below. Identity (iii)
/// then turns an error acting on the code space into a syndrome shift plus
/// a Weyl correction on the input register, which is what the decoder
/// exploits.

#include "coding_graph.hpp"
#include "hilbert.hpp"

namespace graphcode {

inline uint64_t fnv1a64(const std::string &s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline uint64_t graph_hash(const CodingGraph &g) {
    return fnv1a64(graph_to_json(g).dump());
}

/// Syndrome lookup: q^L configuration index -> correction phase-space
/// point on the inputs, absent for left-over syndromes.
struct SyndromeTable {
    Labels i_labels, l_labels;
    uint32_t d = 2;
    uint32_t t = 0;
    uint64_t graph_hash = 0;
    std::vector<std::optional<PhaseVec>> entries;

    size_t size() const {
        return entries.size();
    }
    /// The correction for a syndrome; the identity for left-over entries.
    PhaseVec correction(const FVec &q_l) const {
        const auto &e = entries[fvec_to_index(q_l, d)];
        return e ? *e : PhaseVec::zero(i_labels, d);
    }
    bool is_left_over(const FVec &q_l) const {
        return !entries[fvec_to_index(q_l, d)].has_value();
    }
    size_t left_over_count() const {
        size_t n = 0;
        for (const auto &e : entries) {
            n += !e.has_value();
        }
        return n;
    }
};

namespace detail {

inline FVec assemble_full_config(const CodingGraph &g, const FVec &qi, const FVec &qj, const FVec &ql) {
    return concat(concat(qi, qj), ql);
}

}  // namespace detail

/// Code isometry from the input register into the output register,
/// labelled by a syndrome configuration q^L.
inline DenseOp code_isometry(const CodingGraph &g, const FVec &q_l) {
    auto adm = check_admissible(g);
    if (!adm.ok) {
        throw std::invalid_argument("code_isometry needs an admissible graph: " + adm.failure);
    }
    Sites in(g.inputs, g.d), out(g.outputs, g.d);
    DenseOp v(out, in);
    double amp = 1.0 / std::sqrt(double(out.dim()));
    FVec qi(g.inputs, g.d), qj(g.outputs, g.d);
    for (size_t r = 0; r < out.dim(); r++) {
        index_to_config(r, qj.size(), g.d, qj.v.data());
        for (size_t c = 0; c < in.dim(); c++) {
            index_to_config(c, qi.size(), g.d, qi.v.data());
            FVec full = detail::assemble_full_config(g, qi, qj, q_l);
            v.m.at(r, c) = amp * unit_root(tau_exponent(g.adj, full), g.d);
        }
    }
    return v;
}

/// Single unitary implementing prepare/dynamics/measure/compensate of the
/// syndrome extraction in one Kraus operator: maps the output register to
/// the input+syndrome register with entries d^{-|J|/2} tau(-Lam, q^{IJL}).
inline DenseOp reverse_graph_isometry(const CodingGraph &g) {
    auto adm = check_admissible(g);
    if (!adm.ok) {
        throw std::invalid_argument("reverse_graph_isometry needs an admissible graph: " + adm.failure);
    }
    Sites in(g.outputs, g.d), out(g.is_vertices(), g.d);
    DenseOp u(out, in);
    FMat neg = -g.adj;
    double amp = 1.0 / std::sqrt(double(in.dim()));
    FVec qi(g.inputs, g.d), qj(g.outputs, g.d), ql(g.syndromes, g.d);
    size_t ni = qi.size(), nl = ql.size();
    std::vector<uint32_t> row_cfg(ni + nl);
    for (size_t r = 0; r < out.dim(); r++) {
        index_to_config(r, ni + nl, g.d, row_cfg.data());
        std::copy(row_cfg.begin(), row_cfg.begin() + ni, qi.v.begin());
        std::copy(row_cfg.begin() + ni, row_cfg.end(), ql.v.begin());
        for (size_t c = 0; c < in.dim(); c++) {
            index_to_config(c, qj.size(), g.d, qj.v.data());
            FVec full = detail::assemble_full_config(g, qi, qj, ql);
            u.m.at(r, c) = amp * unit_root(tau_exponent(neg, full), g.d);
        }
    }
    return u;
}

/// tau(Lam, q^J) with q^J embedded into the full vertex set; for admissible
/// graphs only the output-output edges contribute.
inline uint32_t output_phase_exponent(const CodingGraph &g, const FVec &q_j) {
    return tau_exponent(g.block(g.outputs, g.outputs), q_j);
}

/// Error basis element: tau(Lam, q^J) w(xi^J), unitary and trace-orthogonal
/// to the other elements.
inline DenseOp error_basis_op(const CodingGraph &g, const PhaseVec &xi_j, uint32_t t) {
    if (weight(xi_j) > t) {
        throw std::invalid_argument("error weight exceeds the scheme's t");
    }
    return unit_root(output_phase_exponent(g, xi_j.q), g.d) * weyl_op(xi_j);
}

/// The syndrome relation: 0 iff both defining equations hold exactly.
inline int gamma(const CodingGraph &g, const PhaseVec &xi_j, const FVec &q_l, const PhaseVec &xi_i) {
    FMat lam_ij = g.block(g.inputs, g.outputs);
    FMat lam_ji = g.block(g.outputs, g.inputs);
    FMat lam_jj = g.block(g.outputs, g.outputs);
    FMat lam_jl = g.block(g.outputs, g.syndromes);
    bool eq_i = xi_i.p == lam_ij * xi_j.q;
    FVec lhs = xi_j.p + lam_ji * xi_i.q + lam_jj * xi_j.q - lam_jl * q_l;
    return (eq_i && lhs.is_zero()) ? 0 : 1;
}

/// Unique (q^L, xi^I) solving the syndrome relation for a given error.
inline std::pair<FVec, PhaseVec> solve_syndrome(const CodingGraph &g, const FMat &inv_il_j, const PhaseVec &xi_j) {
    FMat lam_ij = g.block(g.inputs, g.outputs);
    FMat lam_jj = g.block(g.outputs, g.outputs);
    FVec rhs = xi_j.p + lam_jj * xi_j.q;
    FVec u = inv_il_j * rhs;  // over I+L
    FVec q_i = -u.sub(g.inputs);
    FVec q_l = u.sub(g.syndromes);
    FVec p_i = lam_ij * xi_j.q;
    return {q_l, PhaseVec(p_i, q_i)};
}

/// Everything derived from one certified graph.
struct Scheme {
    CodingGraph g;
    uint32_t t = 0;
    FMat inv_il_j;  // inverse of the J x (I+L) block; rows I+L, cols J
    PhaseBall ball;
    DenseOp v0;
    std::vector<DenseOp> isometries;  // indexed by q^L configuration
    SyndromeTable table;

    Sites input_sites() const {
        return Sites(g.inputs, g.d);
    }
    Sites output_sites() const {
        return Sites(g.outputs, g.d);
    }
    Sites syndrome_sites() const {
        return Sites(g.syndromes, g.d);
    }
    const DenseOp &isometry(const FVec &q_l) const {
        return isometries[fvec_to_index(q_l, g.d)];
    }
    // Feed-forward blocks, named by their role in the classical devices.
    FMat inv_i_j() const {
        return inv_il_j.block(g.inputs, g.outputs);
    }
    FMat inv_l_j() const {
        return inv_il_j.block(g.syndromes, g.outputs);
    }
    FMat inv_j_i() const {
        return inv_i_j().transpose();
    }
};

/// Builds the scheme; throws if the graph is not admissible, not certified
/// t-error-correcting, or if two errors force different corrections at one
/// syndrome (which the certification rules out).
inline Scheme build_scheme(const CodingGraph &g, uint32_t t) {
    Scheme s;
    s.g = g;
    s.t = t;
    auto adm = check_admissible(g);
    if (!adm.ok) {
        throw std::invalid_argument("graph is not admissible: " + adm.failure);
    }
    auto tec = check_t_error_correcting(g, t);
    if (!tec.ok) {
        throw std::invalid_argument("graph is not " + std::to_string(t) + "-error-correcting: " + tec.failure);
    }
    s.inv_il_j = adm.inverse_block;
    s.ball = phase_ball(g.outputs, g.d, t);

    Sites l_sites(g.syndromes, g.d);
    size_t n_syndromes = l_sites.dim();
    s.isometries.reserve(n_syndromes);
    for (size_t k = 0; k < n_syndromes; k++) {
        s.isometries.push_back(code_isometry(g, index_to_fvec(k, l_sites)));
    }
    s.v0 = s.isometries[0];

    s.table.i_labels = g.inputs;
    s.table.l_labels = g.syndromes;
    s.table.d = g.d;
    s.table.t = t;
    s.table.graph_hash = graph_hash(g);
    s.table.entries.assign(n_syndromes, std::nullopt);
    for (const PhaseVec &xi_j : s.ball.elements) {
        auto [q_l, xi_i] = solve_syndrome(g, s.inv_il_j, xi_j);
        auto &slot = s.table.entries[fvec_to_index(q_l, g.d)];
        if (slot && !(*slot == xi_i)) {
            throw std::runtime_error("syndrome collision: graph is not t-error-correcting");
        }
        slot = xi_i;
    }
    return s;
}

/// Max Frobenius deviation of the joint-eigenvector identity (iv) above:
/// w(-Lam_JJ q^J, q^J) v_g = tau(Lam, (0,q^J,q^L)) v_g. The argument must
/// satisfy Lam_IJ q^J = 0.
inline double stabilizer_eigen_defect(const CodingGraph &g, const FVec &q_j, const FVec &q_l) {
    FMat lam_ij = g.block(g.inputs, g.outputs);
    if (!(lam_ij * q_j).is_zero()) {
        throw std::invalid_argument("q^J is not in the kernel of the input/output block");
    }
    FMat lam_jj = g.block(g.outputs, g.outputs);
    PhaseVec stab(-(lam_jj * q_j), q_j);
    DenseOp v = code_isometry(g, q_l);
    Mat lhs = weyl_apply_left(stab, v.out_sites, v.m);
    FVec full = detail::assemble_full_config(g, FVec(g.inputs, g.d), q_j, q_l);
    cplx eig = unit_root(tau_exponent(g.adj, full), g.d);
    return mat_distance(lhs, eig * v.m);
}

/// Knill-Laflamme sweep: for every pair of ball errors the sandwiched
/// operator v_0^* w(xi_1)^* w(xi_2) v_0 must be a multiple of the identity.
/// Returns the largest off-identity component.
inline double verify_kl(const CodingGraph &g, uint32_t t) {
    auto adm = check_admissible(g);
    if (!adm.ok) {
        throw std::invalid_argument("verify_kl needs an admissible graph: " + adm.failure);
    }
    DenseOp v0 = code_isometry(g, FVec(g.syndromes, g.d));
    PhaseBall ball = phase_ball(g.outputs, g.d, t);
    Sites out(g.outputs, g.d);
    std::vector<Mat> wv;
    wv.reserve(ball.elements.size());
    for (const PhaseVec &xi : ball.elements) {
        wv.push_back(weyl_apply_left(xi, out, v0.m));
    }
    size_t din = v0.in_sites.dim();
    double worst = 0;
    for (size_t i = 0; i < wv.size(); i++) {
        Mat wi_dag = wv[i].adjoint();
        for (size_t j = 0; j < wv.size(); j++) {
            Mat m = wi_dag * wv[j];
            cplx c = m.trace() / double(din);
            double dev = mat_distance(m, c * Mat::identity(din));
            worst = std::max(worst, dev);
        }
    }
    return worst;
}

/// Exact form of the error/syndrome commutation identity behind the
/// decoder: with (q^L, xi^I) = table(xi^J) and the error basis phase
/// tau(Lam,q^J), the scalar on the right-hand side is
/// tau(Lam,q^J)^2 eps(p^I . q^I). Returns the matrix deviation.
inline double error_commutation_defect(const Scheme &s, const PhaseVec &xi_j) {
    const CodingGraph &g = s.g;
    auto [q_l, xi_i] = solve_syndrome(g, s.inv_il_j, xi_j);
    DenseOp w_err = error_basis_op(g, xi_j, s.t);
    Mat lhs = w_err.m * s.v0.m;
    uint32_t tau_j = output_phase_exponent(g, xi_j.q);
    uint32_t phase_e = fp_add(fp_add(tau_j, tau_j, g.d), dot(xi_i.p, xi_i.q), g.d);
    const DenseOp &v_g = s.isometry(q_l);
    Mat rhs_core = (v_g * weyl_op(xi_i)).m;
    return mat_distance(lhs, unit_root(phase_e, g.d) * rhs_core);
}

// ---------------------------------------------------------------------------
// Export: the syndrome table as JSON plus the graph hash and t.
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json scheme_to_json(const Scheme &s) {
    nlohmann::ordered_json j;
    j["graph_hash"] = s.table.graph_hash;
    j["d"] = s.g.d;
    j["t"] = s.t;
    auto table = nlohmann::ordered_json::array();
    Sites l_sites(s.g.syndromes, s.g.d);
    for (size_t k = 0; k < s.table.entries.size(); k++) {
        nlohmann::ordered_json row;
        FVec q_l = index_to_fvec(k, l_sites);
        row["q_L"] = q_l.v;
        if (s.table.entries[k]) {
            row["xi_I"] = {{"p", s.table.entries[k]->p.v}, {"q", s.table.entries[k]->q.v}};
        } else {
            row["xi_I"] = nullptr;
        }
        table.push_back(row);
    }
    j["table"] = table;
    return j;
}

}  // namespace graphcode

#endif
