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

#ifndef GRAPHCODE_CODING_GRAPH_HPP
#define GRAPHCODE_CODING_GRAPH_HPP

/// Coding graphs: F_d-weighted graphs on disjoint input (I), output (J) and
/// syndrome (L) vertex sets, their admissibility and t-error-correcting
/// certification, and a seeded search that finds certified graphs.

#include <random>
#include <sstream>

#include <json.hpp>

#include "fp.hpp"

namespace graphcode {

/// Weighted graph on I + J + L with symmetric zero-diagonal adjacency
/// matrix over F_d. Vertex order is the declaration order I, J, L; all
/// block indexing below follows it.
struct CodingGraph {
    uint32_t d = 2;
    Labels inputs, outputs, syndromes;
    FMat adj;  // on inputs + outputs + syndromes

    CodingGraph() = default;
    CodingGraph(uint32_t modulus, Labels in, Labels out, Labels syn)
        : d(modulus), inputs(std::move(in)), outputs(std::move(out)), syndromes(std::move(syn)) {
        require_prime(d);
        Labels all = vertices();
        require_no_duplicates(all);
        adj = FMat(all, all, d);
    }

    Labels vertices() const {
        return labels_concat(labels_concat(inputs, outputs), syndromes);
    }
    Labels io_vertices() const {
        return labels_concat(inputs, outputs);
    }
    Labels is_vertices() const {
        return labels_concat(inputs, syndromes);
    }

    void add_edge(const Label &u, const Label &v, uint32_t w) {
        if (u == v) {
            throw std::invalid_argument("self-loop at '" + u + "'");
        }
        w %= d;
        if (w == 0) {
            throw std::invalid_argument("edge weight must be nonzero in F_" + std::to_string(d));
        }
        Labels all = adj.rows;
        size_t ui = label_index(all, u), vi = label_index(all, v);
        if (adj.at(ui, vi) != 0) {
            throw std::invalid_argument("duplicate edge " + u + "-" + v);
        }
        adj.at(ui, vi) = w;
        adj.at(vi, ui) = w;
    }

    FMat block(const Labels &rs, const Labels &cs) const {
        return adj.block(rs, cs);
    }

    /// Edges as (u, v, weight) with u before v in vertex order.
    std::vector<std::tuple<Label, Label, uint32_t>> edges() const {
        std::vector<std::tuple<Label, Label, uint32_t>> out;
        for (size_t r = 0; r < adj.nrows(); r++) {
            for (size_t c = r + 1; c < adj.ncols(); c++) {
                if (adj.at(r, c) != 0) {
                    out.emplace_back(adj.rows[r], adj.rows[c], adj.at(r, c));
                }
            }
        }
        return out;
    }
};

/// Result of the admissibility check. On success carries the inverse of
/// the J x (I+L) block, which everything downstream reuses.
struct AdmissibleReport {
    bool ok = false;
    std::string failure;
    FMat inverse_block;  // rows I+L, cols J; defined when ok
};

/// Condition 1: the block with rows J and columns I+L is invertible.
/// Condition 2: no edges inside I + L (covers input-syndrome edges as well
/// as input-input and syndrome-syndrome ones).
inline AdmissibleReport check_admissible(const CodingGraph &g) {
    AdmissibleReport rep;
    Labels is = g.is_vertices();
    if (!g.block(is, is).is_zero()) {
        rep.failure = "edges present among input/syndrome vertices";
        return rep;
    }
    FMat j_il = g.block(g.outputs, is);
    if (j_il.nrows() != j_il.ncols()) {
        rep.failure = "|J| != |I| + |L|, block cannot be invertible";
        return rep;
    }
    try {
        rep.inverse_block = invert_block(j_il);
    } catch (const std::domain_error &) {
        rep.failure = "output/(input+syndrome) block is singular";
        return rep;
    }
    rep.ok = true;
    return rep;
}

/// Result of the 2t-subset certification, with a concrete witness when it
/// fails: the violating output subset E and the kernel vector on I+E.
struct TECReport {
    bool ok = false;
    uint32_t t = 0;
    size_t subsets_checked = 0;
    Labels witness_subset;
    std::optional<FVec> witness_vector;
    std::string failure;
};

namespace detail {

inline bool next_subset(std::vector<size_t> &idx, size_t n) {
    size_t k = idx.size();
    for (size_t i = k; i-- > 0;) {
        if (idx[i] < n - (k - 1 - i) - 1) {
            idx[i]++;
            for (size_t j = i + 1; j < k; j++) {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// For every output subset E with |E| <= 2t, every kernel vector q^{IE} of
/// the block (rows J\E, cols I+E) must have q^I = 0 and lie in the kernel
/// of the (I x E) block. Linear in the kernel, so checking a basis suffices.
inline TECReport check_t_error_correcting(const CodingGraph &g, uint32_t t) {
    TECReport rep;
    rep.t = t;
    auto adm = check_admissible(g);
    if (!adm.ok) {
        rep.failure = "graph is not admissible: " + adm.failure;
        return rep;
    }
    size_t nj = g.outputs.size();
    for (uint32_t k = 0; k <= 2 * t && k <= nj; k++) {
        std::vector<size_t> idx(k);
        for (size_t i = 0; i < k; i++) {
            idx[i] = i;
        }
        bool more = true;
        while (more) {
            Labels e, rest;
            {
                size_t p = 0;
                for (size_t j = 0; j < nj; j++) {
                    if (p < k && idx[p] == j) {
                        e.push_back(g.outputs[j]);
                        p++;
                    } else {
                        rest.push_back(g.outputs[j]);
                    }
                }
            }
            rep.subsets_checked++;
            Labels ie = labels_concat(g.inputs, e);
            FMat blk = g.block(rest, ie);
            FMat i_e = g.block(g.inputs, e);
            for (const FVec &q : kernel_basis(blk)) {
                FVec qi = q.sub(g.inputs);
                FVec qe = q.sub(e);
                if (!qi.is_zero() || !(i_e * qe).is_zero()) {
                    rep.witness_subset = e;
                    rep.witness_vector = q;
                    rep.failure = "kernel vector violates the correction condition";
                    return rep;
                }
            }
            more = k > 0 && detail::next_subset(idx, nj);
            if (k == 0) {
                more = false;
            }
        }
    }
    rep.ok = true;
    return rep;
}

// ---------------------------------------------------------------------------
// JSON round-trip.
//
// Format: {"d": int, "inputs": [...], "outputs": [...], "syndromes": [...],
//          "edges": [[u, v, weight], ...]} with weights in [1, d).
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json graph_to_json(const CodingGraph &g) {
    nlohmann::ordered_json j;
    j["d"] = g.d;
    j["inputs"] = g.inputs;
    j["outputs"] = g.outputs;
    j["syndromes"] = g.syndromes;
    auto edges = nlohmann::ordered_json::array();
    for (const auto &[u, v, w] : g.edges()) {
        edges.push_back({u, v, w});
    }
    j["edges"] = edges;
    return j;
}

inline CodingGraph graph_from_json(const nlohmann::json &j) {
    if (!j.is_object() || !j.contains("d") || !j.contains("inputs") || !j.contains("outputs") ||
        !j.contains("syndromes") || !j.contains("edges")) {
        throw std::invalid_argument("graph spec must have d, inputs, outputs, syndromes, edges");
    }
    CodingGraph g(j.at("d").get<uint32_t>(), j.at("inputs").get<Labels>(), j.at("outputs").get<Labels>(),
                  j.at("syndromes").get<Labels>());
    for (const auto &e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3) {
            throw std::invalid_argument("edge entries must be [u, v, weight]");
        }
        int64_t w = e.at(2).get<int64_t>();
        if (w < 1 || w >= int64_t(g.d)) {
            throw std::invalid_argument("edge weight out of range [1, d)");
        }
        g.add_edge(e.at(0).get<Label>(), e.at(1).get<Label>(), uint32_t(w));
    }
    return g;
}

inline CodingGraph graph_from_json_text(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw std::invalid_argument(std::string("graph spec is not valid JSON: ") + e.what());
    }
    return graph_from_json(j);
}

// ---------------------------------------------------------------------------
// Search.
// ---------------------------------------------------------------------------

struct SearchParams {
    uint32_t d = 2;
    size_t n_inputs = 1;
    size_t n_outputs = 5;
    uint32_t t = 1;
    uint64_t seed = 0;
    uint64_t budget = 200000;  // candidate graphs to try
};

namespace detail {

// Candidate edge slots: I-J, J-J and J-L pairs (edges inside I+L would
// break admissibility outright, so they are never drawn).
inline std::vector<std::pair<size_t, size_t>> candidate_edges(const CodingGraph &g) {
    Labels all = g.vertices();
    size_t ni = g.inputs.size(), nj = g.outputs.size();
    std::vector<std::pair<size_t, size_t>> slots;
    for (size_t i = 0; i < ni; i++) {
        for (size_t j = 0; j < nj; j++) {
            slots.emplace_back(i, ni + j);
        }
    }
    for (size_t j1 = 0; j1 < nj; j1++) {
        for (size_t j2 = j1 + 1; j2 < nj; j2++) {
            slots.emplace_back(ni + j1, ni + j2);
        }
    }
    for (size_t j = 0; j < nj; j++) {
        for (size_t l = ni + nj; l < all.size(); l++) {
            slots.emplace_back(ni + j, l);
        }
    }
    return slots;
}

inline void assign_weights(CodingGraph &g, const std::vector<std::pair<size_t, size_t>> &slots,
                           const std::vector<uint32_t> &w) {
    for (auto &x : g.adj.a) {
        x = 0;
    }
    for (size_t k = 0; k < slots.size(); k++) {
        g.adj.at(slots[k].first, slots[k].second) = w[k];
        g.adj.at(slots[k].second, slots[k].first) = w[k];
    }
}

}  // namespace detail

/// Searches zero-diagonal symmetric weighted graphs for one that passes
/// both checkers. Exhaustive when there are at most 12 candidate edge
/// slots, seeded-random otherwise; deterministic for a given seed.
inline std::optional<CodingGraph> search_graph(const SearchParams &params) {
    if (params.n_outputs < params.n_inputs) {
        throw std::invalid_argument("need at least as many outputs as inputs");
    }
    Labels inputs, outputs, syndromes;
    for (size_t k = 0; k < params.n_inputs; k++) {
        inputs.push_back("i" + std::to_string(k + 1));
    }
    for (size_t k = 0; k < params.n_outputs; k++) {
        outputs.push_back("o" + std::to_string(k + 1));
    }
    for (size_t k = 0; k < params.n_outputs - params.n_inputs; k++) {
        syndromes.push_back("s" + std::to_string(k + 1));
    }
    CodingGraph g(params.d, inputs, outputs, syndromes);
    auto slots = detail::candidate_edges(g);
    std::vector<uint32_t> w(slots.size(), 0);

    auto certified = [&]() {
        return check_admissible(g).ok && check_t_error_correcting(g, params.t).ok;
    };

    if (slots.size() <= 12) {
        // Exhaustive enumeration over all weight assignments (d options per slot).
        uint64_t total = 1;
        for (size_t k = 0; k < slots.size(); k++) {
            total *= params.d;
        }
        for (uint64_t code = 0; code < total && code < params.budget; code++) {
            uint64_t c = code;
            for (size_t k = 0; k < slots.size(); k++) {
                w[k] = uint32_t(c % params.d);
                c /= params.d;
            }
            detail::assign_weights(g, slots, w);
            if (certified()) {
                return std::optional<CodingGraph>(g);
            }
        }
        return std::optional<CodingGraph>();
    }

    std::mt19937_64 rng(params.seed);
    for (uint64_t trial = 0; trial < params.budget; trial++) {
        for (size_t k = 0; k < slots.size(); k++) {
            // Half the slots empty on average, weights uniform otherwise.
            uint64_t r = rng();
            if (r & 1) {
                w[k] = 0;
            } else {
                w[k] = 1 + uint32_t((r >> 1) % (params.d - 1));
            }
        }
        detail::assign_weights(g, slots, w);
        if (certified()) {
            return std::optional<CodingGraph>(g);
        }
    }
    return std::optional<CodingGraph>();
}

}  // namespace graphcode

#endif
