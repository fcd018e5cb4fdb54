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

#ifndef GRAPHCODE_TESTS_HELPERS_HPP
#define GRAPHCODE_TESTS_HELPERS_HPP

#include <random>

#include "graphcode/coding_graph.hpp"
#include "graphcode/hilbert.hpp"

namespace graphcode::testing {

inline Labels make_labels(const std::string &prefix, size_t n) {
    Labels out;
    for (size_t k = 0; k < n; k++) {
        out.push_back(prefix + std::to_string(k + 1));
    }
    return out;
}

inline FVec random_fvec(const Labels &ls, uint32_t d, std::mt19937_64 &rng) {
    FVec v(ls, d);
    for (auto &x : v.v) {
        x = uint32_t(rng() % d);
    }
    return v;
}

inline PhaseVec random_phase_vec(const Labels &ls, uint32_t d, std::mt19937_64 &rng) {
    return PhaseVec(random_fvec(ls, d, rng), random_fvec(ls, d, rng));
}

inline FMat random_symmetric_zero_diag(const Labels &ls, uint32_t d, std::mt19937_64 &rng) {
    FMat m(ls, ls, d);
    for (size_t r = 0; r < ls.size(); r++) {
        for (size_t c = r + 1; c < ls.size(); c++) {
            uint32_t w = uint32_t(rng() % d);
            m.at(r, c) = w;
            m.at(c, r) = w;
        }
    }
    return m;
}

inline FMat random_fmat(const Labels &rows, const Labels &cols, uint32_t d, std::mt19937_64 &rng) {
    FMat m(rows, cols, d);
    for (auto &x : m.a) {
        x = uint32_t(rng() % d);
    }
    return m;
}

inline Mat random_mat(size_t nr, size_t nc, std::mt19937_64 &rng) {
    auto u01 = [&rng]() {
        return double(rng() >> 11) * (1.0 / 9007199254740992.0);
    };
    Mat m(nr, nc);
    for (auto &x : m.a) {
        x = cplx(2 * u01() - 1, 2 * u01() - 1);
    }
    return m;
}

/// Admissible but NOT 1-error-correcting: one input on a five-output ring,
/// four syndromes pinned to distinct outputs. Useful as a negative fixture
/// for the certification and Knill-Laflamme failure paths.
inline CodingGraph ring_graph_uncertified(uint32_t d) {
    CodingGraph g(d, {"in"}, {"o1", "o2", "o3", "o4", "o5"}, {"s1", "s2", "s3", "s4"});
    g.add_edge("in", "o1", 1);
    g.add_edge("o1", "o2", 1);
    g.add_edge("o2", "o3", 1);
    g.add_edge("o3", "o4", 1);
    g.add_edge("o4", "o5", 1);
    g.add_edge("o5", "o1", 1);
    g.add_edge("o2", "s1", 1);
    g.add_edge("o3", "s2", 1);
    g.add_edge("o4", "s3", 1);
    g.add_edge("o5", "s4", 1);
    return g;
}

/// Certified one-input five-output graphs (t = 1) at d = 2 and d = 3,
/// originally produced by the seeded search; tests re-certify them with
/// the checkers before relying on them.
inline CodingGraph certified_graph(uint32_t d) {
    static const char *kGraph2 = R"({"d":2,"inputs":["i1"],"outputs":["o1","o2","o3","o4","o5"],
        "syndromes":["s1","s2","s3","s4"],
        "edges":[["i1","o1",1],["i1","o3",1],["i1","o4",1],["o1","o2",1],["o1","o5",1],["o1","s1",1],
                 ["o1","s2",1],["o1","s4",1],["o2","o3",1],["o2","o5",1],["o2","s1",1],["o3","o4",1],
                 ["o3","s1",1],["o3","s3",1],["o4","o5",1],["o5","s4",1]]})";
    static const char *kGraph3 = R"({"d":3,"inputs":["i1"],"outputs":["o1","o2","o3","o4","o5"],
        "syndromes":["s1","s2","s3","s4"],
        "edges":[["i1","o1",1],["i1","o3",1],["i1","o4",1],["i1","o5",2],["o1","o3",1],["o1","o4",2],
                 ["o2","o3",1],["o2","o4",1],["o2","o5",1],["o2","s2",1],["o2","s4",1],["o3","o5",2],
                 ["o3","s1",1],["o3","s3",1],["o3","s4",1],["o4","s2",1],["o4","s3",1],["o4","s4",2],
                 ["o5","s1",1],["o5","s2",2]]})";
    if (d == 2) {
        return graph_from_json_text(kGraph2);
    }
    if (d == 3) {
        return graph_from_json_text(kGraph3);
    }
    throw std::invalid_argument("no stored certified graph for this modulus");
}

}  // namespace graphcode::testing

#endif
