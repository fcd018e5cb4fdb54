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

#include <catch2/catch_amalgamated.hpp>

#include "graphcode/fp.hpp"
#include "helpers.hpp"

using namespace graphcode;
using graphcode::testing::random_fmat;
using graphcode::testing::random_fvec;

TEST_CASE("residue arithmetic") {
    // Oracle: exhaustive scan of F_5 for the inverse of 2.
    uint32_t expected = 0;
    for (uint32_t k = 1; k < 5; k++) {
        if (2 * k % 5 == 1) {
            expected = k;
        }
    }
    REQUIRE(expected == 3);
    REQUIRE(fp_inv(2, 5) == expected);

    REQUIRE(fp_neg(1, 2) == 1);
    REQUIRE(fp_mul(2, 2, 3) == 1);

    REQUIRE_THROWS_AS(fp_inv(0, 5), std::domain_error);
    REQUIRE_THROWS_AS(Fp(1, 2) + Fp(1, 3), std::invalid_argument);

    for (uint32_t d : {2u, 3u, 5u, 7u}) {
        for (uint32_t a = 1; a < d; a++) {
            REQUIRE(fp_mul(a, fp_inv(a, d), d) == 1);
        }
    }
}

TEST_CASE("prime modulus is enforced") {
    REQUIRE(is_prime(2));
    REQUIRE(is_prime(13));
    REQUIRE(!is_prime(4));
    REQUIRE(!is_prime(1));
    REQUIRE_THROWS_AS(require_prime(6), std::invalid_argument);
}

TEST_CASE("solve_linear basics") {
    Labels r2 = {"a", "b"};
    SECTION("identity system returns b") {
        FMat id = FMat::identity(r2, 3);
        FVec b(r2, {2, 1}, 3);
        auto x = solve_linear(id, b);
        REQUIRE(x.has_value());
        REQUIRE(*x == b);
    }
    SECTION("zero matrix has a full kernel") {
        FMat zero(r2, r2, 2);
        REQUIRE(kernel_basis(zero).size() == 2);
    }
    SECTION("inconsistent system returns absence") {
        FMat m(r2, {"x"}, 2);
        m.at(0, 0) = 1;
        m.at(1, 0) = 1;
        FVec b(r2, {0, 1}, 2);
        REQUIRE(!solve_linear(m, b).has_value());
    }
}

TEST_CASE("kernel basis against exhaustive enumeration over F_3^5") {
    std::mt19937_64 rng(11);
    Labels rows = graphcode::testing::make_labels("r", 3);
    Labels cols = graphcode::testing::make_labels("c", 5);
    for (int trial = 0; trial < 10; trial++) {
        FMat m = random_fmat(rows, cols, 3, rng);
        auto basis = kernel_basis(m);
        for (const FVec &x : basis) {
            REQUIRE((m * x).is_zero());
        }
        REQUIRE(basis.size() + rank(m) == 5);

        // Independent oracle: count all solutions of Mx = 0 by brute force;
        // the kernel must have exactly 3^nullity elements.
        size_t solutions = 0;
        FVec x(cols, 3);
        for (size_t idx = 0; idx < 243; idx++) {
            size_t rest = idx;
            for (size_t k = 0; k < 5; k++) {
                x.v[k] = uint32_t(rest % 3);
                rest /= 3;
            }
            if ((m * x).is_zero()) {
                solutions++;
            }
        }
        size_t expect = 1;
        for (size_t k = 0; k < basis.size(); k++) {
            expect *= 3;
        }
        REQUIRE(solutions == expect);
    }
}

TEST_CASE("solutions returned by solve_linear satisfy the system") {
    std::mt19937_64 rng(12);
    for (uint32_t d : {2u, 3u, 5u}) {
        Labels rows = graphcode::testing::make_labels("r", 4);
        Labels cols = graphcode::testing::make_labels("c", 3);
        for (int trial = 0; trial < 20; trial++) {
            FMat m = random_fmat(rows, cols, d, rng);
            FVec x0 = random_fvec(cols, d, rng);
            FVec b = m * x0;  // consistent by construction
            auto x = solve_linear(m, b);
            REQUIRE(x.has_value());
            REQUIRE(m * *x == b);
        }
    }
}

TEST_CASE("invert_block") {
    Labels r2 = {"a", "b"};
    SECTION("identity inverts to identity") {
        FMat id = FMat::identity(r2, 5);
        REQUIRE(invert_block(id) == id);
    }
    SECTION("2x2 brute-force oracle at d=2") {
        FMat m(r2, r2, 2);
        m.at(0, 0) = 1;
        m.at(0, 1) = 1;
        m.at(1, 1) = 1;
        // Oracle: try all 16 candidate 2x2 matrices for a two-sided inverse.
        FMat oracle(r2, r2, 2);
        bool found = false;
        for (uint32_t bits = 0; bits < 16; bits++) {
            FMat c(r2, r2, 2);
            c.at(0, 0) = bits & 1;
            c.at(0, 1) = (bits >> 1) & 1;
            c.at(1, 0) = (bits >> 2) & 1;
            c.at(1, 1) = (bits >> 3) & 1;
            if (m * c == FMat::identity(r2, 2) && c * m == FMat::identity(r2, 2)) {
                oracle = c;
                found = true;
            }
        }
        REQUIRE(found);
        REQUIRE(invert_block(m) == oracle);
        REQUIRE(oracle.at(0, 1) == 1);  // [[1,1],[0,1]] is its own inverse
    }
    SECTION("singular blocks are rejected") {
        FMat zero(r2, r2, 3);
        REQUIRE_THROWS_AS(invert_block(zero), std::domain_error);
    }
    SECTION("inverse property on random invertible blocks") {
        std::mt19937_64 rng(13);
        Labels r4 = graphcode::testing::make_labels("v", 4);
        for (uint32_t d : {2u, 3u, 5u}) {
            int done = 0;
            while (done < 10) {
                FMat m = random_fmat(r4, r4, d, rng);
                FMat inv;
                try {
                    inv = invert_block(m);
                } catch (const std::domain_error &) {
                    continue;
                }
                REQUIRE(m * inv == FMat::identity(r4, d));
                REQUIRE(inv * m == FMat::identity(r4, d));
                done++;
            }
        }
    }
}

TEST_CASE("rank-nullity by exhaustive enumeration for small shapes") {
    std::mt19937_64 rng(14);
    for (uint32_t d : {2u, 3u}) {
        for (size_t nc : {2ul, 4ul, 6ul}) {
            Labels rows = graphcode::testing::make_labels("r", 3);
            Labels cols = graphcode::testing::make_labels("c", nc);
            FMat m = random_fmat(rows, cols, d, rng);
            size_t count = 0, total = 1;
            for (size_t k = 0; k < nc; k++) {
                total *= d;
            }
            FVec x(cols, d);
            for (size_t idx = 0; idx < total; idx++) {
                size_t rest = idx;
                for (size_t k = 0; k < nc; k++) {
                    x.v[k] = uint32_t(rest % d);
                    rest /= d;
                }
                count += (m * x).is_zero();
            }
            size_t nullity = kernel_basis(m).size();
            size_t expect = 1;
            for (size_t k = 0; k < nullity; k++) {
                expect *= d;
            }
            REQUIRE(count == expect);
            REQUIRE(nullity + rank(m) == nc);
        }
    }
}

TEST_CASE("block addressing by labels") {
    Labels rows = {"a", "b", "c"};
    FMat m(rows, rows, 5);
    for (size_t r = 0; r < 3; r++) {
        for (size_t c = 0; c < 3; c++) {
            m.at(r, c) = uint32_t(r * 3 + c) % 5;
        }
    }
    FMat blk = m.block({"c", "a"}, {"b"});
    REQUIRE(blk.nrows() == 2);
    REQUIRE(blk.at(0, 0) == m.at("c", "b"));
    REQUIRE(blk.at(1, 0) == m.at("a", "b"));
    REQUIRE_THROWS_AS(m.block({"nope"}, {"b"}), std::invalid_argument);
}
