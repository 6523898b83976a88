#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "cbu/bw.hpp"

using namespace cbu;

namespace {

// (u, v) = m (p, q) for some integer m, decided exactly.
bool is_integer_multiple(std::int64_t u, std::int64_t v, std::int64_t p, std::int64_t q) {
    if (p == 0 && q == 0) return u == 0 && v == 0;
    if (p != 0) {
        if (u % p != 0) return false;
        return v == (u / p) * q;
    }
    if (v % q != 0) return false;
    return u == 0;
}

// Middle exactness checked by enumeration: over entries in [-10, 10],
// membership in ker(second) must coincide with membership in im(first).
bool kernel_equals_image(const LatticeSeq& seq) {
    for (std::int64_t u = -10; u <= 10; ++u) {
        for (std::int64_t v = -10; v <= 10; ++v) {
            bool in_kernel = seq.second[0] * u + seq.second[1] * v == 0;
            bool in_image = is_integer_multiple(u, v, seq.first[0], seq.first[1]);
            if (in_kernel != in_image) return false;
        }
    }
    return true;
}

bool hits_one(const LatticeSeq& seq) {
    for (std::int64_t u = -10; u <= 10; ++u) {
        for (std::int64_t v = -10; v <= 10; ++v) {
            if (seq.second[0] * u + seq.second[1] * v == 1) return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("weight (2, 3) quotient: sequence exact, curvature (3, 2)") {
    QuotientDescriptor q = product_quotient(2, 3);
    CHECK(q.a == 2);
    CHECK(q.b == 3);
    CHECK(q.curvature[0] == 3);
    CHECK(q.curvature[1] == 2);
    CHECK_FALSE(q.vacuous_factor);

    // composition (b, a) . (a, -b) = ab - ba, here 3*2 + 2*(-3)
    CHECK(q.sequence.second[0] * q.sequence.first[0] +
              q.sequence.second[1] * q.sequence.first[1] ==
          0);
    SequenceReport rep = verify_exact_sequence(q.sequence);
    CHECK(rep.exact);
    CHECK(rep.reason.empty());
    CHECK(kernel_equals_image(q.sequence));
    CHECK(hits_one(q.sequence));
}

TEST_CASE("weight (1, 0): one factor untouched, still exact") {
    QuotientDescriptor q = product_quotient(1, 0);
    CHECK(q.vacuous_factor);
    CHECK(verify_exact_sequence(q.sequence).exact);
    CHECK(kernel_equals_image(q.sequence));
}

TEST_CASE("bundle descriptor records level and fiber convention") {
    BWDescriptor d = make_bw_descriptor("T^2", 3);
    CHECK(d.base == "T^2");
    CHECK(d.level == 3);
    CHECK(d.fiber_period == "circle has length 1");
    CHECK(make_bw_descriptor("pt", 1).level == 1);
    CHECK_THROWS_AS(make_bw_descriptor("W", 0), std::invalid_argument);
    CHECK_THROWS_AS(make_bw_descriptor("W", -2), std::invalid_argument);

    // the a - b dependence claim rides along as data, never as a certificate
    QuotientDescriptor q = product_quotient(2, 3);
    CHECK(q.unverified_note.find("not machine-checked") != std::string::npos);
}

TEST_CASE("non-coprime weights are rejected as a non-free action") {
    CHECK_THROWS_WITH_AS(product_quotient(2, 4), "action not free: gcd(a, b) != 1",
                         std::invalid_argument);
    CHECK_THROWS_AS(product_quotient(6, 9), std::invalid_argument);
    CHECK_THROWS_AS(product_quotient(0, 2), std::invalid_argument);
}

TEST_CASE("weight (1, 1) sequence is exact") {
    CHECK(verify_exact_sequence(product_quotient(1, 1).sequence).exact);
}

TEST_CASE("Z -> Z^2 -> Z with maps (2, -3), (3, 2): exact, matches enumeration") {
    LatticeSeq seq{{2, -3}, {3, 2}};
    CHECK(verify_exact_sequence(seq).exact);
    CHECK(kernel_equals_image(seq));
    CHECK(hits_one(seq));
}

TEST_CASE("failure reasons come out in order") {
    CHECK(verify_exact_sequence(LatticeSeq{{0, 0}, {1, 1}}).reason == "not injective");
    CHECK(verify_exact_sequence(LatticeSeq{{1, 1}, {1, 1}}).reason == "composition nonzero");
    // image 2 (1, -3) is a proper sublattice of ker(3, 1)
    CHECK(verify_exact_sequence(LatticeSeq{{2, -6}, {3, 1}}).reason == "kernel mismatch");
    CHECK_FALSE(kernel_equals_image(LatticeSeq{{2, -6}, {3, 1}}));
    // (2, -3) generates ker(6, 4) but (6, 4) misses odd integers
    SequenceReport rep = verify_exact_sequence(LatticeSeq{{2, -3}, {6, 4}});
    CHECK(rep.reason == "not surjective");
    CHECK(kernel_equals_image(LatticeSeq{{2, -3}, {6, 4}}));
    CHECK_FALSE(hits_one(LatticeSeq{{2, -3}, {6, 4}}));
}

TEST_CASE("coprime sweep |a|, |b| <= 20 against the enumeration oracle") {
    for (int a = -20; a <= 20; ++a) {
        for (int b = -20; b <= 20; ++b) {
            if (a == 0 && b == 0) continue;
            if (std::gcd(a, b) == 1) {
                QuotientDescriptor q = product_quotient(a, b);
                REQUIRE(verify_exact_sequence(q.sequence).exact);
                REQUIRE(kernel_equals_image(q.sequence));
                REQUIRE(hits_one(q.sequence));
            } else {
                REQUIRE_THROWS_AS(product_quotient(a, b), std::invalid_argument);
            }
        }
    }
}

TEST_CASE("covering descriptor: deck turn sums to one full turn exactly") {
    for (int k = 1; k <= 12; ++k) {
        CoveringDescriptor cover = covering_degree(k);
        CHECK(cover.degree == k);
        Rational total(0);
        for (int i = 0; i < k; ++i) total = total + cover.deck_turn;
        CHECK(total == Rational(1));
    }
    CHECK_THROWS_AS(covering_degree(0), std::invalid_argument);
}

TEST_CASE("covering fiber quotients are lens spaces") {
    DivisorDescriptor lens = covering_degree(3).lens(2);
    CHECK(lens.n == 2);
    CHECK(lens.lens_order == 3);
    CHECK_FALSE(lens.is_standard_sphere());
    CHECK(covering_degree(1).lens(2).is_standard_sphere());
    CHECK(covering_degree(2).lens(1).lens_order == 2);
}

TEST_CASE("classifying element ((n+1) k) mod 2") {
    CHECK(classifying_element(1, 5) == 0);
    CHECK(classifying_element(2, 1) == 1);
    CHECK(classifying_element(2, 2) == 0);
    for (int n = 1; n <= 6; ++n) {
        for (int k = 0; k <= 8; ++k) {
            int e = classifying_element(n, k);
            CHECK((e == 0 || e == 1));
            CHECK(e == classifying_element(n, k + 2));
        }
    }
    CHECK_THROWS_AS(classifying_element(0, 1), std::invalid_argument);
}
