#pragma once
// Integer bookkeeping for circle-bundle quotients of products: the exact
// sequence certifying that the weight-(a, b) torus direction is primitive,
// curvature coefficients of the induced connection, covering degrees with
// their deck rotations, and the Z_2 classifying element for sphere bundles.

#include <array>
#include <cstdint>
#include <string>

#include "cbu/expr.hpp"
#include "cbu/models.hpp"

namespace cbu {

/** Unit circle bundle of the level-k power of a prequantum line bundle,
    reduced to its integer data.  Fiber angles are measured in full turns,
    so one fiber circle has length 1. */
struct BWDescriptor {
    std::string base;
    int level = 1;
    std::string fiber_period = "circle has length 1";
};

/** Throws unless level >= 1; level 0 has no unit circle bundle. */
BWDescriptor make_bw_descriptor(std::string base, int level);

/** Z --first--> Z^2 --second--> Z, first: x -> (first[0] x, first[1] x),
    second: (u, v) -> second[0] u + second[1] v. */
struct LatticeSeq {
    std::array<std::int64_t, 2> first{};
    std::array<std::int64_t, 2> second{};
};

struct SequenceReport {
    bool exact = false;
    /** Empty when exact; otherwise one of "not injective",
        "composition nonzero", "kernel mismatch", "not surjective". */
    std::string reason;
    explicit operator bool() const { return exact; }
};

/** Exactness of 0 -> Z -> Z^2 -> Z -> 0: first map injective, composition
    zero, ker(second) = im(first) (compared through primitive generators),
    second map surjective (gcd of its entries 1). */
SequenceReport verify_exact_sequence(const LatticeSeq& seq);

struct QuotientDescriptor {
    int a = 0;
    int b = 0;
    /** Connection curvature coefficients attached to (omega_1, omega_2). */
    std::array<int, 2> curvature{};
    /** The verified sequence Z -(a,-b)-> Z^2 -(b,a)-> Z. */
    LatticeSeq sequence;
    /** One weight is zero: that factor is untouched by the quotient. */
    bool vacuous_factor = false;
    std::string label;
    /** Claims taken from external references and not machine-checked here;
        recorded so downstream consumers know they are unverified. */
    std::string unverified_note;
};

/** Quotient of a product by the weight-(a, b) circle.  Throws
    "action not free" unless gcd(a, b) = 1; the returned sequence has been
    verified exact. */
QuotientDescriptor product_quotient(int a, int b);

struct CoveringDescriptor {
    /** Deck group order. */
    int degree = 1;
    /** Fiber rotation per deck step, in full turns (1/degree). */
    Rational deck_turn;
    /** The lens quotient L(degree; 1, ..., 1) of the S^{2n-1} fiber. */
    DivisorDescriptor lens(int n) const;
};

/** The level-1 bundle as a k-fold cover of the level-k bundle; k >= 1. */
CoveringDescriptor covering_degree(int k);

/** ((n+1) k) mod 2 in pi_1(SO(2n+2)); zero means the sphere bundle over
    the level-k base is trivial. */
int classifying_element(int n, int k);

}  // namespace cbu
