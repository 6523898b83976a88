#include "cbu/bw.hpp"

#include <numeric>
#include <stdexcept>

namespace cbu {

namespace {

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

}  // namespace

BWDescriptor make_bw_descriptor(std::string base, int level) {
    if (level < 1) throw std::invalid_argument("bundle level must be >= 1");
    BWDescriptor d;
    d.base = std::move(base);
    d.level = level;
    return d;
}

SequenceReport verify_exact_sequence(const LatticeSeq& seq) {
    const auto [p, q] = seq.first;
    const auto [s, t] = seq.second;
    if (p == 0 && q == 0) return {false, "not injective"};
    if (s * p + t * q != 0) return {false, "composition nonzero"};

    // ker(second) is generated by (t, -s)/gcd(s, t); exactness in the middle
    // means (p, q) generates the same rank-1 sublattice, i.e. equals the
    // primitive kernel generator up to sign.
    if (s == 0 && t == 0) return {false, "kernel mismatch"};  // kernel is all of Z^2
    std::int64_t g = gcd64(s, t);
    std::int64_t ku = t / g, kv = -s / g;
    bool image_matches = (p == ku && q == kv) || (p == -ku && q == -kv);
    if (!image_matches) return {false, "kernel mismatch"};

    if (gcd64(s, t) != 1) return {false, "not surjective"};
    return {true, ""};
}

QuotientDescriptor product_quotient(int a, int b) {
    if (gcd64(a, b) != 1) throw std::invalid_argument("action not free: gcd(a, b) != 1");

    QuotientDescriptor q;
    q.a = a;
    q.b = b;
    q.curvature = {b, a};
    q.sequence = LatticeSeq{{a, -b}, {b, a}};
    q.vacuous_factor = (a == 0 || b == 0);
    q.label = "S_(" + std::to_string(b) + "," + std::to_string(a) + ")(W1 x W2)";
    // Literature claim, deliberately not certified by anything in this
    // library: for torus factors the quotient is said to depend only on a - b.
    q.unverified_note = "dependence on a - b only (torus base case) cited from "
                        "external work; not machine-checked";

    auto cert = verify_exact_sequence(q.sequence);
    if (!cert) throw std::logic_error("coprime weights produced a non-exact sequence: " +
                                      cert.reason);
    return q;
}

DivisorDescriptor CoveringDescriptor::lens(int n) const {
    return DivisorDescriptor{n, degree, "alpha_std"};
}

CoveringDescriptor covering_degree(int k) {
    if (k < 1) throw std::invalid_argument("covering degree needs k >= 1");
    return CoveringDescriptor{k, Rational(1, k)};
}

int classifying_element(int n, int k) {
    if (n < 1 || k < 0) throw std::invalid_argument("classifying element needs n >= 1, k >= 0");
    return ((n + 1) * k) % 2;
}

}  // namespace cbu
