#pragma once
// Seeded sampling over coordinate boxes and the sampled zero test that
// stands in for symbolic simplification.
//
// All randomness flows through SampleStream (a splitmix64 generator), so
// results are bit-reproducible for a fixed seed across platforms and runs.

#include <cstdint>
#include <string>
#include <vector>

#include "cbu/expr.hpp"

namespace cbu {

inline constexpr int kDefaultSamples = 256;
inline constexpr double kDefaultTol = 1e-9;
inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;
/** Width kept clear of non-periodic interval endpoints when sampling, so
    chart degeneracies on the boundary never poison a verdict. */
inline constexpr double kGuardBand = 1e-3;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/** Deterministic 64-bit stream (splitmix64). */
class SampleStream {
  public:
    explicit SampleStream(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /** Uniform in [0, 1). */
    double next_unit();
    /** Uniform in [lo, hi). */
    double next_in(double lo, double hi);

  private:
    std::uint64_t state_;
};

/** Axis-aligned sampling domain: an ordered list of named intervals.
    Angles are periodic and sampled over one full period; non-periodic
    intervals are shrunk by the guard band at guarded endpoints. */
class DomainBox {
  public:
    struct Interval {
        std::string name;
        double lo = 0;
        double hi = 0;
        bool periodic = false;
        bool guarded = true;
    };

    /** Non-periodic interval; requires lo < hi. */
    void add_interval(const std::string& name, double lo, double hi, bool guarded = true);
    /** Periodic angle over [0, 2*pi). */
    void add_angle(const std::string& name);

    const std::vector<Interval>& intervals() const { return intervals_; }
    const Interval& interval(const std::string& name) const;
    bool has(const std::string& name) const;
    size_t size() const { return intervals_.size(); }

    /** One point, guard bands applied. */
    Binding sample(SampleStream& stream) const;

    /** Restricted copy: the named interval replaced by [lo, hi]. */
    DomainBox restricted(const std::string& name, double lo, double hi) const;

  private:
    std::vector<Interval> intervals_;
};

struct ZeroTestOptions {
    int samples = kDefaultSamples;
    double tol = kDefaultTol;
    std::uint64_t seed = kDefaultSeed;
};

struct ZeroReport {
    bool zero = true;
    /** max over samples of |value| / (1 + scale); the verdict compares this
        against tol. */
    double worst_ratio = 0;
    double worst_value = 0;
    Binding witness;
    explicit operator bool() const { return zero; }
};

/** Samples |expr| over the box; true iff every sample satisfies
    |value| <= tol * (1 + cancellation scale).  Deterministic per seed. */
ZeroReport is_zero(const Expr& expr, const DomainBox& box, const Binding& params = {},
                   const ZeroTestOptions& opts = {});

/** Centered finite difference (f(x+h) - f(x-h)) / 2h in one coordinate. */
double central_difference(const Expr& expr, const std::string& coord, const Binding& point,
                          const Binding& params = {}, double h = 1e-5);

/** True iff the symbolic derivative matches the centered difference within
    1e-6 * (1 + |derivative|) at sampled points. */
bool derivative_matches_fd(const Expr& expr, const std::string& coord, const DomainBox& box,
                           const Binding& params = {}, int samples = 64,
                           std::uint64_t seed = kDefaultSeed);

}  // namespace cbu
