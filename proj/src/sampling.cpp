#include "cbu/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbu {

std::uint64_t SampleStream::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double SampleStream::next_unit() { return double(next() >> 11) * 0x1.0p-53; }

double SampleStream::next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

void DomainBox::add_interval(const std::string& name, double lo, double hi, bool guarded) {
    if (!(lo < hi))
        throw std::invalid_argument("empty interval for coordinate " + name);
    intervals_.push_back({name, lo, hi, false, guarded});
}

void DomainBox::add_angle(const std::string& name) {
    intervals_.push_back({name, 0.0, kTwoPi, true, false});
}

const DomainBox::Interval& DomainBox::interval(const std::string& name) const {
    for (const auto& iv : intervals_)
        if (iv.name == name) return iv;
    throw std::invalid_argument("no interval for coordinate " + name);
}

bool DomainBox::has(const std::string& name) const {
    for (const auto& iv : intervals_)
        if (iv.name == name) return true;
    return false;
}

Binding DomainBox::sample(SampleStream& stream) const {
    Binding point;
    for (const auto& iv : intervals_) {
        double lo = iv.lo, hi = iv.hi;
        if (!iv.periodic && iv.guarded) {
            double guard = std::min(kGuardBand, (hi - lo) / 8.0);
            lo += guard;
            hi -= guard;
        }
        point.set(iv.name, stream.next_in(lo, hi));
    }
    return point;
}

DomainBox DomainBox::restricted(const std::string& name, double lo, double hi) const {
    DomainBox out;
    bool found = false;
    for (const auto& iv : intervals_) {
        if (iv.name == name) {
            out.add_interval(name, lo, hi, iv.guarded);
            found = true;
        } else {
            out.intervals_.push_back(iv);
        }
    }
    if (!found) throw std::invalid_argument("no interval for coordinate " + name);
    return out;
}

ZeroReport is_zero(const Expr& expr, const DomainBox& box, const Binding& params,
                   const ZeroTestOptions& opts) {
    SampleStream stream(opts.seed);
    ZeroReport report;
    for (int i = 0; i < opts.samples; ++i) {
        Binding point = box.sample(stream);
        EvalScaled e = expr.eval_scaled(point, params);
        double ratio = std::fabs(e.value) / (1.0 + e.scale);
        if (ratio > report.worst_ratio) {
            report.worst_ratio = ratio;
            report.worst_value = e.value;
            report.witness = point;
        }
        if (ratio > opts.tol) report.zero = false;
    }
    return report;
}

double central_difference(const Expr& expr, const std::string& coord, const Binding& point,
                          const Binding& params, double h) {
    Binding hi = point, lo = point;
    const double* x = point.find(coord);
    if (!x) throw std::invalid_argument("finite difference needs a value for " + coord);
    hi.set(coord, *x + h);
    lo.set(coord, *x - h);
    return (expr.eval(hi, params) - expr.eval(lo, params)) / (2.0 * h);
}

bool derivative_matches_fd(const Expr& expr, const std::string& coord, const DomainBox& box,
                           const Binding& params, int samples, std::uint64_t seed) {
    Expr deriv = expr.derivative(coord);
    SampleStream stream(seed);
    for (int i = 0; i < samples; ++i) {
        Binding point = box.sample(stream);
        double sym = deriv.eval(point, params);
        double fd = central_difference(expr, coord, point, params);
        if (std::fabs(sym - fd) > 1e-6 * (1.0 + std::fabs(sym))) return false;
    }
    return true;
}

}  // namespace cbu
