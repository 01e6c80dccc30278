#include "gedanken/relativity.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gedanken/errors.hpp"

namespace gedanken::relativity {

namespace {

struct OrderedPair {
    SpacetimeEvent earlier;
    SpacetimeEvent later;
};

OrderedPair order_by_time(const SpacetimeEvent& e1, const SpacetimeEvent& e2) {
    if (e1.t == e2.t && e1.x == e2.x) {
        throw DegenerateError("events '" + e1.label + "' and '" + e2.label + "' coincide");
    }
    if (e1.t <= e2.t) {
        return {e1, e2};
    }
    return {e2, e1};
}

}  // namespace

SpacetimeEvent make_event(std::string label, double t, double x) {
    if (!std::isfinite(t) || !std::isfinite(x)) {
        throw ValidationError("event '" + label + "' has non-finite coordinates");
    }
    return {std::move(label), t, x};
}

Boost::Boost(double beta) : beta_(beta), gamma_(0.0) {
    if (!std::isfinite(beta) || !(std::abs(beta) < 1.0)) {
        throw ValidationError("boost velocity must satisfy |beta| < 1");
    }
    gamma_ = 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
}

Boost Boost::then(const Boost& next) const {
    return Boost((beta_ + next.beta_) / (1.0 + beta_ * next.beta_));
}

const char* to_string(IntervalKind kind) {
    switch (kind) {
        case IntervalKind::timelike: return "timelike";
        case IntervalKind::spacelike: return "spacelike";
        case IntervalKind::lightlike: return "lightlike";
    }
    return "?";
}

IntervalClass classify_interval(const SpacetimeEvent& e1, const SpacetimeEvent& e2) {
    const double dt = e2.t - e1.t;
    const double dx = e2.x - e1.x;
    const double ds2 = dx * dx - dt * dt;
    const double tol = 1e-12 * std::max({1.0, dx * dx, dt * dt});
    IntervalKind kind = IntervalKind::lightlike;
    if (ds2 > tol) {
        kind = IntervalKind::spacelike;
    } else if (ds2 < -tol) {
        kind = IntervalKind::timelike;
    }
    return {kind, ds2};
}

SpacetimeEvent boost_event(const SpacetimeEvent& e, const Boost& boost) {
    const double g = boost.gamma();
    const double b = boost.beta();
    return {e.label, g * (e.t - b * e.x), g * (e.x - b * e.t)};
}

std::optional<ReversalWitness> order_reversing_boost(const SpacetimeEvent& e1, const SpacetimeEvent& e2) {
    const auto [earlier, later] = order_by_time(e1, e2);
    if (classify_interval(earlier, later).kind != IntervalKind::spacelike) {
        return std::nullopt;
    }
    const double dt = later.t - earlier.t;
    const double dx = later.x - earlier.x;
    const double threshold = dt / dx;
    const double toward_light = dx > 0.0 ? 1.0 : -1.0;
    return ReversalWitness{threshold, Boost(0.5 * (threshold + toward_light))};
}

std::optional<Boost> simultaneity_boost(const SpacetimeEvent& e1, const SpacetimeEvent& e2) {
    const auto [earlier, later] = order_by_time(e1, e2);
    if (classify_interval(earlier, later).kind != IntervalKind::spacelike) {
        return std::nullopt;
    }
    return Boost((later.t - earlier.t) / (later.x - earlier.x));
}

SpacetimeEvent signal_event(const SpacetimeEvent& origin, double distance, double signal_speed,
                            std::string label) {
    if (!std::isfinite(distance) || !(distance > 0.0)) {
        throw ValidationError("signal distance must be positive and finite");
    }
    if (std::isnan(signal_speed) || !(signal_speed > 0.0)) {
        throw ValidationError("signal speed must be positive (or infinite)");
    }
    const double dt = std::isinf(signal_speed) ? 0.0 : distance / signal_speed;
    return {std::move(label), origin.t + dt, origin.x + distance};
}

}  // namespace gedanken::relativity
