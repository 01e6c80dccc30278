#pragma once

// 1+1D Minkowski kinematics with c = 1.

#include <optional>
#include <string>

namespace gedanken::relativity {

struct SpacetimeEvent {
    std::string label;
    double t = 0.0;
    double x = 0.0;
};

/// Checked event constructor: rejects non-finite coordinates.
SpacetimeEvent make_event(std::string label, double t, double x);

class Boost {
public:
    /// Throws ValidationError unless |beta| < 1 and beta is finite.
    explicit Boost(double beta);

    static Boost identity() { return Boost(0.0); }

    double beta() const { return beta_; }
    double gamma() const { return gamma_; }

    /// Relativistic velocity addition: this boost followed by `next`.
    Boost then(const Boost& next) const;

    Boost inverse() const { return Boost(-beta_); }

private:
    double beta_;
    double gamma_;
};

enum class IntervalKind { timelike, spacelike, lightlike };

struct IntervalClass {
    IntervalKind kind = IntervalKind::lightlike;
    double ds2 = 0.0;  // dx^2 - dt^2; positive means spacelike
};

const char* to_string(IntervalKind kind);

IntervalClass classify_interval(const SpacetimeEvent& e1, const SpacetimeEvent& e2);

/// t' = gamma (t - beta x), x' = gamma (x - beta t).
SpacetimeEvent boost_event(const SpacetimeEvent& e, const Boost& boost);

struct ReversalWitness {
    double threshold = 0.0;  // beta* = dt/dx, the simultaneity velocity
    Boost boost;             // (beta* + sign(dx)) / 2
};

/// For spacelike pairs, a frame in which the later event (by t) precedes the
/// earlier one. Empty for timelike and lightlike pairs. Coincident events throw
/// DegenerateError.
std::optional<ReversalWitness> order_reversing_boost(const SpacetimeEvent& e1, const SpacetimeEvent& e2);

/// beta = dt/dx for spacelike pairs (the frame where both are simultaneous).
std::optional<Boost> simultaneity_boost(const SpacetimeEvent& e1, const SpacetimeEvent& e2);

/// Arrival of a signal sent from `origin` over `distance` at `signal_speed`
/// (units of c, may be +infinity).
SpacetimeEvent signal_event(const SpacetimeEvent& origin, double distance, double signal_speed,
                            std::string label = "II");

}  // namespace gedanken::relativity
