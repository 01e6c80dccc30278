#include "gedanken/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gedanken/errors.hpp"

namespace gedanken::scenario {

const char* const kFrameCaveat =
    "Internal qubit states are treated as frame-invariant: the transformation of spin states "
    "between inertial frames is not modeled, so the primed-frame states are taken equal to the "
    "unprimed ones.";

const char* to_string(InputSpec spec) {
    switch (spec) {
        case InputSpec::up: return "up";
        case InputSpec::down: return "down";
        case InputSpec::plus: return "plus";
        case InputSpec::minus: return "minus";
        case InputSpec::haar: return "haar";
    }
    return "?";
}

const char* to_string(ResourceSpec spec) {
    switch (spec) {
        case ResourceSpec::singlet: return "singlet";
        case ResourceSpec::phi_plus: return "phi_plus";
        case ResourceSpec::random: return "random";
    }
    return "?";
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::clone_certified: return "clone_certified";
        case Verdict::consistent_subluminal: return "consistent_subluminal";
        case Verdict::lightlike_boundary: return "lightlike_boundary";
    }
    return "?";
}

InputSpec parse_input_spec(const std::string& text) {
    for (auto s : {InputSpec::up, InputSpec::down, InputSpec::plus, InputSpec::minus, InputSpec::haar}) {
        if (text == to_string(s)) {
            return s;
        }
    }
    throw ValidationError("unknown input spec '" + text + "' (expected up, down, plus, minus, haar)");
}

ResourceSpec parse_resource_spec(const std::string& text) {
    for (auto s : {ResourceSpec::singlet, ResourceSpec::phi_plus, ResourceSpec::random}) {
        if (text == to_string(s)) {
            return s;
        }
    }
    throw ValidationError("unknown resource spec '" + text + "' (expected singlet, phi_plus, random)");
}

void ScenarioConfig::validate() const {
    if (std::isnan(signal_speed) || !(signal_speed > 0.0)) {
        throw ValidationError("signal_speed must be > 0 (or infinite)");
    }
    if (!std::isfinite(separation) || !(separation > 0.0)) {
        throw ValidationError("separation must be positive and finite");
    }
    if (frame_beta && !(std::isfinite(*frame_beta) && std::abs(*frame_beta) < 1.0)) {
        throw ValidationError("frame_beta must satisfy |beta| < 1");
    }
}

std::optional<CloneWindow> detect_clone_interval(const SpacetimeEvent& event_i, const SpacetimeEvent& event_ii,
                                                 const Boost& boost) {
    const double ti = relativity::boost_event(event_i, boost).t;
    const double tii = relativity::boost_event(event_ii, boost).t;
    if (tii < ti) {
        return CloneWindow{tii, ti};
    }
    return std::nullopt;
}

namespace {

qstate::StateVector make_input(InputSpec spec, Rng& rng) {
    using qstate::CanonicalKind;
    switch (spec) {
        case InputSpec::up: return qstate::canonical_state(CanonicalKind::up, {"C"});
        case InputSpec::down: return qstate::canonical_state(CanonicalKind::down, {"C"});
        case InputSpec::plus: return qstate::canonical_state(CanonicalKind::plus, {"C"});
        case InputSpec::minus: return qstate::canonical_state(CanonicalKind::minus, {"C"});
        case InputSpec::haar: return qstate::haar_random_state(1, rng, {"C"});
    }
    throw ValidationError("unknown input spec");
}

qstate::StateVector make_resource_state(ResourceSpec spec, Rng& rng) {
    using qstate::CanonicalKind;
    switch (spec) {
        case ResourceSpec::singlet: return qstate::canonical_state(CanonicalKind::singlet, {"A", "B"});
        case ResourceSpec::phi_plus: return qstate::canonical_state(CanonicalKind::phi_plus, {"A", "B"});
        case ResourceSpec::random: return teleport::random_maximally_entangled_state(rng);
    }
    throw ValidationError("unknown resource spec");
}

}  // namespace

ScenarioReport run_gedanken(const ScenarioConfig& config) {
    config.validate();

    const SpacetimeEvent event_i = relativity::make_event("I", 0.0, 0.0);
    const SpacetimeEvent event_ii = relativity::signal_event(event_i, config.separation, config.signal_speed, "II");

    // Sampling order is fixed: input first, then resource, then measurement.
    Rng rng(config.seed);
    const qstate::StateVector input = make_input(config.input_spec, rng);
    const teleport::EntangledResource resource = teleport::derive_corrections(make_resource_state(config.resource_spec, rng));

    const qstate::StateVector joint = qstate::tensor(input, resource.state());
    const double verify_c = teleport::verification_measurement(joint, "C", input);

    teleport::TeleportTranscript transcript = teleport::run_teleportation(input, resource, rng);
    transcript.message.emitted_at = event_i;
    const double verify_b = teleport::verification_measurement(transcript.output_b, "B", input);

    const auto interval = relativity::classify_interval(event_i, event_ii);
    const auto witness = relativity::order_reversing_boost(event_i, event_ii);

    std::optional<CloneWindow> window;
    if (witness) {
        window = detect_clone_interval(event_i, event_ii, witness->boost);
        if (!window) {
            throw InvariantViolation("order-reversing boost does not reverse the events");
        }
    }

    Verdict verdict = Verdict::consistent_subluminal;
    switch (interval.kind) {
        case relativity::IntervalKind::timelike: verdict = Verdict::consistent_subluminal; break;
        case relativity::IntervalKind::lightlike: verdict = Verdict::lightlike_boundary; break;
        case relativity::IntervalKind::spacelike:
            if (!window || verify_c < 1.0 - kVerifyTol || verify_b < 1.0 - kVerifyTol) {
                throw InvariantViolation("spacelike run failed to certify the clone window");
            }
            verdict = Verdict::clone_certified;
            break;
    }

    const Boost frame = config.frame_beta ? Boost(*config.frame_beta)
                                          : (witness ? witness->boost : Boost::identity());

    return ScenarioReport{
        .config = config,
        .event_i = event_i,
        .event_ii = event_ii,
        .interval = interval,
        .reversing_boost = witness,
        .clone_window = window,
        .report_frame = frame,
        .frame_event_i = relativity::boost_event(event_i, frame),
        .frame_event_ii = relativity::boost_event(event_ii, frame),
        .frame_window = detect_clone_interval(event_i, event_ii, frame),
        .transcript = std::move(transcript),
        .verify_c_prob = verify_c,
        .verify_b_prob = verify_b,
        .verdict = verdict,
        .caveat = kFrameCaveat,
    };
}

// ---------------------------------------------------------------------------
// Diagram

namespace {

DiagramPoint to_frame(const std::string& label, double t, double x, const Boost& frame) {
    const auto e = relativity::boost_event({label, t, x}, frame);
    return {label, e.t, e.x};
}

Polyline segment(const std::string& label, double t0, double x0, double t1, double x1, const Boost& frame) {
    return {label, {to_frame(label, t0, x0, frame), to_frame(label, t1, x1, frame)}};
}

}  // namespace

DiagramData diagram_data(const ScenarioReport& report, const Boost& frame) {
    const auto& ei = report.event_i;
    const auto& eii = report.event_ii;
    const double sep = eii.x - ei.x;
    const double pad = std::max(1.0, sep);
    const double t_lo = std::min(ei.t, eii.t) - pad;
    const double t_hi = std::max(ei.t, eii.t) + pad;
    const double reach = std::max(t_hi - ei.t, ei.t - t_lo);

    DiagramData out;
    out.frame_beta = frame.beta();
    out.events.push_back(to_frame(ei.label, ei.t, ei.x, frame));
    out.events.push_back(to_frame(eii.label, eii.t, eii.x, frame));

    out.polylines.push_back(segment("alice_worldline", t_lo, ei.x, t_hi, ei.x, frame));
    out.polylines.push_back(segment("bob_worldline", t_lo, eii.x, t_hi, eii.x, frame));
    out.polylines.push_back(segment("message", ei.t, ei.x, eii.t, eii.x, frame));
    out.polylines.push_back(segment("light_cone_right", ei.t - reach, ei.x - reach, ei.t + reach, ei.x + reach, frame));
    out.polylines.push_back(segment("light_cone_left", ei.t - reach, ei.x + reach, ei.t + reach, ei.x - reach, frame));

    if (report.clone_window && report.reversing_boost) {
        // Constant-t' slice through the middle of the window, spanning both
        // worldlines, built in the witness frame and mapped back to unprimed.
        const Boost& witness = report.reversing_boost->boost;
        const double t_mid = 0.5 * (report.clone_window->start + report.clone_window->end);
        const auto wi = relativity::boost_event(ei, witness);
        const auto wii = relativity::boost_event(eii, witness);
        const double x_lo = std::min(wi.x, wii.x) - 0.25 * pad;
        const double x_hi = std::max(wi.x, wii.x) + 0.25 * pad;
        const auto back_lo = relativity::boost_event({"", t_mid, x_lo}, witness.inverse());
        const auto back_hi = relativity::boost_event({"", t_mid, x_hi}, witness.inverse());
        out.polylines.push_back(
            segment("clone_hypersurface", back_lo.t, back_lo.x, back_hi.t, back_hi.x, frame));
    }
    return out;
}

std::string render_svg(const DiagramData& diagram) {
    double x_min = 0.0, x_max = 0.0, t_min = 0.0, t_max = 0.0;
    bool first = true;
    auto extend = [&](const DiagramPoint& p) {
        if (first) {
            x_min = x_max = p.x;
            t_min = t_max = p.t;
            first = false;
        }
        x_min = std::min(x_min, p.x);
        x_max = std::max(x_max, p.x);
        t_min = std::min(t_min, p.t);
        t_max = std::max(t_max, p.t);
    };
    for (const auto& e : diagram.events) extend(e);
    for (const auto& l : diagram.polylines) {
        for (const auto& p : l.points) extend(p);
    }
    const double size = 480.0;
    const double margin = 20.0;
    const double span = std::max({x_max - x_min, t_max - t_min, 1e-9});
    auto sx = [&](double x) { return margin + (x - x_min) / span * size; };
    auto sy = [&](double t) { return margin + (t_max - t) / span * size; };

    std::ostringstream svg;
    svg.precision(6);
    const double canvas = size + 2 * margin;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << canvas << "\" height=\"" << canvas
        << "\">\n";
    svg << "<title>frame beta = " << diagram.frame_beta << "</title>\n";
    for (const auto& line : diagram.polylines) {
        const bool guide = line.label.rfind("light_cone", 0) == 0;
        const bool slice = line.label == "clone_hypersurface";
        svg << "<polyline class=\"" << line.label << "\" fill=\"none\" stroke=\""
            << (slice ? "red" : guide ? "gray" : "black") << "\""
            << (guide ? " stroke-dasharray=\"4 4\"" : "") << " points=\"";
        for (const auto& p : line.points) {
            svg << sx(p.x) << ',' << sy(p.t) << ' ';
        }
        svg << "\"/>\n";
    }
    for (const auto& e : diagram.events) {
        svg << "<circle cx=\"" << sx(e.x) << "\" cy=\"" << sy(e.t) << "\" r=\"4\"/>\n";
        svg << "<text x=\"" << sx(e.x) + 6 << "\" y=\"" << sy(e.t) - 6 << "\">" << e.label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace gedanken::scenario
