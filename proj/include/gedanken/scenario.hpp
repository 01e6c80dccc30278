#pragma once

// End-to-end thought experiment: teleportation with a classical message of
// configurable speed, analyzed in the frame where the message arrives before
// it is sent.
//
// Quantum dynamics always run in the causal (unprimed) frame. Other frames are
// kinematic bookkeeping over the two events.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gedanken/qstate.hpp"
#include "gedanken/relativity.hpp"
#include "gedanken/teleport.hpp"

namespace gedanken::scenario {

using relativity::Boost;
using relativity::SpacetimeEvent;

enum class InputSpec { up, down, plus, minus, haar };
enum class ResourceSpec { singlet, phi_plus, random };
enum class Verdict { clone_certified, consistent_subluminal, lightlike_boundary };

const char* to_string(InputSpec spec);
const char* to_string(ResourceSpec spec);
const char* to_string(Verdict verdict);
InputSpec parse_input_spec(const std::string& text);
ResourceSpec parse_resource_spec(const std::string& text);

struct ScenarioConfig {
    double signal_speed = 2.0;  // units of c; +infinity allowed
    double separation = 2.0;
    InputSpec input_spec = InputSpec::haar;
    ResourceSpec resource_spec = ResourceSpec::singlet;
    std::uint64_t seed = 0;
    std::optional<double> frame_beta;

    /// Throws ValidationError on out-of-range fields.
    void validate() const;
};

/// Open interval of primed times (t'(II), t'(I)).
struct CloneWindow {
    double start = 0.0;
    double end = 0.0;
};

struct ScenarioReport {
    ScenarioConfig config;
    SpacetimeEvent event_i;
    SpacetimeEvent event_ii;
    relativity::IntervalClass interval;
    std::optional<relativity::ReversalWitness> reversing_boost;
    // Window in the order-reversing witness frame; present iff spacelike.
    std::optional<CloneWindow> clone_window;
    // The frame the report is drawn in, and the events and window seen from it.
    Boost report_frame;
    SpacetimeEvent frame_event_i;
    SpacetimeEvent frame_event_ii;
    std::optional<CloneWindow> frame_window;
    teleport::TeleportTranscript transcript;
    double verify_c_prob = 0.0;  // test on C immediately before I
    double verify_b_prob = 0.0;  // test on B immediately after II
    Verdict verdict = Verdict::consistent_subluminal;
    std::string caveat;
};

inline constexpr double kVerifyTol = 1e-9;

/// Fixed note attached to every report.
extern const char* const kFrameCaveat;

/// (t'(II), t'(I)) if II precedes I in the boosted frame.
std::optional<CloneWindow> detect_clone_interval(const SpacetimeEvent& event_i, const SpacetimeEvent& event_ii,
                                                 const Boost& boost);

/// Runs the whole experiment. Throws InvariantViolation if a spacelike run
/// fails either verification test.
ScenarioReport run_gedanken(const ScenarioConfig& config);

// ---------------------------------------------------------------------------
// Spacetime diagram

struct DiagramPoint {
    std::string label;
    double t = 0.0;
    double x = 0.0;
};

struct Polyline {
    std::string label;
    std::vector<DiagramPoint> points;
};

struct DiagramData {
    double frame_beta = 0.0;
    std::vector<DiagramPoint> events;
    std::vector<Polyline> polylines;
};

/// Worldlines of Alice and Bob, the message segment I -> II, the light cone
/// through I, both events, and (when the report has a clone window) the
/// constant-t' hypersurface of the witness frame, all expressed in `frame`.
DiagramData diagram_data(const ScenarioReport& report, const Boost& frame);

/// Minimal standalone SVG rendering (x to the right, t upward).
std::string render_svg(const DiagramData& diagram);

}  // namespace gedanken::scenario
