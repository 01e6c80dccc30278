#include "gedanken/serialize.hpp"

#include <cmath>
#include <limits>

#include "gedanken/errors.hpp"

namespace gedanken::serialize {

namespace {

Json complex_json(qstate::Complex z) { return Json::array({z.real(), z.imag()}); }

Json optional_window(const std::optional<scenario::CloneWindow>& w) {
    if (!w) {
        return nullptr;
    }
    return Json{{"t_start", w->start}, {"t_end", w->end}};
}

Json boost_json(const relativity::Boost& b) { return Json{{"beta", b.beta()}, {"gamma", b.gamma()}}; }

Json speed_json(double speed) {
    if (std::isinf(speed)) {
        return "inf";
    }
    return speed;
}

}  // namespace

Json to_json(const qstate::StateVector& state) {
    Json amps = Json::array();
    for (std::size_t i = 0; i < state.dim(); ++i) {
        amps.push_back(complex_json(state[i]));
    }
    return Json{{"labels", state.labels()}, {"amplitudes", std::move(amps)}};
}

Json to_json(const qstate::Matrix& matrix) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
            row.push_back(complex_json(matrix(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

qstate::Matrix matrix_from_json(const Json& json) {
    if (!json.is_array() || json.empty()) {
        throw ValidationError("matrix must be a non-empty array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(json.size());
    const auto cols = static_cast<Eigen::Index>(json.at(0).size());
    qstate::Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Json& row = json.at(static_cast<std::size_t>(r));
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw ValidationError("matrix rows must all have the same length");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const Json& entry = row.at(static_cast<std::size_t>(c));
            if (entry.is_number()) {
                m(r, c) = entry.get<double>();
            } else if (entry.is_array() && entry.size() == 2 && entry[0].is_number() && entry[1].is_number()) {
                m(r, c) = qstate::Complex(entry[0].get<double>(), entry[1].get<double>());
            } else {
                throw ValidationError("matrix entries must be numbers or [re, im] pairs");
            }
        }
    }
    return m;
}

Json to_json(const relativity::SpacetimeEvent& event) {
    return Json{{"label", event.label}, {"t", event.t}, {"x", event.x}};
}

Json to_json(const teleport::TeleportTranscript& transcript) {
    Json corrections = Json::array();
    for (const auto& u : transcript.resource.corrections()) {
        corrections.push_back(to_json(u));
    }
    Json message{{"bits", transcript.message.bits}};
    message["emitted_at"] = transcript.message.emitted_at ? to_json(*transcript.message.emitted_at) : Json(nullptr);
    return Json{
        {"input_state", to_json(transcript.input_state)},
        {"resource", Json{{"state", to_json(transcript.resource.state())}, {"corrections", std::move(corrections)}}},
        {"message", std::move(message)},
        {"post_measurement", to_json(transcript.post_measurement)},
        {"pre_correction_B", to_json(transcript.pre_correction_b)},
        {"output_B", to_json(transcript.output_b)},
        {"output_fidelity", transcript.output_fidelity},
        {"outcome_probability", transcript.outcome_probability},
    };
}

Json to_json(const channels::LinearityReport& report) {
    return Json{
        {"superposed_input", to_json(report.superposed_input)},
        {"predicted_if_cloned", to_json(report.predicted_if_cloned)},
        {"actual_output_fidelity", report.actual_output_fidelity},
        {"violation", report.violation},
        {"fidelity_a", report.fidelity_a},
        {"fidelity_b", report.fidelity_b},
        {"vacuous", report.vacuous},
    };
}

Json to_json(const scenario::ScenarioConfig& config) {
    return Json{
        {"signal_speed", speed_json(config.signal_speed)},
        {"separation", config.separation},
        {"input_spec", scenario::to_string(config.input_spec)},
        {"resource_spec", scenario::to_string(config.resource_spec)},
        {"seed", config.seed},
        {"frame_beta", config.frame_beta ? Json(*config.frame_beta) : Json(nullptr)},
    };
}

Json to_json(const scenario::ScenarioReport& report) {
    Json reversing = nullptr;
    if (report.reversing_boost) {
        reversing = Json{{"threshold", report.reversing_boost->threshold},
                         {"beta", report.reversing_boost->boost.beta()},
                         {"gamma", report.reversing_boost->boost.gamma()}};
    }
    Json frame = boost_json(report.report_frame);
    frame["events"] = Json{{"I", to_json(report.frame_event_i)}, {"II", to_json(report.frame_event_ii)}};
    frame["clone_window"] = optional_window(report.frame_window);

    return Json{
        {"config", to_json(report.config)},
        {"events", Json{{"I", to_json(report.event_i)}, {"II", to_json(report.event_ii)}}},
        {"interval", Json{{"kind", relativity::to_string(report.interval.kind)}, {"ds2", report.interval.ds2}}},
        {"reversing_boost", std::move(reversing)},
        {"clone_window", optional_window(report.clone_window)},
        {"report_frame", std::move(frame)},
        {"teleportation", to_json(report.transcript)},
        {"verification", Json{{"C_before_I", report.verify_c_prob}, {"B_after_II", report.verify_b_prob}}},
        {"verdict", scenario::to_string(report.verdict)},
        {"caveat", report.caveat},
    };
}

Json to_json(const scenario::DiagramData& diagram) {
    Json events = Json::array();
    for (const auto& e : diagram.events) {
        events.push_back(Json{{"label", e.label}, {"t", e.t}, {"x", e.x}});
    }
    Json lines = Json::array();
    for (const auto& l : diagram.polylines) {
        Json pts = Json::array();
        for (const auto& p : l.points) {
            pts.push_back(Json{{"t", p.t}, {"x", p.x}});
        }
        lines.push_back(Json{{"label", l.label}, {"points", std::move(pts)}});
    }
    return Json{{"frame_beta", diagram.frame_beta}, {"events", std::move(events)}, {"polylines", std::move(lines)}};
}

double speed_from_json(const Json& json) {
    if (json.is_number()) {
        return json.get<double>();
    }
    if (json.is_string()) {
        const auto s = json.get<std::string>();
        if (s == "inf" || s == "infinity" || s == "Infinity") {
            return std::numeric_limits<double>::infinity();
        }
    }
    throw ValidationError("signal_speed must be a number or \"inf\"");
}

void merge_config(scenario::ScenarioConfig& config, const Json& json) {
    if (!json.is_object()) {
        throw ValidationError("scenario config must be a JSON object");
    }
    try {
        for (const auto& [key, value] : json.items()) {
            if (key == "signal_speed") {
                config.signal_speed = speed_from_json(value);
            } else if (key == "separation") {
                config.separation = value.get<double>();
            } else if (key == "input_spec") {
                config.input_spec = scenario::parse_input_spec(value.get<std::string>());
            } else if (key == "resource_spec") {
                config.resource_spec = scenario::parse_resource_spec(value.get<std::string>());
            } else if (key == "seed") {
                config.seed = value.get<std::uint64_t>();
            } else if (key == "frame_beta") {
                config.frame_beta = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
            } else {
                throw ValidationError("unknown scenario config field '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed scenario config: ") + e.what());
    }
}

}  // namespace gedanken::serialize
