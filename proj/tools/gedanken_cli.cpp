// gedanken: command-line front end for the teleportation / no-cloning /
// relativity simulator. Every subcommand prints one JSON document.

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "gedanken/channels.hpp"
#include "gedanken/errors.hpp"
#include "gedanken/qstate.hpp"
#include "gedanken/relativity.hpp"
#include "gedanken/rng.hpp"
#include "gedanken/scenario.hpp"
#include "gedanken/serialize.hpp"
#include "gedanken/teleport.hpp"

using namespace gedanken;
using serialize::Json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitInvariant = 3;

qstate::StateVector named_state(const std::string& name, const qstate::Labels& labels) {
    using qstate::CanonicalKind;
    if (name == "up" || name == "0") return qstate::canonical_state(CanonicalKind::up, labels);
    if (name == "down" || name == "1") return qstate::canonical_state(CanonicalKind::down, labels);
    if (name == "plus" || name == "+") return qstate::canonical_state(CanonicalKind::plus, labels);
    if (name == "minus" || name == "-") return qstate::canonical_state(CanonicalKind::minus, labels);
    if (name == "plus_i" || name == "+i") {
        const double h = std::sqrt(0.5);
        return qstate::StateVector(labels, qstate::Vector{{h, qstate::Complex(0.0, h)}});
    }
    throw ValidationError("unknown state '" + name + "' (expected up, down, plus, minus, plus_i)");
}

std::pair<double, double> parse_event(const std::string& text) {
    std::istringstream in(text);
    double t = 0.0;
    double x = 0.0;
    char comma = 0;
    if (!(in >> t >> comma >> x) || comma != ',' || !(in >> std::ws).eof()) {
        throw ValidationError("event must be written t,x (got '" + text + "')");
    }
    return {t, x};
}

double parse_speed(const std::string& text) {
    if (text == "inf" || text == "infinity") {
        return std::numeric_limits<double>::infinity();
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw ValidationError("speed must be a number or 'inf' (got '" + text + "')");
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
    }
}

void emit(const Json& doc, const std::string& out_path) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) {
        throw ValidationError("cannot write '" + out_path + "'");
    }
    out << text;
}

teleport::EntangledResource make_resource(scenario::ResourceSpec spec, Rng& rng) {
    using qstate::CanonicalKind;
    switch (spec) {
        case scenario::ResourceSpec::singlet:
            return teleport::derive_corrections(qstate::canonical_state(CanonicalKind::singlet, {"A", "B"}));
        case scenario::ResourceSpec::phi_plus:
            return teleport::derive_corrections(qstate::canonical_state(CanonicalKind::phi_plus, {"A", "B"}));
        case scenario::ResourceSpec::random:
            return teleport::derive_corrections(teleport::random_maximally_entangled_state(rng));
    }
    throw ValidationError("unknown resource");
}

Json matrix_list(const std::array<teleport::Matrix, 4>& ms) {
    Json out = Json::array();
    for (const auto& m : ms) out.push_back(serialize::to_json(m));
    return out;
}

// -- teleport ---------------------------------------------------------------

struct TeleportArgs {
    std::string input = "haar";
    std::string resource = "singlet";
    std::uint64_t seed = 0;
};

Json run_teleport(const TeleportArgs& args) {
    const auto input_spec = scenario::parse_input_spec(args.input);
    const auto resource_spec = scenario::parse_resource_spec(args.resource);
    Rng rng(args.seed);
    const auto input = input_spec == scenario::InputSpec::haar ? qstate::haar_random_state(1, rng, {"C"})
                                                               : named_state(args.input, {"C"});
    const auto resource = make_resource(resource_spec, rng);
    const auto transcript = teleport::run_teleportation(input, resource, rng);
    const auto dist = teleport::outcome_distribution(input, resource);
    return Json{{"seed", args.seed},
                {"input_spec", args.input},
                {"resource_spec", args.resource},
                {"corrections", matrix_list(resource.corrections())},
                {"outcome_distribution", Json(std::vector<double>(dist.begin(), dist.end()))},
                {"transcript", serialize::to_json(transcript)}};
}

// -- clone-check ------------------------------------------------------------

struct CloneArgs {
    std::string candidate = "basis-copier";
    std::string unitary_file;
    std::size_t m_qubits = 1;
    std::string a = "up";
    std::string b = "down";
    double alpha = std::sqrt(0.5);
    double beta = std::sqrt(0.5);
    double beta_phase = 0.0;
    std::optional<std::uint64_t> seed;
};

channels::CloneCandidate load_candidate(const CloneArgs& args) {
    if (!args.unitary_file.empty()) {
        const auto u = serialize::matrix_from_json(read_json_file(args.unitary_file));
        std::size_t n = 0;
        while ((Eigen::Index{1} << n) < u.rows()) ++n;
        if ((Eigen::Index{1} << n) != u.rows() || n < 3 || n > 2 + channels::kMaxApparatusQubits) {
            throw ValidationError("unitary must be 2^n x 2^n with 3 <= n <= " +
                                  std::to_string(2 + channels::kMaxApparatusQubits));
        }
        const std::size_t m = n - 2;
        qstate::Labels m_labels;
        for (std::size_t i = 0; i < m; ++i) m_labels.push_back("M" + std::to_string(i));
        return channels::CloneCandidate(u, qstate::StateVector::basis({"Y"}, 0), qstate::StateVector::basis(m_labels, 0));
    }
    if (args.candidate == "basis-copier") {
        return channels::basis_copier(args.m_qubits);
    }
    if (args.candidate == "random") {
        if (!args.seed) {
            throw ValidationError("--seed is required for a random candidate");
        }
        Rng rng(*args.seed);
        return channels::random_clone_candidate(args.m_qubits, rng);
    }
    throw ValidationError("unknown candidate '" + args.candidate + "' (expected basis-copier or random)");
}

Json run_clone_check(const CloneArgs& args) {
    const auto cand = load_candidate(args);
    const auto a = named_state(args.a, {"X"});
    const auto b = named_state(args.b, {"X"});
    const std::complex<double> beta = std::polar(args.beta, args.beta_phase);
    const auto report = channels::linearity_witness(cand, a, b, args.alpha, beta);
    const auto dichotomy = channels::check_clone_dichotomy(cand, a, b);
    Json doc = serialize::to_json(report);
    doc["dichotomy"] = Json{{"overlap", dichotomy.overlap},
                            {"both_cloned", dichotomy.both_cloned},
                            {"consistent", dichotomy.consistent}};
    return Json{{"candidate", args.unitary_file.empty() ? args.candidate : args.unitary_file},
                {"apparatus_qubits", cand.m_qubits()},
                {"a", args.a},
                {"b", args.b},
                {"witness", std::move(doc)}};
}

// -- nosignal ---------------------------------------------------------------

struct NosignalArgs {
    std::string resource = "singlet";
    std::size_t ops = 100;
    std::uint64_t seed = 0;
};

Json run_nosignal(const NosignalArgs& args) {
    if (args.ops == 0) {
        throw ValidationError("--ops must be positive");
    }
    Rng rng(args.seed);
    const auto resource = make_resource(scenario::parse_resource_spec(args.resource), rng);
    const auto rho = qstate::DensityOperator::from_pure(resource.state());

    std::vector<channels::KrausChannel> suite;
    std::array<std::size_t, 4> counts{};
    for (std::size_t i = 0; i < args.ops; ++i) {
        switch (i % 4) {
            case 0: suite.push_back(channels::KrausChannel::unitary({"A"}, qstate::haar_random_unitary(2, rng))); break;
            case 1: suite.push_back(channels::depolarizing("A", rng.uniform())); break;
            case 2: suite.push_back(channels::random_channel({"A"}, 1 + (i / 4) % 4, rng)); break;
            default:
                suite.push_back(channels::bell_measure_and_discard("A", qstate::haar_random_state(1, rng, {"C"}),
                                                                   {"m0", "m1"}));
                break;
        }
        ++counts[i % 4];
    }
    const double gap = channels::no_signaling_gap(rho, suite, {"B"});
    return Json{{"seed", args.seed},
                {"resource_spec", args.resource},
                {"operations", Json{{"unitary", counts[0]},
                                    {"depolarizing", counts[1]},
                                    {"random_channel", counts[2]},
                                    {"bell_measure_and_discard", counts[3]}}},
                {"gap", gap},
                {"within_tolerance", gap <= 1e-10}};
}

// -- frame ------------------------------------------------------------------

struct FrameArgs {
    std::string event1;
    std::string event2;
    std::optional<double> beta;
};

Json run_frame(const FrameArgs& args) {
    const auto [t1, x1] = parse_event(args.event1);
    const auto [t2, x2] = parse_event(args.event2);
    const auto e1 = relativity::make_event("1", t1, x1);
    const auto e2 = relativity::make_event("2", t2, x2);
    const auto interval = relativity::classify_interval(e1, e2);
    Json doc{{"events", Json::array({serialize::to_json(e1), serialize::to_json(e2)})},
             {"interval", Json{{"kind", relativity::to_string(interval.kind)}, {"ds2", interval.ds2}}}};

    Json witness = nullptr;
    if (const auto w = relativity::order_reversing_boost(e1, e2)) {
        witness = Json{{"threshold", w->threshold}, {"beta", w->boost.beta()}, {"gamma", w->boost.gamma()}};
    }
    doc["reversing_boost"] = std::move(witness);
    Json simul = nullptr;
    if (const auto s = relativity::simultaneity_boost(e1, e2)) {
        simul = s->beta();
    }
    doc["simultaneity_beta"] = std::move(simul);

    if (args.beta) {
        const relativity::Boost boost(*args.beta);
        const auto p1 = relativity::boost_event(e1, boost);
        const auto p2 = relativity::boost_event(e2, boost);
        doc["boosted"] = Json{{"beta", boost.beta()},
                              {"gamma", boost.gamma()},
                              {"events", Json::array({serialize::to_json(p1), serialize::to_json(p2)})},
                              {"order_reversed", (p2.t - p1.t) * (t2 - t1) < 0.0}};
    }
    return doc;
}

// -- scenario / diagram -----------------------------------------------------

struct ScenarioArgs {
    std::string config_path;
    std::optional<std::string> speed;
    std::optional<double> separation;
    std::optional<std::string> input;
    std::optional<std::string> resource;
    std::optional<std::uint64_t> seed;
    std::optional<double> frame_beta;
    std::string svg_path;
};

scenario::ScenarioConfig build_config(const ScenarioArgs& args) {
    scenario::ScenarioConfig config;
    bool have_seed = false;
    if (!args.config_path.empty()) {
        const Json file = read_json_file(args.config_path);
        serialize::merge_config(config, file);
        have_seed = file.is_object() && file.contains("seed");
    }
    if (args.speed) config.signal_speed = parse_speed(*args.speed);
    if (args.separation) config.separation = *args.separation;
    if (args.input) config.input_spec = scenario::parse_input_spec(*args.input);
    if (args.resource) config.resource_spec = scenario::parse_resource_spec(*args.resource);
    if (args.frame_beta) config.frame_beta = *args.frame_beta;
    if (args.seed) {
        config.seed = *args.seed;
        have_seed = true;
    }
    if (!have_seed) {
        throw ValidationError("--seed is required (or a \"seed\" field in the config file)");
    }
    config.validate();
    return config;
}

Json run_scenario(const ScenarioArgs& args) {
    return serialize::to_json(scenario::run_gedanken(build_config(args)));
}

Json run_diagram(const ScenarioArgs& args) {
    const auto report = scenario::run_gedanken(build_config(args));
    const auto data = scenario::diagram_data(report, report.report_frame);
    if (!args.svg_path.empty()) {
        std::ofstream out(args.svg_path);
        if (!out) {
            throw ValidationError("cannot write '" + args.svg_path + "'");
        }
        out << scenario::render_svg(data);
    }
    Json doc = serialize::to_json(data);
    doc["verdict"] = scenario::to_string(report.verdict);
    return doc;
}

void add_scenario_options(CLI::App* cmd, ScenarioArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON file with ScenarioConfig fields");
    cmd->add_option("--speed", args.speed, "signal speed in units of c, or 'inf'");
    cmd->add_option("--separation", args.separation, "Alice-Bob distance");
    cmd->add_option("--input", args.input, "up, down, plus, minus or haar");
    cmd->add_option("--resource", args.resource, "singlet, phi_plus or random");
    cmd->add_option("--seed", args.seed, "RNG seed");
    cmd->add_option("--frame-beta", args.frame_beta, "report frame velocity (|beta| < 1)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Teleportation, no-cloning and frame-reversal simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_path;
    app.add_option("--out", out_path, "write the JSON report here instead of stdout");

    TeleportArgs tele;
    auto* tele_cmd = app.add_subcommand("teleport", "run one teleportation and print its transcript");
    tele_cmd->add_option("--input", tele.input, "up, down, plus, minus or haar")->capture_default_str();
    tele_cmd->add_option("--resource", tele.resource, "singlet, phi_plus or random")->capture_default_str();
    tele_cmd->add_option("--seed", tele.seed, "RNG seed")->required();

    CloneArgs clone;
    auto* clone_cmd = app.add_subcommand("clone-check", "run the linearity witness on a clone candidate");
    clone_cmd->add_option("--candidate", clone.candidate, "basis-copier or random")->capture_default_str();
    clone_cmd->add_option("--unitary-file", clone.unitary_file, "JSON matrix on X, Y, M0.. (overrides --candidate)");
    clone_cmd->add_option("--m", clone.m_qubits, "apparatus qubits")->capture_default_str()->check(CLI::Range(1, 4));
    clone_cmd->add_option("--a", clone.a, "first named state")->capture_default_str();
    clone_cmd->add_option("--b", clone.b, "second named state")->capture_default_str();
    clone_cmd->add_option("--alpha", clone.alpha, "real amplitude of a")->capture_default_str();
    clone_cmd->add_option("--beta", clone.beta, "modulus of the amplitude of b")->capture_default_str();
    clone_cmd->add_option("--beta-phase", clone.beta_phase, "phase of the amplitude of b (radians)");
    clone_cmd->add_option("--seed", clone.seed, "RNG seed (required for --candidate random)");

    NosignalArgs nos;
    auto* nos_cmd = app.add_subcommand("nosignal", "max change in Bob's marginal over random Alice operations");
    nos_cmd->add_option("--resource", nos.resource, "singlet, phi_plus or random")->capture_default_str();
    nos_cmd->add_option("--ops", nos.ops, "number of Alice operations")->capture_default_str();
    nos_cmd->add_option("--seed", nos.seed, "RNG seed")->required();

    FrameArgs frame;
    auto* frame_cmd = app.add_subcommand("frame", "interval class and boosts for two events");
    frame_cmd->add_option("--event1", frame.event1, "t,x")->required();
    frame_cmd->add_option("--event2", frame.event2, "t,x")->required();
    frame_cmd->add_option("--beta", frame.beta, "also report both events in this frame");

    ScenarioArgs scen;
    auto* scen_cmd = app.add_subcommand("scenario", "full experiment report");
    add_scenario_options(scen_cmd, scen);

    ScenarioArgs diag;
    auto* diag_cmd = app.add_subcommand("diagram", "spacetime diagram data in the report frame");
    add_scenario_options(diag_cmd, diag);
    diag_cmd->add_option("--svg", diag.svg_path, "also render an SVG here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        Json doc;
        if (*tele_cmd) doc = run_teleport(tele);
        else if (*clone_cmd) doc = run_clone_check(clone);
        else if (*nos_cmd) doc = run_nosignal(nos);
        else if (*frame_cmd) doc = run_frame(frame);
        else if (*scen_cmd) doc = run_scenario(scen);
        else if (*diag_cmd) doc = run_diagram(diag);
        emit(doc, out_path);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violated: " << e.what() << "\n";
        return kExitInvariant;
    }
    return 0;
}
