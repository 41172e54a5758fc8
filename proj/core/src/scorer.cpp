#include "cat/scorer.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>

#include <nlohmann/json.hpp>

namespace cat {

std::string_view to_string(AlgorithmDimension d) noexcept {
    switch (d) {
    case AlgorithmDimension::D0: return "D0";
    case AlgorithmDimension::D1: return "D1";
    case AlgorithmDimension::D2: return "D2";
    }
    return "?";
}

std::optional<AlgorithmDimension> parse_dimension(std::string_view s) noexcept {
    if (s == "D0") return AlgorithmDimension::D0;
    if (s == "D1") return AlgorithmDimension::D1;
    if (s == "D2") return AlgorithmDimension::D2;
    return std::nullopt;
}

std::string_view to_string(Artefact a) noexcept { return a == Artefact::G ? "G" : "P"; }

std::optional<Artefact> parse_artefact(std::string_view s) noexcept {
    if (s == "G") return Artefact::G;
    if (s == "P") return Artefact::P;
    return std::nullopt;
}

std::string InteractionDimension::label() const {
    std::string out(to_string(artefact));
    if (feedback) out += 'F';
    return out;
}

std::optional<InteractionDimension> InteractionDimension::parse(std::string_view label) noexcept {
    if (label.empty() || label.size() > 2) return std::nullopt;
    auto a = parse_artefact(label.substr(0, 1));
    if (!a) return std::nullopt;
    if (label.size() == 2 && label[1] != 'F') return std::nullopt;
    return InteractionDimension{*a, label.size() == 2};
}

namespace {

AlgorithmDimension by_palette(const std::vector<Color>& colors) {
    std::set<Color> distinct(colors.begin(), colors.end());
    return distinct.size() > 1 ? AlgorithmDimension::D2 : AlgorithmDimension::D1;
}

}  // namespace

std::optional<AlgorithmDimension> classify_command(const Command& c) {
    if (c.is<GoCell>() || c.is<Go>()) return std::nullopt;
    if (c.is<PaintSingleCell>()) return AlgorithmDimension::D0;
    if (c.is<FillEmpty>()) return AlgorithmDimension::D1;
    if (const auto* p = std::get_if<PaintPattern>(&c.node)) return by_palette(p->colors);
    if (const auto* p = std::get_if<PaintMultipleCells>(&c.node)) return by_palette(p->colors);
    return AlgorithmDimension::D2;  // repeat, copy, mirror*
}

std::optional<AlgorithmDimension> classify_dimension(const Program& p) {
    std::optional<AlgorithmDimension> best;
    for (const auto& c : p.commands)
        if (auto d = classify_command(c); d && (!best || *d > *best)) best = d;
    return best;
}

// ---------------------------------------------------------------------------

Rubric default_rubric() { return {}; }

namespace {

int points(const nlohmann::json& table, const char* section, const char* key) {
    if (!table.contains(key)) throw RubricError(std::string("rubric is missing ") + section + "." + key);
    const auto& v = table.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 1'000'000)
        throw RubricError(std::string("rubric entry ") + section + "." + key + " must be a non-negative integer");
    return v.get<int>();
}

const nlohmann::json& section(const nlohmann::json& doc, const char* name) {
    if (!doc.contains(name) || !doc.at(name).is_object())
        throw RubricError(std::string("rubric is missing the '") + name + "' table");
    return doc.at(name);
}

}  // namespace

Rubric load_rubric(std::string_view document) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw RubricError(std::string("malformed rubric: ") + e.what());
    }
    if (!doc.is_object()) throw RubricError("malformed rubric: expected an object");
    Rubric r;
    r.id = doc.value("id", std::string("custom"));
    const auto& alg = section(doc, "algorithm");
    r.algorithm = {points(alg, "algorithm", "D0"), points(alg, "algorithm", "D1"), points(alg, "algorithm", "D2")};
    const auto& art = section(doc, "artefact");
    r.artefact = {points(art, "artefact", "G"), points(art, "artefact", "P")};
    const auto& aut = section(doc, "autonomy");
    r.with_feedback = points(aut, "autonomy", "feedback");
    r.without_feedback = points(aut, "autonomy", "no_feedback");
    return r;
}

Rubric load_rubric_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RubricError("cannot open rubric file " + path);
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return load_rubric(text);
}

std::string save_rubric(const Rubric& r) {
    nlohmann::ordered_json doc;
    doc["id"] = r.id;
    doc["algorithm"] = {{"D0", r.algorithm[0]}, {"D1", r.algorithm[1]}, {"D2", r.algorithm[2]}};
    doc["artefact"] = {{"G", r.artefact[0]}, {"P", r.artefact[1]}};
    doc["autonomy"] = {{"feedback", r.with_feedback}, {"no_feedback", r.without_feedback}};
    return doc.dump(2) + "\n";
}

CatScore cat_score(AlgorithmDimension dimension, InteractionDimension interaction, const Rubric& rubric) {
    CatScore s;
    s.algorithm_points = rubric.algorithm[static_cast<std::size_t>(dimension)];
    s.artefact_points = rubric.artefact[static_cast<std::size_t>(interaction.artefact)];
    s.autonomy_points = interaction.feedback ? rubric.with_feedback : rubric.without_feedback;
    s.total = s.algorithm_points + s.artefact_points + s.autonomy_points;
    s.rubric_id = rubric.id;
    return s;
}

bool check_success(const CrossBoard& board, const Schema& reference) {
    return reference.cells.is_complete() && board == reference.cells;
}

// ---------------------------------------------------------------------------

Expected<InteractionDimension, std::string> derive_interaction(std::span<const SessionEvent> task_events,
                                                               InteractionContext context) {
    std::optional<Artefact> current = context.artefact;
    bool feedback_on = context.feedback;
    bool feedback_seen = context.feedback;
    bool any_interface_event = context.artefact.has_value();

    std::optional<Artefact> at_confirm;   // last CONFIRM_COMMAND
    std::optional<Artefact> at_terminal;  // SURRENDER / TASK_COMPLETED / TASK_ABANDONED
    bool closed = false;

    for (const auto& e : task_events) {
        switch (e.kind) {
        case EventKind::interface_switch:
            current = parse_artefact(e.payload.count("interface") ? e.payload.at("interface") : "");
            any_interface_event = any_interface_event || current.has_value();
            break;
        case EventKind::feedback_toggle:
            feedback_on = e.payload.count("state") && e.payload.at("state") == "on";
            feedback_seen = feedback_seen || feedback_on;
            break;
        case EventKind::confirm_command:
            at_confirm = current;
            closed = true;
            break;
        default:
            if (is_terminal_event(e.kind)) {
                at_terminal = current;
                closed = true;
            }
            break;
        }
    }
    if (!closed) return Unexpected{std::string("task has no confirmation or surrender")};
    if (!any_interface_event) return Unexpected{std::string("task has no interface events")};
    auto artefact = at_confirm ? at_confirm : at_terminal;
    if (!artefact) return Unexpected{std::string("no interface was active at confirmation")};
    return InteractionDimension{*artefact, feedback_seen};
}

}  // namespace cat
