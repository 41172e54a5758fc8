#include "cat/events.hpp"

#include <array>
#include <charconv>

#include "cat/lang.hpp"

namespace cat {

namespace {

constexpr std::array<std::string_view, 13> kEventNames{
    "ADD_COMMAND",      "CONFIRM_COMMAND", "REMOVE_COMMAND", "REORDER_COMMANDS", "MODIFY_PROPERTY",
    "FEEDBACK_TOGGLE",  "INTERFACE_SWITCH", "RETRY",         "SURRENDER",        "NAVIGATE",
    "TASK_COMPLETED",   "TASK_ABANDONED",  "SURVEY_RESPONSE"};

bool is_index(const std::string& s) {
    if (s.empty()) return false;
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::string_view to_string(EventKind k) noexcept { return kEventNames[static_cast<std::size_t>(k)]; }

std::optional<EventKind> parse_event_kind(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kEventNames.size(); ++i)
        if (kEventNames[i] == name) return static_cast<EventKind>(i);
    return std::nullopt;
}

bool is_command_event(EventKind k) noexcept {
    switch (k) {
    case EventKind::add_command:
    case EventKind::confirm_command:
    case EventKind::remove_command:
    case EventKind::reorder_commands:
    case EventKind::modify_property: return true;
    default: return false;
    }
}

bool is_terminal_event(EventKind k) noexcept {
    return k == EventKind::task_completed || k == EventKind::task_abandoned || k == EventKind::surrender;
}

const std::vector<std::string_view>& payload_keys(EventKind k) {
    static const std::vector<std::string_view> none;
    static const std::vector<std::string_view> command{"command"};
    static const std::vector<std::string_view> index{"index"};
    static const std::vector<std::string_view> reorder{"from", "to"};
    static const std::vector<std::string_view> modify{"index", "new", "old", "property"};
    static const std::vector<std::string_view> state{"state"};
    static const std::vector<std::string_view> iface{"interface"};
    static const std::vector<std::string_view> target{"target"};
    static const std::vector<std::string_view> success{"success"};
    static const std::vector<std::string_view> answers{"answers"};
    switch (k) {
    case EventKind::add_command:
    case EventKind::confirm_command: return command;
    case EventKind::remove_command: return index;
    case EventKind::reorder_commands: return reorder;
    case EventKind::modify_property: return modify;
    case EventKind::feedback_toggle: return state;
    case EventKind::interface_switch: return iface;
    case EventKind::navigate: return target;
    case EventKind::task_completed: return success;
    case EventKind::survey_response: return answers;
    case EventKind::retry:
    case EventKind::surrender:
    case EventKind::task_abandoned: return none;
    }
    return none;
}

std::optional<std::string> validate_payload(EventKind k, const Payload& payload) {
    const auto& keys = payload_keys(k);
    if (payload.size() != keys.size())
        return std::string(to_string(k)) + " payload expects " + std::to_string(keys.size()) + " field(s), got " +
               std::to_string(payload.size());
    for (auto key : keys)
        if (!payload.contains(std::string(key)))
            return std::string(to_string(k)) + " payload is missing '" + std::string(key) + "'";

    switch (k) {
    case EventKind::add_command:
        if (!parse_command(payload.at("command")))
            return "ADD_COMMAND payload is not a single valid command";
        break;
    case EventKind::confirm_command:
        if (!parse_program(payload.at("command"))) return "CONFIRM_COMMAND payload is not a valid program";
        break;
    case EventKind::remove_command:
        if (!is_index(payload.at("index"))) return "REMOVE_COMMAND index must be a non-negative integer";
        break;
    case EventKind::reorder_commands:
        if (!is_index(payload.at("from")) || !is_index(payload.at("to")))
            return "REORDER_COMMANDS positions must be non-negative integers";
        break;
    case EventKind::modify_property:
        if (!is_index(payload.at("index"))) return "MODIFY_PROPERTY index must be a non-negative integer";
        if (payload.at("property").empty()) return "MODIFY_PROPERTY needs a property name";
        break;
    case EventKind::feedback_toggle:
        if (payload.at("state") != "on" && payload.at("state") != "off") return "FEEDBACK_TOGGLE state must be on|off";
        break;
    case EventKind::interface_switch:
        if (payload.at("interface") != "G" && payload.at("interface") != "P")
            return "INTERFACE_SWITCH interface must be G|P";
        break;
    case EventKind::navigate:
        if (payload.at("target").empty()) return "NAVIGATE needs a target schema";
        break;
    case EventKind::task_completed:
        if (payload.at("success") != "true" && payload.at("success") != "false")
            return "TASK_COMPLETED success must be true|false";
        break;
    default: break;
    }
    return std::nullopt;
}

}  // namespace cat
