#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cat {

enum class EventKind {
    add_command,
    confirm_command,
    remove_command,
    reorder_commands,
    modify_property,
    feedback_toggle,
    interface_switch,
    retry,
    surrender,
    navigate,
    task_completed,
    task_abandoned,
    survey_response,
};

/// Wire name, e.g. "ADD_COMMAND".
std::string_view to_string(EventKind k) noexcept;
std::optional<EventKind> parse_event_kind(std::string_view name) noexcept;

/// Events that edit or run the student's program; any of them marks a task attempted.
bool is_command_event(EventKind k) noexcept;
/// TASK_COMPLETED, TASK_ABANDONED and SURRENDER close a task.
bool is_terminal_event(EventKind k) noexcept;

using Payload = std::map<std::string, std::string>;

/// Payload keys per kind:
///   ADD_COMMAND       command
///   CONFIRM_COMMAND   command           (canonical text of the commands run)
///   REMOVE_COMMAND    index
///   REORDER_COMMANDS  from, to
///   MODIFY_PROPERTY   index, property, old, new
///   FEEDBACK_TOGGLE   state             (on | off)
///   INTERFACE_SWITCH  interface         (G | P)
///   NAVIGATE          target            (schema id)
///   TASK_COMPLETED    success           (true | false)
///   SURVEY_RESPONSE   answers           (question=answer pairs joined by ',')
///   RETRY, SURRENDER, TASK_ABANDONED    no keys
const std::vector<std::string_view>& payload_keys(EventKind k);

/// Error text when the payload does not fit its kind.
std::optional<std::string> validate_payload(EventKind k, const Payload& payload);

struct SessionEvent {
    std::uint64_t seq = 0;  // position in the log, assigned on append
    std::int64_t timestamp_ms = 0;
    std::string student_id;
    std::string schema_id;
    EventKind kind = EventKind::add_command;
    Payload payload;

    friend bool operator==(const SessionEvent&, const SessionEvent&) = default;
};

}  // namespace cat
