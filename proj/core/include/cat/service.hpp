#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <shared_mutex>
#include <string>

#include "cat/engine.hpp"
#include "cat/scorer.hpp"
#include "cat/telemetry.hpp"

namespace cat {

using Json = nlohmann::ordered_json;

struct ServiceConfig {
    SchemaCatalog catalog = SchemaCatalog::bundled();
    Rubric rubric = default_rubric();
    std::string pseudonym_salt = "cat";
    std::optional<std::string> data_dir;  // event sinks, exports and mapping tables go here
    EventLog::Clock clock = EventLog::system_clock_ms;
};

/// Transport-independent result: HTTP-style status plus JSON body.
struct Response {
    Response() = default;
    Response(int s, Json b) : status(s), body(std::move(b)) {}

    int status = 200;
    Json body;
    std::string content_type = "application/json";
    std::string raw;  // used instead of body when non-empty (dataset export)

    [[nodiscard]] std::string text() const { return raw.empty() ? body.dump() : raw; }
};

/// Languages accepted for view labels.
bool is_supported_language(std::string_view lang) noexcept;
/// Localised UI label, falling back to English.
std::string label(std::string_view lang, std::string_view key);

/// Session lifecycle over the engine. All methods are thread-safe; requests
/// for one student run serially, different students run in parallel.
///
/// Action bodies: {"kind": "<EVENT_KIND>", "seq": n?, ...kind fields}
///   ADD_COMMAND       command
///   CONFIRM_COMMAND   (none; runs the whole draft)
///   REMOVE_COMMAND    index
///   REORDER_COMMANDS  from, to                (P only)
///   MODIFY_PROPERTY   index, property, value  (P only)
///   FEEDBACK_TOGGLE   state: on|off
///   INTERFACE_SWITCH  interface: G|P
///   RETRY, SURRENDER, TASK_COMPLETED, TASK_ABANDONED
/// Navigate body: {"module": "training"|"validation", "index": n, "seq": n?}
/// Survey body: {"answers": {"q1": "happy"|"neutral"|"sad", ...}}
class Service {
public:
    explicit Service(ServiceConfig config = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    Response create_session(const Json& body);
    Response register_student(const std::string& session_id, const Json& body);
    Response close_session(const std::string& session_id);
    Response export_session(const std::string& session_id, bool pseudo);

    Response submit_action(const std::string& student_id, const Json& body, std::string_view lang = "en");
    Response navigate(const std::string& student_id, const Json& body, std::string_view lang = "en");
    Response view(const std::string& student_id, std::string_view lang = "en");
    Response dashboard(const std::string& student_id, std::string_view lang = "en");
    Response submit_survey(const std::string& student_id, const Json& body);
    Response catalog() const;

    /// Full event log of a session (for audits and replay checks).
    [[nodiscard]] std::vector<SessionEvent> session_events(const std::string& session_id) const;
    /// Task records held by the live engines, students in registration order.
    [[nodiscard]] std::vector<TaskRecord> live_records(const std::string& session_id) const;
    [[nodiscard]] const SchemaCatalog& schema_catalog() const noexcept { return config_.catalog; }

private:
    struct Session;
    struct Student;

    ServiceConfig config_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::map<std::string, std::shared_ptr<Student>> students_;
    std::mutex id_mutex_;
    std::uint64_t id_state_;

    std::string new_id(const char* prefix);
    std::shared_ptr<Session> find_session(const std::string& id) const;
    std::shared_ptr<Student> find_student(const std::string& id) const;
    Json render_view(const Student& st, std::string_view lang) const;
    Response log_and_apply(Student& st, const std::string& schema_id, EventKind kind, Payload payload,
                           std::optional<std::int64_t> seq, std::string_view lang);
};

}  // namespace cat
