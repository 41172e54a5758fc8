#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cat/events.hpp"

namespace cat {

struct SessionInfo {
    std::string session_id;
    std::string date;  // YYYY-MM-DD
    std::string canton;
    std::string school;
    std::string grade_level;
    bool programming_allowed = true;  // whether the P interface may be used

    friend bool operator==(const SessionInfo&, const SessionInfo&) = default;
};

struct StudentInfo {
    std::string student_id;
    std::string session_id;
    std::string gender;
    std::optional<std::string> birth_date;  // YYYY-MM-DD, dropped by pseudonymisation
    std::optional<int> age;                 // years at session date, set by pseudonymisation

    friend bool operator==(const StudentInfo&, const StudentInfo&) = default;
};

/// Whole years between two YYYY-MM-DD dates; nullopt if either does not parse.
std::optional<int> age_in_years(const std::string& birth_date, const std::string& on_date);
bool is_iso_date(const std::string& s);

class LogClosedError : public std::logic_error {
public:
    LogClosedError() : std::logic_error("event log is closed") {}
};

class EventRejected : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Append-only, per-session event log. Appends are serialised; readers get
/// consistent snapshots. Timestamps are non-decreasing per student: an event
/// up to `kSkewToleranceMs` behind that student's latest one is re-stamped,
/// anything older is rejected.
class EventLog {
public:
    using Clock = std::function<std::int64_t()>;
    static constexpr std::int64_t kSkewToleranceMs = 1000;

    explicit EventLog(SessionInfo session, Clock clock = system_clock_ms);

    /// Mirrors every appended event as one JSON line to `path` (flushed per append).
    void attach_sink(const std::string& path);

    void add_student(StudentInfo student);

    /// Appends with the caller's timestamp. Throws LogClosedError or EventRejected.
    const SessionEvent& record_event(SessionEvent event);
    /// Appends stamped by the log's clock.
    SessionEvent record(const std::string& student_id, const std::string& schema_id, EventKind kind,
                        Payload payload = {});

    void close();
    [[nodiscard]] bool closed() const;

    [[nodiscard]] SessionInfo session() const;
    [[nodiscard]] std::vector<StudentInfo> students() const;
    [[nodiscard]] std::vector<SessionEvent> events() const;
    [[nodiscard]] std::size_t size() const;

    static std::int64_t system_clock_ms();

private:
    mutable std::mutex mutex_;
    SessionInfo session_;
    Clock clock_;
    std::vector<StudentInfo> students_;
    std::vector<SessionEvent> events_;
    std::map<std::string, std::int64_t> last_stamp_;
    std::optional<std::string> sink_path_;
    bool closed_ = false;
};

}  // namespace cat
