#include "cat/telemetry.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include "cat/dataset.hpp"

namespace cat {

namespace {

struct Ymd {
    int y, m, d;
};

std::optional<Ymd> parse_ymd(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (s[i] < '0' || s[i] > '9') return std::nullopt;
    Ymd out{std::stoi(s.substr(0, 4)), std::stoi(s.substr(5, 2)), std::stoi(s.substr(8, 2))};
    std::chrono::year_month_day ymd{std::chrono::year{out.y}, std::chrono::month{static_cast<unsigned>(out.m)},
                                    std::chrono::day{static_cast<unsigned>(out.d)}};
    if (!ymd.ok()) return std::nullopt;
    return out;
}

}  // namespace

bool is_iso_date(const std::string& s) { return parse_ymd(s).has_value(); }

std::optional<int> age_in_years(const std::string& birth_date, const std::string& on_date) {
    auto b = parse_ymd(birth_date);
    auto o = parse_ymd(on_date);
    if (!b || !o) return std::nullopt;
    int age = o->y - b->y;
    if (o->m < b->m || (o->m == b->m && o->d < b->d)) --age;
    return age;
}

EventLog::EventLog(SessionInfo session, Clock clock) : session_(std::move(session)), clock_(std::move(clock)) {}

std::int64_t EventLog::system_clock_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

void EventLog::attach_sink(const std::string& path) {
    std::lock_guard lock(mutex_);
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot open event sink " + path);
    sink_path_ = path;
}

void EventLog::add_student(StudentInfo student) {
    std::lock_guard lock(mutex_);
    if (closed_) throw LogClosedError{};
    students_.push_back(std::move(student));
}

const SessionEvent& EventLog::record_event(SessionEvent event) {
    std::lock_guard lock(mutex_);
    if (closed_) throw LogClosedError{};
    if (event.student_id.empty()) throw EventRejected("event has no student id");
    if (auto problem = validate_payload(event.kind, event.payload)) throw EventRejected(*problem);

    auto last = last_stamp_.find(event.student_id);
    if (last != last_stamp_.end() && event.timestamp_ms < last->second) {
        if (last->second - event.timestamp_ms > kSkewToleranceMs)
            throw EventRejected("timestamp " + std::to_string(event.timestamp_ms) + " is more than " +
                                std::to_string(kSkewToleranceMs) + " ms behind the student's previous event");
        event.timestamp_ms = last->second;
    }
    last_stamp_[event.student_id] = event.timestamp_ms;
    event.seq = events_.size();
    events_.push_back(std::move(event));

    if (sink_path_) {
        std::ofstream out(*sink_path_, std::ios::app);
        out << to_json_line(events_.back()) << '\n';
        out.flush();
    }
    return events_.back();
}

SessionEvent EventLog::record(const std::string& student_id, const std::string& schema_id, EventKind kind,
                              Payload payload) {
    SessionEvent e;
    e.timestamp_ms = clock_();
    e.student_id = student_id;
    e.schema_id = schema_id;
    e.kind = kind;
    e.payload = std::move(payload);
    return record_event(std::move(e));
}

void EventLog::close() {
    std::lock_guard lock(mutex_);
    closed_ = true;
}

bool EventLog::closed() const {
    std::lock_guard lock(mutex_);
    return closed_;
}

SessionInfo EventLog::session() const {
    std::lock_guard lock(mutex_);
    return session_;
}

std::vector<StudentInfo> EventLog::students() const {
    std::lock_guard lock(mutex_);
    return students_;
}

std::vector<SessionEvent> EventLog::events() const {
    std::lock_guard lock(mutex_);
    return events_;
}

std::size_t EventLog::size() const {
    std::lock_guard lock(mutex_);
    return events_.size();
}

}  // namespace cat
