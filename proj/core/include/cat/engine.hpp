#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cat/board.hpp"
#include "cat/events.hpp"
#include "cat/interp.hpp"
#include "cat/lang.hpp"
#include "cat/scorer.hpp"

namespace cat {

enum class Module { training, validation };

std::string_view to_string(Module m) noexcept;
std::optional<Module> parse_module(std::string_view s) noexcept;

/// Training and validation schema sets. Schema ids are unique across both.
class SchemaCatalog {
public:
    SchemaCatalog(std::vector<Schema> training, std::vector<Schema> validation);
    static SchemaCatalog bundled();

    struct Entry {
        const Schema* schema;
        Module module;
        std::size_t index;  // 1-based within the module
    };

    [[nodiscard]] std::optional<Entry> find(std::string_view schema_id) const;
    [[nodiscard]] const std::vector<Schema>& schemas(Module m) const;
    /// 1-based index within a module.
    [[nodiscard]] const Schema* at(Module m, std::size_t index) const;
    [[nodiscard]] std::size_t size(Module m) const { return schemas(m).size(); }
    /// Catalog position used to order records: training first, then validation.
    [[nodiscard]] std::size_t rank(std::string_view schema_id) const;

private:
    std::vector<Schema> training_;
    std::vector<Schema> validation_;
};

enum class TaskStatus { active, completed, surrendered, abandoned };

std::string_view to_string(TaskStatus s) noexcept;

/// Live state of one (student, schema) task, rebuilt purely from events.
struct TaskState {
    std::string schema_id;
    std::vector<Command> draft;  // workspace blocks not yet run
    Program program;             // commands run successfully since the last retry
    ExecState exec;
    std::optional<ExecError> last_error;
    TaskStatus status = TaskStatus::active;
    bool success = false;
    bool attempted = false;
    std::int64_t first_ms = 0;
    std::int64_t last_ms = 0;
    std::optional<std::int64_t> end_ms;
    std::vector<SessionEvent> events;
    InteractionContext context;  // interface/feedback when the task was first touched
    bool feedback_on_reentry = false;

    [[nodiscard]] bool read_only() const noexcept { return status != TaskStatus::active; }
};

struct TaskRecord {
    std::string student_id;
    std::string schema_id;
    std::string module;
    bool attempted = false;
    bool solved = false;
    bool surrendered = false;
    bool abandoned = false;
    bool truncated = false;  // attempted but never closed
    std::int64_t duration_ms = 0;
    std::optional<AlgorithmDimension> dimension;
    std::optional<InteractionDimension> interaction;
    std::optional<CatScore> score;
    std::string board;    // compact 20-glyph form
    std::string program;  // canonical text of the run program

    friend bool operator==(const TaskRecord&, const TaskRecord&) = default;
};

/// Per-student reducer over the event stream. The HTTP service drives it live
/// and replay drives it from a stored log, so both produce identical state.
class StudentEngine {
public:
    StudentEngine(const SchemaCatalog& catalog, std::string student_id);

    /// Applies one already-validated event. Unknown indices are ignored.
    void apply(const SessionEvent& e);

    [[nodiscard]] const std::string& student_id() const noexcept { return student_id_; }
    [[nodiscard]] Artefact interface() const noexcept { return interface_; }
    [[nodiscard]] bool feedback() const noexcept { return feedback_; }
    [[nodiscard]] const std::string& active_schema() const noexcept { return active_; }
    void set_active_schema(std::string schema_id) { active_ = std::move(schema_id); }

    [[nodiscard]] const TaskState* task(std::string_view schema_id) const;
    [[nodiscard]] const std::map<std::string, std::string>& survey() const noexcept { return survey_; }
    [[nodiscard]] bool module_finished(Module m) const;

    /// Interaction category the task would be credited with right now.
    [[nodiscard]] std::optional<InteractionDimension> interaction_of(const TaskState& t) const;
    [[nodiscard]] TaskRecord record_of(const TaskState& t, const Rubric& rubric) const;
    /// Records for every touched task, in catalog order.
    [[nodiscard]] std::vector<TaskRecord> records(const Rubric& rubric) const;

private:
    const SchemaCatalog* catalog_;
    std::string student_id_;
    Artefact interface_ = Artefact::G;
    bool feedback_ = false;
    std::string active_;
    std::string last_schema_;
    std::map<std::string, TaskState> tasks_;
    std::map<std::string, std::string> survey_;

    TaskState& touch(const SessionEvent& e);
    void advance_from(const std::string& schema_id);
};

/// Survey answers wire form: "q1=happy,q2=sad" (sorted by question id).
std::string encode_answers(const std::map<std::string, std::string>& answers);
std::map<std::string, std::string> decode_answers(std::string_view text);

/// Replays a log and returns one engine per student, keyed by student id.
std::map<std::string, StudentEngine> replay(std::span<const SessionEvent> events, const SchemaCatalog& catalog);

/// Task records for a whole log: students in order of first appearance,
/// tasks in catalog order.
std::vector<TaskRecord> derive_task_records(std::span<const SessionEvent> events, const SchemaCatalog& catalog,
                                            const Rubric& rubric = default_rubric());

}  // namespace cat
