#include "cat/engine.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "cat/schema.hpp"

namespace cat {

std::string_view to_string(Module m) noexcept { return m == Module::training ? "training" : "validation"; }

std::optional<Module> parse_module(std::string_view s) noexcept {
    if (s == "training") return Module::training;
    if (s == "validation") return Module::validation;
    return std::nullopt;
}

std::string_view to_string(TaskStatus s) noexcept {
    switch (s) {
    case TaskStatus::active: return "active";
    case TaskStatus::completed: return "completed";
    case TaskStatus::surrendered: return "surrendered";
    case TaskStatus::abandoned: return "abandoned";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

SchemaCatalog::SchemaCatalog(std::vector<Schema> training, std::vector<Schema> validation)
    : training_(std::move(training)), validation_(std::move(validation)) {}

SchemaCatalog SchemaCatalog::bundled() { return {training_schemas(), validation_schemas()}; }

std::optional<SchemaCatalog::Entry> SchemaCatalog::find(std::string_view schema_id) const {
    for (Module m : {Module::training, Module::validation}) {
        const auto& list = schemas(m);
        for (std::size_t i = 0; i < list.size(); ++i)
            if (list[i].id == schema_id) return Entry{&list[i], m, i + 1};
    }
    return std::nullopt;
}

const std::vector<Schema>& SchemaCatalog::schemas(Module m) const {
    return m == Module::training ? training_ : validation_;
}

const Schema* SchemaCatalog::at(Module m, std::size_t index) const {
    const auto& list = schemas(m);
    if (index < 1 || index > list.size()) return nullptr;
    return &list[index - 1];
}

std::size_t SchemaCatalog::rank(std::string_view schema_id) const {
    auto e = find(schema_id);
    if (!e) return std::numeric_limits<std::size_t>::max();
    return e->module == Module::training ? e->index : training_.size() + e->index;
}

// ---------------------------------------------------------------------------
// Survey answers
// ---------------------------------------------------------------------------

std::string encode_answers(const std::map<std::string, std::string>& answers) {
    std::string out;
    for (const auto& [q, a] : answers) {
        if (!out.empty()) out += ',';
        out += q + "=" + a;
    }
    return out;
}

std::map<std::string, std::string> decode_answers(std::string_view text) {
    std::map<std::string, std::string> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        auto pair = text.substr(start, end - start);
        if (auto eq = pair.find('='); eq != std::string_view::npos)
            out[std::string(pair.substr(0, eq))] = std::string(pair.substr(eq + 1));
        start = end + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

namespace {

std::optional<std::size_t> to_index(const Payload& p, const char* key) {
    auto it = p.find(key);
    if (it == p.end()) return std::nullopt;
    std::size_t v = 0;
    const auto& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

StudentEngine::StudentEngine(const SchemaCatalog& catalog, std::string student_id)
    : catalog_(&catalog), student_id_(std::move(student_id)) {}

const TaskState* StudentEngine::task(std::string_view schema_id) const {
    auto it = tasks_.find(std::string(schema_id));
    return it == tasks_.end() ? nullptr : &it->second;
}

TaskState& StudentEngine::touch(const SessionEvent& e) {
    auto [it, inserted] = tasks_.try_emplace(e.schema_id);
    TaskState& t = it->second;
    if (inserted) {
        t.schema_id = e.schema_id;
        t.first_ms = e.timestamp_ms;
        t.context = {interface_, feedback_};
    } else if (last_schema_ != e.schema_id && feedback_ && !t.read_only()) {
        t.feedback_on_reentry = true;
    }
    t.last_ms = e.timestamp_ms;
    t.events.push_back(e);
    last_schema_ = e.schema_id;
    return t;
}

void StudentEngine::advance_from(const std::string& schema_id) {
    auto entry = catalog_->find(schema_id);
    if (!entry) return;
    if (const Schema* next = catalog_->at(entry->module, entry->index + 1)) active_ = next->id;
}

namespace {
bool changes_task(EventKind k) {
    switch (k) {
    case EventKind::add_command:
    case EventKind::remove_command:
    case EventKind::reorder_commands:
    case EventKind::modify_property:
    case EventKind::confirm_command:
    case EventKind::retry:
    case EventKind::surrender:
    case EventKind::task_completed:
    case EventKind::task_abandoned: return true;
    default: return false;
    }
}
}  // namespace

void StudentEngine::apply(const SessionEvent& e) {
    // locked tasks ignore further edits
    if (auto it = tasks_.find(e.schema_id); it != tasks_.end() && it->second.read_only() && changes_task(e.kind))
        return;
    TaskState& t = touch(e);
    active_ = e.schema_id;
    const Payload& p = e.payload;

    switch (e.kind) {
    case EventKind::add_command:
        if (auto c = parse_command(p.at("command"))) t.draft.push_back(std::move(*c));
        t.attempted = true;
        break;
    case EventKind::remove_command:
        if (auto i = to_index(p, "index"); i && *i < t.draft.size())
            t.draft.erase(t.draft.begin() + static_cast<std::ptrdiff_t>(*i));
        t.attempted = true;
        break;
    case EventKind::reorder_commands: {
        auto from = to_index(p, "from");
        auto to = to_index(p, "to");
        if (from && to && *from < t.draft.size() && *to < t.draft.size()) {
            Command moved = t.draft[*from];
            t.draft.erase(t.draft.begin() + static_cast<std::ptrdiff_t>(*from));
            t.draft.insert(t.draft.begin() + static_cast<std::ptrdiff_t>(*to), std::move(moved));
        }
        t.attempted = true;
        break;
    }
    case EventKind::modify_property:
        if (auto i = to_index(p, "index"); i && *i < t.draft.size())
            if (auto changed = modify_argument(t.draft[*i], p.at("property"), p.at("new")))
                t.draft[*i] = std::move(*changed);
        t.attempted = true;
        break;
    case EventKind::confirm_command: {
        t.attempted = true;
        t.last_error.reset();
        std::size_t done = 0;
        for (; done < t.draft.size(); ++done) {
            if (auto err = execute(t.exec, t.draft[done])) {
                t.last_error = std::move(err);
                break;
            }
            t.program.commands.push_back(t.draft[done]);
        }
        t.draft.erase(t.draft.begin(), t.draft.begin() + static_cast<std::ptrdiff_t>(done));
        break;
    }
    case EventKind::feedback_toggle: feedback_ = p.at("state") == "on"; break;
    case EventKind::interface_switch:
        if (auto a = parse_artefact(p.at("interface"))) interface_ = *a;
        break;
    case EventKind::retry:
        t.exec = {};
        t.program = {};
        t.draft.clear();
        t.last_error.reset();
        break;
    case EventKind::navigate: active_ = p.at("target"); break;
    case EventKind::surrender:
        t.status = TaskStatus::surrendered;
        t.end_ms = e.timestamp_ms;
        advance_from(e.schema_id);
        break;
    case EventKind::task_completed: {
        t.status = TaskStatus::completed;
        t.end_ms = e.timestamp_ms;
        auto entry = catalog_->find(e.schema_id);
        t.success = entry && check_success(t.exec.board, *entry->schema);
        advance_from(e.schema_id);
        break;
    }
    case EventKind::task_abandoned:
        t.status = TaskStatus::abandoned;
        t.end_ms = e.timestamp_ms;
        advance_from(e.schema_id);
        break;
    case EventKind::survey_response:
        for (auto& [q, a] : decode_answers(p.at("answers"))) survey_[q] = a;
        break;
    }
}

bool StudentEngine::module_finished(Module m) const {
    for (const auto& s : catalog_->schemas(m)) {
        const TaskState* t = task(s.id);
        if (!t || !t->read_only()) return false;
    }
    return true;
}

std::optional<InteractionDimension> StudentEngine::interaction_of(const TaskState& t) const {
    auto d = derive_interaction(t.events, t.context);
    if (!d) return std::nullopt;
    InteractionDimension out = *d;
    out.feedback = out.feedback || t.feedback_on_reentry;
    return out;
}

TaskRecord StudentEngine::record_of(const TaskState& t, const Rubric& rubric) const {
    TaskRecord r;
    r.student_id = student_id_;
    r.schema_id = t.schema_id;
    auto entry = catalog_->find(t.schema_id);
    r.module = entry ? std::string(to_string(entry->module)) : "unknown";
    r.attempted = t.attempted;
    r.solved = t.status == TaskStatus::completed && t.success;
    r.surrendered = t.status == TaskStatus::surrendered;
    r.abandoned = t.status == TaskStatus::abandoned;
    r.truncated = t.attempted && t.status == TaskStatus::active;
    r.duration_ms = t.end_ms.value_or(t.last_ms) - t.first_ms;
    r.dimension = classify_dimension(t.program);
    r.interaction = interaction_of(t);
    if (r.solved && entry && entry->module == Module::validation && r.dimension && r.interaction)
        r.score = cat_score(*r.dimension, *r.interaction, rubric);
    r.board = t.exec.board.to_compact();
    r.program = format_program(t.program);
    return r;
}

std::vector<TaskRecord> StudentEngine::records(const Rubric& rubric) const {
    std::vector<const TaskState*> ordered;
    for (const auto& [id, t] : tasks_) ordered.push_back(&t);
    std::stable_sort(ordered.begin(), ordered.end(), [this](const TaskState* a, const TaskState* b) {
        auto ra = catalog_->rank(a->schema_id), rb = catalog_->rank(b->schema_id);
        if (ra != rb) return ra < rb;
        return a->schema_id < b->schema_id;
    });
    std::vector<TaskRecord> out;
    out.reserve(ordered.size());
    for (const TaskState* t : ordered) out.push_back(record_of(*t, rubric));
    return out;
}

std::map<std::string, StudentEngine> replay(std::span<const SessionEvent> events, const SchemaCatalog& catalog) {
    std::map<std::string, StudentEngine> engines;
    for (const auto& e : events) {
        auto it = engines.find(e.student_id);
        if (it == engines.end()) it = engines.emplace(e.student_id, StudentEngine(catalog, e.student_id)).first;
        it->second.apply(e);
    }
    return engines;
}

std::vector<TaskRecord> derive_task_records(std::span<const SessionEvent> events, const SchemaCatalog& catalog,
                                            const Rubric& rubric) {
    auto engines = replay(events, catalog);
    std::vector<std::string> order;
    for (const auto& e : events)
        if (std::find(order.begin(), order.end(), e.student_id) == order.end()) order.push_back(e.student_id);
    std::vector<TaskRecord> out;
    for (const auto& id : order) {
        auto recs = engines.at(id).records(rubric);
        out.insert(out.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
    }
    return out;
}

}  // namespace cat
