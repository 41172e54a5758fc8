#include "cat/service.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "cat/analysis.hpp"
#include "cat/dataset.hpp"
#include "cat/interp.hpp"

namespace cat {

namespace {

struct Labels {
    std::string_view key, en, it, fr, de;
};

constexpr std::array kLabels{
    Labels{"reference", "Reference", "Schema di riferimento", "Schéma de référence", "Vorlage"},
    Labels{"board", "Your colouring", "La tua colorazione", "Ton coloriage", "Deine Färbung"},
    Labels{"score", "Score", "Punteggio", "Score", "Punktzahl"},
    Labels{"progress", "Progress", "Avanzamento", "Progression", "Fortschritt"},
    Labels{"retry", "Retry", "Riprova", "Réessayer", "Nochmal"},
    Labels{"surrender", "Give up", "Mi arrendo", "Abandonner", "Aufgeben"},
    Labels{"feedback_on", "Feedback on", "Feedback attivo", "Retour activé", "Rückmeldung an"},
    Labels{"feedback_off", "Feedback off", "Feedback disattivo", "Retour désactivé", "Rückmeldung aus"},
    Labels{"correct", "Correct", "Corretto", "Correct", "Richtig"},
    Labels{"incorrect", "Incorrect", "Sbagliato", "Incorrect", "Falsch"},
    Labels{"skipped", "Skipped", "Saltato", "Passé", "Übersprungen"},
    Labels{"survey", "How did you like it?", "Ti è piaciuto?", "Ça t'a plu ?", "Wie hat es dir gefallen?"},
};

constexpr std::array kSmileys{"happy", "neutral", "sad"};

Response error(int status, std::string code, std::string message, Json extra = Json::object()) {
    Json body = Json::object();
    body["error"] = std::move(code);
    body["message"] = std::move(message);
    for (auto& [k, v] : extra.items()) body[k] = v;
    return {status, std::move(body)};
}

Response not_found(const std::string& what, const std::string& id) {
    return error(404, "not_found", "unknown " + what + " '" + id + "'");
}

Json board_json(const CrossBoard& b) {
    Json cells = Json::object();
    for (const auto& c : all_cells()) {
        auto v = b.get(c);
        cells[c.to_string()] = v ? Json(std::string(to_string(*v))) : Json(nullptr);
    }
    return {{"cells", cells}, {"compact", b.to_compact()}, {"grid", render_grid(b)}};
}

Json exec_error_json(const ExecError& e) {
    return {{"kind", std::string(to_string(e.kind))},
            {"command_index", e.command_index},
            {"command", e.command},
            {"message", e.message},
            {"suggestion", e.suggestion},
            {"cell", e.cell ? Json(e.cell->to_string()) : Json(nullptr)}};
}

Json parse_error_json(const ParseError& e) {
    return {{"kind", std::string(to_string(e.kind))},
            {"offset", e.offset},
            {"line", e.line},
            {"column", e.column},
            {"message", e.message}};
}

Json score_json(const CatScore& s) {
    return {{"algorithm", s.algorithm_points},
            {"artefact", s.artefact_points},
            {"autonomy", s.autonomy_points},
            {"total", s.total},
            {"rubric", s.rubric_id}};
}

std::optional<std::string> required_string(const Json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end() || !it->is_string() || it->get<std::string>().empty()) return std::nullopt;
    return it->get<std::string>();
}

std::optional<std::int64_t> integer(const Json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end() || !it->is_number_integer()) return std::nullopt;
    return it->get<std::int64_t>();
}

}  // namespace

bool is_supported_language(std::string_view lang) noexcept {
    return lang == "en" || lang == "it" || lang == "fr" || lang == "de";
}

std::string label(std::string_view lang, std::string_view key) {
    for (const auto& l : kLabels) {
        if (l.key != key) continue;
        if (lang == "it") return std::string(l.it);
        if (lang == "fr") return std::string(l.fr);
        if (lang == "de") return std::string(l.de);
        return std::string(l.en);
    }
    return std::string(key);
}

struct Service::Session {
    SessionInfo info;
    std::unique_ptr<EventLog> log;
    std::vector<std::string> students;
};

struct Service::Student {
    Student(const SchemaCatalog& catalog, std::string id, std::shared_ptr<Session> s)
        : id(id), session(std::move(s)), engine(catalog, std::move(id)) {}

    std::mutex mutex;
    std::string id;
    std::shared_ptr<Session> session;
    StudentEngine engine;
    std::optional<std::int64_t> last_seq;
};

Service::Service(ServiceConfig config) : config_(std::move(config)), id_state_(std::random_device{}()) {
    if (config_.data_dir) std::filesystem::create_directories(*config_.data_dir);
}

Service::~Service() = default;

std::string Service::new_id(const char* prefix) {
    std::lock_guard lock(id_mutex_);
    static constexpr char hex[] = "0123456789abcdef";
    // splitmix64 over a random start
    id_state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = id_state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    std::string out = std::string(prefix) + "-";
    for (int i = 0; i < 12; ++i) out += hex[(z >> (i * 4)) & 0xf];
    return out;
}

std::shared_ptr<Service::Session> Service::find_session(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

std::shared_ptr<Service::Student> Service::find_student(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = students_.find(id);
    return it == students_.end() ? nullptr : it->second;
}

// ---------------------------------------------------------------------------
// Sessions and students
// ---------------------------------------------------------------------------

Response Service::create_session(const Json& body) {
    if (!body.is_object()) return error(400, "bad_request", "body must be a JSON object");
    Json fields = Json::object();
    SessionInfo info;
    for (auto [key, dest] : {std::pair{"date", &info.date}, std::pair{"canton", &info.canton},
                             std::pair{"school", &info.school}, std::pair{"grade_level", &info.grade_level}}) {
        if (auto v = required_string(body, key))
            *dest = *v;
        else
            fields[key] = "required";
    }
    if (!info.date.empty() && !is_iso_date(info.date)) fields["date"] = "expected YYYY-MM-DD";
    if (body.contains("programming_allowed")) {
        if (body["programming_allowed"].is_boolean())
            info.programming_allowed = body["programming_allowed"].get<bool>();
        else
            fields["programming_allowed"] = "expected a boolean";
    }
    if (!fields.empty()) return error(422, "validation", "session form is incomplete", {{"fields", fields}});

    info.session_id = new_id("ses");
    auto session = std::make_shared<Session>();
    session->info = info;
    session->log = std::make_unique<EventLog>(info, config_.clock);
    if (config_.data_dir)
        session->log->attach_sink((std::filesystem::path(*config_.data_dir) / (info.session_id + ".events.jsonl")).string());
    {
        std::unique_lock lock(mutex_);
        sessions_[info.session_id] = session;
    }
    return {201, {{"session_id", info.session_id}}};
}

Response Service::register_student(const std::string& session_id, const Json& body) {
    auto session = find_session(session_id);
    if (!session) return not_found("session", session_id);
    if (!body.is_object()) return error(400, "bad_request", "body must be a JSON object");
    Json fields = Json::object();
    StudentInfo info;
    info.session_id = session_id;
    if (auto g = required_string(body, "gender"))
        info.gender = *g;
    else
        fields["gender"] = "required";
    if (auto b = required_string(body, "birth_date")) {
        if (is_iso_date(*b))
            info.birth_date = *b;
        else
            fields["birth_date"] = "expected YYYY-MM-DD";
    } else {
        fields["birth_date"] = "required";
    }
    if (!fields.empty()) return error(422, "validation", "student form is incomplete", {{"fields", fields}});

    info.student_id = new_id("stu");
    try {
        session->log->add_student(info);
    } catch (const LogClosedError&) {
        return error(409, "session_closed", "session is closed");
    }
    auto student = std::make_shared<Student>(config_.catalog, info.student_id, session);
    {
        std::unique_lock lock(mutex_);
        session->students.push_back(info.student_id);
    }
    Module first = config_.catalog.size(Module::training) ? Module::training : Module::validation;
    if (const Schema* s = config_.catalog.at(first, 1)) student->engine.set_active_schema(s->id);
    {
        std::unique_lock lock(mutex_);
        students_[info.student_id] = student;
    }
    return {201, {{"student_id", info.student_id}, {"session_id", session_id}}};
}

Response Service::close_session(const std::string& session_id) {
    auto session = find_session(session_id);
    if (!session) return not_found("session", session_id);
    session->log->close();
    return {200, {{"session_id", session_id}, {"closed", true}, {"events", session->log->size()}}};
}

Response Service::export_session(const std::string& session_id, bool pseudo) {
    auto session = find_session(session_id);
    if (!session) return not_found("session", session_id);
    if (!session->log->closed()) return error(409, "session_active", "session still active");

    std::string data = export_log(*session->log, config_.catalog, config_.rubric);
    std::string name = session_id;
    if (pseudo) {
        auto p = pseudonymise(data, config_.pseudonym_salt);
        data = std::move(p.dataset);
        name += ".pseudo";
        if (config_.data_dir) {
            std::ofstream out(std::filesystem::path(*config_.data_dir) / (session_id + ".mapping.csv"));
            out << mapping_to_csv(p.mapping);
        }
    }
    if (config_.data_dir) {
        std::ofstream out(std::filesystem::path(*config_.data_dir) / (name + ".catlog.jsonl"));
        out << data;
    }
    Response r;
    r.raw = std::move(data);
    r.content_type = "application/x-ndjson";
    return r;
}

std::vector<SessionEvent> Service::session_events(const std::string& session_id) const {
    auto session = find_session(session_id);
    return session ? session->log->events() : std::vector<SessionEvent>{};
}

std::vector<TaskRecord> Service::live_records(const std::string& session_id) const {
    auto session = find_session(session_id);
    if (!session) return {};
    std::vector<std::string> ids;
    {
        std::shared_lock lock(mutex_);
        ids = session->students;
    }
    std::vector<TaskRecord> out;
    for (const auto& id : ids) {
        auto st = find_student(id);
        if (!st) continue;
        std::lock_guard lock(st->mutex);
        auto recs = st->engine.records(config_.rubric);
        out.insert(out.end(), recs.begin(), recs.end());
    }
    return out;
}

Response Service::catalog() const {
    Json out = Json::object();
    for (Module m : {Module::training, Module::validation}) {
        Json list = Json::array();
        for (const auto& s : config_.catalog.schemas(m)) list.push_back({{"id", s.id}, {"board", board_json(s.cells)}});
        out[std::string(to_string(m))] = list;
    }
    return {200, out};
}

// ---------------------------------------------------------------------------
// Student actions
// ---------------------------------------------------------------------------

Json Service::render_view(const Student& st, std::string_view lang) const {
    const StudentEngine& eng = st.engine;
    const std::string& active = eng.active_schema();
    auto entry = config_.catalog.find(active);
    const TaskState* task = eng.task(active);

    Json v;
    v["student_id"] = st.id;
    v["session_id"] = st.session->info.session_id;
    v["module"] = entry ? std::string(to_string(entry->module)) : "";
    v["schema_id"] = active;
    v["progress"] = {{"index", entry ? entry->index : 0}, {"total", entry ? config_.catalog.size(entry->module) : 0}};
    v["interface"] = std::string(to_string(eng.interface()));
    v["programming_allowed"] = st.session->info.programming_allowed;
    v["feedback"] = eng.feedback();
    v["status"] = task ? std::string(to_string(task->status)) : "active";
    v["read_only"] = task && task->read_only();
    if (entry) v["reference"] = board_json(entry->schema->cells);

    ExecState empty;
    const ExecState& exec = task ? task->exec : empty;
    if (eng.feedback()) {
        v["board"] = board_json(exec.board);
        v["cursor"] = exec.cursor ? Json(exec.cursor->to_string()) : Json(nullptr);
        v["matches_reference"] = entry && check_success(exec.board, *entry->schema);
    }

    Json draft = Json::array(), program = Json::array();
    if (task) {
        for (const auto& c : task->draft) draft.push_back(format_command(c));
        for (const auto& c : task->program.commands) program.push_back(format_command(c));
    }
    v["draft"] = draft;
    v["program"] = program;
    v["error"] = task && task->last_error ? exec_error_json(*task->last_error) : Json(nullptr);

    std::optional<AlgorithmDimension> dim;
    if (task) dim = classify_dimension(task->program);
    std::optional<InteractionDimension> inter = task ? eng.interaction_of(*task) : std::nullopt;
    if (!inter) inter = InteractionDimension{eng.interface(), eng.feedback()};
    v["dimension"] = dim ? Json(std::string(to_string(*dim))) : Json(nullptr);
    v["interaction"] = inter->label();
    bool scored = entry && entry->module == Module::validation;
    v["score"] = nullptr;
    if (scored && dim) v["score"] = score_json(cat_score(dim.value(), *inter, config_.rubric));

    Json labels = Json::object();
    for (const auto& l : kLabels) labels[std::string(l.key)] = label(lang, l.key);
    v["lang"] = std::string(lang);
    v["labels"] = labels;
    v["duplicate"] = false;
    return v;
}

Response Service::log_and_apply(Student& st, const std::string& schema_id, EventKind kind, Payload payload,
                                std::optional<std::int64_t> seq, std::string_view lang) {
    SessionEvent recorded;
    try {
        recorded = st.session->log->record(st.id, schema_id, kind, std::move(payload));
    } catch (const LogClosedError&) {
        return error(409, "session_closed", "session is closed");
    } catch (const EventRejected& e) {
        return error(422, "rejected", e.what());
    }
    st.engine.apply(recorded);
    if (seq) st.last_seq = *seq;
    Json v = render_view(st, lang);
    v["event_seq"] = recorded.seq;
    return {200, v};
}

Response Service::submit_action(const std::string& student_id, const Json& body, std::string_view lang) {
    if (!is_supported_language(lang)) return error(422, "language", "unsupported language '" + std::string(lang) + "'");
    auto st = find_student(student_id);
    if (!st) return not_found("student", student_id);
    if (!body.is_object()) return error(400, "bad_request", "body must be a JSON object");
    auto kind_name = required_string(body, "kind");
    if (!kind_name) return error(422, "validation", "action needs a 'kind'");
    auto kind = parse_event_kind(*kind_name);
    if (!kind) return error(422, "validation", "unknown action kind '" + *kind_name + "'");
    if (*kind == EventKind::navigate) return error(422, "validation", "use the navigate endpoint");
    if (*kind == EventKind::survey_response) return error(422, "validation", "use the survey endpoint");
    auto seq = integer(body, "seq");

    std::lock_guard lock(st->mutex);
    if (seq && st->last_seq && *seq <= *st->last_seq) {
        Json v = render_view(*st, lang);
        v["duplicate"] = true;
        return {200, v};
    }
    const std::string schema_id = st->engine.active_schema();
    const TaskState* task = st->engine.task(schema_id);
    if (task && task->read_only()) return error(409, "no_active_task", "no active task: schema " + schema_id + " is closed");
    std::size_t draft_size = task ? task->draft.size() : 0;
    auto index_field = [&](const char* key) -> std::optional<std::size_t> {
        auto i = integer(body, key);
        if (!i || *i < 0 || static_cast<std::size_t>(*i) >= draft_size) return std::nullopt;
        return static_cast<std::size_t>(*i);
    };
    auto needs_p = [&]() -> std::optional<Response> {
        if (st->engine.interface() != Artefact::P)
            return error(409, "interface", "block operations need the programming interface");
        return std::nullopt;
    };

    Payload payload;
    switch (*kind) {
    case EventKind::add_command: {
        auto text = required_string(body, "command");
        if (!text) return error(422, "validation", "ADD_COMMAND needs 'command'");
        auto cmd = parse_command(*text);
        if (!cmd) return error(422, "parse", cmd.error().describe(), {{"parse_error", parse_error_json(cmd.error())}});
        payload["command"] = format_command(*cmd);
        break;
    }
    case EventKind::confirm_command: {
        if (draft_size == 0) return error(422, "validation", "nothing to confirm: the draft is empty");
        Program p{task->draft};
        payload["command"] = format_program(p);
        break;
    }
    case EventKind::remove_command: {
        auto i = index_field("index");
        if (!i) return error(422, "validation", "REMOVE_COMMAND index out of range");
        payload["index"] = std::to_string(*i);
        break;
    }
    case EventKind::reorder_commands: {
        if (auto r = needs_p()) return *r;
        auto from = index_field("from");
        auto to = index_field("to");
        if (!from || !to) return error(422, "validation", "REORDER_COMMANDS positions out of range");
        payload["from"] = std::to_string(*from);
        payload["to"] = std::to_string(*to);
        break;
    }
    case EventKind::modify_property: {
        if (auto r = needs_p()) return *r;
        auto i = index_field("index");
        if (!i) return error(422, "validation", "MODIFY_PROPERTY index out of range");
        auto property = required_string(body, "property");
        auto value = required_string(body, "value");
        if (!property || !value) return error(422, "validation", "MODIFY_PROPERTY needs 'property' and 'value'");
        const Command& target = task->draft[*i];
        auto old = argument_text(target, *property);
        if (!old) return error(422, "validation", "command has no property '" + *property + "'");
        auto changed = modify_argument(target, *property, *value);
        if (!changed)
            return error(422, "parse", changed.error().describe(), {{"parse_error", parse_error_json(changed.error())}});
        payload["index"] = std::to_string(*i);
        payload["property"] = *property;
        payload["old"] = *old;
        payload["new"] = *argument_text(*changed, *property);
        break;
    }
    case EventKind::feedback_toggle: {
        auto state = required_string(body, "state");
        if (!state || (*state != "on" && *state != "off")) return error(422, "validation", "state must be on|off");
        payload["state"] = *state;
        break;
    }
    case EventKind::interface_switch: {
        auto iface = required_string(body, "interface");
        if (!iface || (*iface != "G" && *iface != "P")) return error(422, "validation", "interface must be G|P");
        if (*iface == "P" && !st->session->info.programming_allowed)
            return error(403, "interface", "the programming interface is not allowed in this session");
        payload["interface"] = *iface;
        break;
    }
    case EventKind::task_completed: {
        auto entry = config_.catalog.find(schema_id);
        bool ok = entry && task && check_success(task->exec.board, *entry->schema);
        payload["success"] = ok ? "true" : "false";
        break;
    }
    default: break;
    }
    return log_and_apply(*st, schema_id, *kind, std::move(payload), seq, lang);
}

Response Service::navigate(const std::string& student_id, const Json& body, std::string_view lang) {
    if (!is_supported_language(lang)) return error(422, "language", "unsupported language '" + std::string(lang) + "'");
    auto st = find_student(student_id);
    if (!st) return not_found("student", student_id);
    if (!body.is_object()) return error(400, "bad_request", "body must be a JSON object");
    auto seq = integer(body, "seq");

    std::lock_guard lock(st->mutex);
    if (seq && st->last_seq && *seq <= *st->last_seq) {
        Json v = render_view(*st, lang);
        v["duplicate"] = true;
        return {200, v};
    }
    const std::string current = st->engine.active_schema();
    auto here = config_.catalog.find(current);
    Module module = here ? here->module : Module::training;
    if (body.contains("module")) {
        auto m = body["module"].is_string() ? parse_module(body["module"].get<std::string>()) : std::nullopt;
        if (!m) return error(422, "validation", "module must be training|validation");
        module = *m;
    }
    auto index = integer(body, "index");
    if (!index) return error(422, "validation", "navigate needs an integer 'index'");
    std::size_t total = config_.catalog.size(module);
    if (*index < 1 || static_cast<std::size_t>(*index) > total)
        return error(422, "range",
                     "schema index " + std::to_string(*index) + " out of range 1.." + std::to_string(total));
    const Schema* target = config_.catalog.at(module, static_cast<std::size_t>(*index));
    return log_and_apply(*st, current, EventKind::navigate, {{"target", target->id}}, seq, lang);
}

Response Service::view(const std::string& student_id, std::string_view lang) {
    if (!is_supported_language(lang)) return error(422, "language", "unsupported language '" + std::string(lang) + "'");
    auto st = find_student(student_id);
    if (!st) return not_found("student", student_id);
    std::lock_guard lock(st->mutex);
    return {200, render_view(*st, lang)};
}

Response Service::dashboard(const std::string& student_id, std::string_view lang) {
    if (!is_supported_language(lang)) return error(422, "language", "unsupported language '" + std::string(lang) + "'");
    auto st = find_student(student_id);
    if (!st) return not_found("student", student_id);
    std::lock_guard lock(st->mutex);

    Json rows = Json::array();
    int total_score = 0;
    for (const auto& r : st->engine.records(config_.rubric)) {
        if (r.module != "validation") continue;
        auto entry = config_.catalog.find(r.schema_id);
        std::string status = r.solved ? "correct" : r.surrendered || !r.attempted ? "skipped" : "incorrect";
        if (r.score) total_score += r.score->total;
        rows.push_back({{"schema_id", r.schema_id},
                        {"index", entry ? entry->index : 0},
                        {"reference", entry ? board_json(entry->schema->cells) : Json(nullptr)},
                        {"produced", board_json(CrossBoard::from_compact(r.board).value_or(CrossBoard{}))},
                        {"score", r.score ? score_json(*r.score) : Json(nullptr)},
                        {"status", status},
                        {"status_label", label(lang, status)},
                        {"duration_ms", r.duration_ms},
                        {"duration_min", to_minutes(r.duration_ms)}});
    }
    return {200, {{"student_id", student_id}, {"rows", rows}, {"total_score", total_score}}};
}

Response Service::submit_survey(const std::string& student_id, const Json& body) {
    auto st = find_student(student_id);
    if (!st) return not_found("student", student_id);
    if (!body.is_object() || !body.contains("answers") || !body["answers"].is_object() || body["answers"].empty())
        return error(422, "validation", "survey needs a non-empty 'answers' object");
    std::map<std::string, std::string> answers;
    for (const auto& [q, a] : body["answers"].items()) {
        bool ok = a.is_string() && std::find(kSmileys.begin(), kSmileys.end(), a.get<std::string>()) != kSmileys.end();
        bool clean_q = !q.empty() && q.find_first_of(",=") == std::string::npos;
        if (!ok || !clean_q) return error(422, "validation", "answer to '" + q + "' must be happy|neutral|sad");
        answers[q] = a.get<std::string>();
    }

    std::lock_guard lock(st->mutex);
    if (!st->engine.module_finished(Module::validation))
        return error(409, "survey_early", "the survey opens once the validation module is finished");
    for (const auto& [q, a] : answers)
        if (st->engine.survey().contains(q)) return error(409, "survey_answered", "question '" + q + "' already answered");
    auto r = log_and_apply(*st, st->engine.active_schema(), EventKind::survey_response,
                           {{"answers", encode_answers(answers)}}, std::nullopt, "en");
    if (r.status != 200) return r;
    Json stored = Json::object();
    for (const auto& [q, a] : st->engine.survey()) stored[q] = a;
    return {200, {{"student_id", student_id}, {"answers", stored}}};
}

}  // namespace cat
