#include "cat/dataset.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <map>
#include <set>
#include <nlohmann/json.hpp>
#include <sstream>

namespace cat {

using ojson = nlohmann::ordered_json;

namespace {

ojson score_json(const std::optional<CatScore>& s) {
    if (!s) return nullptr;
    ojson j;
    j["algorithm"] = s->algorithm_points;
    j["artefact"] = s->artefact_points;
    j["autonomy"] = s->autonomy_points;
    j["total"] = s->total;
    j["rubric"] = s->rubric_id;
    return j;
}

template <class T>
T field(const ojson& j, const char* key, int line) {
    auto it = j.find(key);
    if (it == j.end()) throw DatasetError("line " + std::to_string(line) + ": missing field '" + key + "'");
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw DatasetError("line " + std::to_string(line) + ": bad value for '" + key + "'");
    }
}

std::optional<std::string> opt_field(const ojson& j, const char* key, int line) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw DatasetError("line " + std::to_string(line) + ": bad value for '" + key + "'");
    return it->get<std::string>();
}

}  // namespace

std::string to_json_line(const SessionInfo& s) {
    ojson j;
    j["type"] = "session";
    j["session_id"] = s.session_id;
    j["date"] = s.date;
    j["canton"] = s.canton;
    j["school"] = s.school;
    j["grade_level"] = s.grade_level;
    j["programming_allowed"] = s.programming_allowed;
    return j.dump();
}

std::string to_json_line(const StudentInfo& s) {
    ojson j;
    j["type"] = "student";
    j["student_id"] = s.student_id;
    j["session_id"] = s.session_id;
    j["gender"] = s.gender;
    if (s.birth_date) j["birth_date"] = *s.birth_date;
    if (s.age) j["age"] = *s.age;
    return j.dump();
}

std::string to_json_line(const SessionEvent& e) {
    ojson j;
    j["type"] = "event";
    j["seq"] = e.seq;
    j["timestamp_ms"] = e.timestamp_ms;
    j["student_id"] = e.student_id;
    j["schema_id"] = e.schema_id;
    j["kind"] = std::string(to_string(e.kind));
    ojson p = ojson::object();
    for (const auto& [k, v] : e.payload) p[k] = v;
    j["payload"] = p;
    return j.dump();
}

std::string to_json_line(const TaskRecord& t) {
    ojson j;
    j["type"] = "task";
    j["student_id"] = t.student_id;
    j["schema_id"] = t.schema_id;
    j["module"] = t.module;
    j["attempted"] = t.attempted;
    j["solved"] = t.solved;
    j["surrendered"] = t.surrendered;
    j["abandoned"] = t.abandoned;
    j["truncated"] = t.truncated;
    j["duration_ms"] = t.duration_ms;
    j["dimension"] = t.dimension ? ojson(std::string(to_string(*t.dimension))) : ojson(nullptr);
    j["interaction"] = t.interaction ? ojson(t.interaction->label()) : ojson(nullptr);
    j["score"] = score_json(t.score);
    j["board"] = t.board;
    j["program"] = t.program;
    return j.dump();
}

std::string export_dataset(const SessionInfo& session, const std::vector<StudentInfo>& students,
                           const std::vector<TaskRecord>& records, const std::vector<SessionEvent>& events) {
    std::string out = to_json_line(session) + "\n";
    for (const auto& s : students) out += to_json_line(s) + "\n";
    for (const auto& e : events) out += to_json_line(e) + "\n";
    for (const auto& r : records) out += to_json_line(r) + "\n";
    return out;
}

std::string export_log(const EventLog& log, const SchemaCatalog& catalog, const Rubric& rubric) {
    auto events = log.events();
    auto records = derive_task_records(events, catalog, rubric);
    return export_dataset(log.session(), log.students(), records, events);
}

Dataset parse_dataset(std::string_view text) {
    Dataset ds;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    int section = 0;  // session < student < event < task
    while (std::getline(in, raw)) {
        ++line;
        if (raw.empty()) continue;
        ojson j = ojson::parse(raw, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw DatasetError("line " + std::to_string(line) + ": not a JSON object");
        auto type = field<std::string>(j, "type", line);
        int rank = type == "session" ? 0 : type == "student" ? 1 : type == "event" ? 2 : type == "task" ? 3 : -1;
        if (rank < 0) throw DatasetError("line " + std::to_string(line) + ": unknown type '" + type + "'");
        if (rank < section) throw DatasetError("line " + std::to_string(line) + ": '" + type + "' line out of order");
        section = rank;

        if (type == "session") {
            SessionInfo s;
            s.session_id = field<std::string>(j, "session_id", line);
            s.date = field<std::string>(j, "date", line);
            s.canton = field<std::string>(j, "canton", line);
            s.school = field<std::string>(j, "school", line);
            s.grade_level = field<std::string>(j, "grade_level", line);
            if (j.contains("programming_allowed")) s.programming_allowed = field<bool>(j, "programming_allowed", line);
            ds.sessions.push_back(std::move(s));
        } else if (type == "student") {
            StudentInfo s;
            s.student_id = field<std::string>(j, "student_id", line);
            s.session_id = field<std::string>(j, "session_id", line);
            s.gender = field<std::string>(j, "gender", line);
            s.birth_date = opt_field(j, "birth_date", line);
            if (j.contains("age") && !j["age"].is_null()) s.age = field<int>(j, "age", line);
            ds.students.push_back(std::move(s));
        } else if (type == "event") {
            SessionEvent e;
            e.seq = field<std::uint64_t>(j, "seq", line);
            e.timestamp_ms = field<std::int64_t>(j, "timestamp_ms", line);
            e.student_id = field<std::string>(j, "student_id", line);
            e.schema_id = field<std::string>(j, "schema_id", line);
            auto kind = parse_event_kind(field<std::string>(j, "kind", line));
            if (!kind) throw DatasetError("line " + std::to_string(line) + ": unknown event kind");
            e.kind = *kind;
            e.payload = field<Payload>(j, "payload", line);
            ds.events.push_back(std::move(e));
        } else {
            TaskRecord t;
            t.student_id = field<std::string>(j, "student_id", line);
            t.schema_id = field<std::string>(j, "schema_id", line);
            t.module = field<std::string>(j, "module", line);
            t.attempted = field<bool>(j, "attempted", line);
            t.solved = field<bool>(j, "solved", line);
            t.surrendered = field<bool>(j, "surrendered", line);
            t.abandoned = field<bool>(j, "abandoned", line);
            t.truncated = field<bool>(j, "truncated", line);
            t.duration_ms = field<std::int64_t>(j, "duration_ms", line);
            if (auto d = opt_field(j, "dimension", line)) {
                t.dimension = parse_dimension(*d);
                if (!t.dimension) throw DatasetError("line " + std::to_string(line) + ": bad dimension");
            }
            if (auto i = opt_field(j, "interaction", line)) {
                t.interaction = InteractionDimension::parse(*i);
                if (!t.interaction) throw DatasetError("line " + std::to_string(line) + ": bad interaction");
            }
            if (j.contains("score") && !j["score"].is_null()) {
                const auto& s = j["score"];
                CatScore c;
                c.algorithm_points = field<int>(s, "algorithm", line);
                c.artefact_points = field<int>(s, "artefact", line);
                c.autonomy_points = field<int>(s, "autonomy", line);
                c.total = field<int>(s, "total", line);
                c.rubric_id = field<std::string>(s, "rubric", line);
                t.score = c;
            }
            t.board = field<std::string>(j, "board", line);
            t.program = field<std::string>(j, "program", line);
            ds.tasks.push_back(std::move(t));
        }
    }
    return ds;
}

// ---------------------------------------------------------------------------
// Pseudonymisation
// ---------------------------------------------------------------------------

namespace {

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

bool is_code(std::string_view value, char prefix) {
    if (value.size() != 14 || value[0] != prefix || value[1] != '-') return false;
    return std::all_of(value.begin() + 2, value.end(),
                       [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

class Coder {
public:
    explicit Coder(std::string_view salt) : salt_(salt) {}

    std::string code(const std::string& field, char prefix, const std::string& value) {
        if (is_code(value, prefix)) return value;
        std::string c = std::string(1, prefix) + "-" + sha256_hex(salt_ + '\x1f' + field + '\x1f' + value).substr(0, 12);
        auto key = std::make_pair(field, value);
        if (!seen_.contains(key)) {
            seen_.insert(key);
            mapping.push_back({field, value, c});
        }
        return c;
    }

    std::vector<PseudonymEntry> mapping;

private:
    std::string salt_;
    std::set<std::pair<std::string, std::string>> seen_;
};

}  // namespace

PseudonymisedDataset pseudonymise(std::string_view dataset, std::string_view salt) {
    Dataset ds = parse_dataset(dataset);
    Coder coder(salt);
    std::map<std::string, std::string> session_dates;

    for (auto& s : ds.sessions) {
        session_dates[s.session_id] = s.date;
        s.school = coder.code("school", 'S', s.school);
        s.canton = coder.code("canton", 'K', s.canton);
        s.grade_level = coder.code("grade_level", 'G', s.grade_level);
    }
    for (auto& s : ds.students) {
        if (s.birth_date) {
            auto it = session_dates.find(s.session_id);
            if (it != session_dates.end()) s.age = age_in_years(*s.birth_date, it->second);
            s.birth_date.reset();
        }
        s.student_id = coder.code("student_id", 'P', s.student_id);
    }
    for (auto& e : ds.events) e.student_id = coder.code("student_id", 'P', e.student_id);
    for (auto& t : ds.tasks) t.student_id = coder.code("student_id", 'P', t.student_id);

    std::string out;
    for (const auto& s : ds.sessions) out += to_json_line(s) + "\n";
    for (const auto& s : ds.students) out += to_json_line(s) + "\n";
    for (const auto& e : ds.events) out += to_json_line(e) + "\n";
    for (const auto& t : ds.tasks) out += to_json_line(t) + "\n";
    return {std::move(out), std::move(coder.mapping)};
}

std::string mapping_to_csv(const std::vector<PseudonymEntry>& mapping) {
    auto quote = [](const std::string& v) {
        if (v.find_first_of(",\"\n") == std::string::npos) return v;
        std::string q = "\"";
        for (char c : v) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    };
    std::string out = "field,original,code\n";
    for (const auto& m : mapping) out += quote(m.field) + "," + quote(m.original) + "," + quote(m.code) + "\n";
    return out;
}

}  // namespace cat
