#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <memory>

#include "gen.hpp"

using namespace cat;

namespace fixtures {

StudentInfo student(const std::string& id, std::optional<int> age) {
    StudentInfo s;
    s.student_id = id;
    s.session_id = "ses-fixture";
    s.gender = "f";
    s.age = age;
    return s;
}

TaskRecord task(const std::string& student, const std::string& schema, bool attempted, bool solved,
                std::int64_t duration_ms, const char* dimension, const char* interaction) {
    TaskRecord t;
    t.student_id = student;
    t.schema_id = schema;
    t.module = "validation";
    t.attempted = attempted;
    t.solved = solved;
    t.surrendered = attempted && !solved;
    t.duration_ms = duration_ms;
    if (dimension) t.dimension = parse_dimension(dimension);
    if (interaction) t.interaction = InteractionDimension::parse(interaction);
    t.board = std::string(20, '.');
    return t;
}

namespace {

SessionInfo fixture_session() {
    SessionInfo s;
    s.session_id = "ses-fixture";
    s.date = "2023-03-15";
    s.canton = "K-000000000000";
    s.school = "S-000000000000";
    s.grade_level = "G-000000000000";
    return s;
}

}  // namespace

Dataset time_dataset() {
    Dataset ds;
    ds.sessions.push_back(fixture_session());
    for (auto id : {"a", "b", "c"}) ds.students.push_back(student(id, 11));
    ds.tasks.push_back(task("a", "V01", true, true, 4 * kMinute, "D1", "G"));
    ds.tasks.push_back(task("a", "V02", true, false, 6 * kMinute, "D0", "G"));
    ds.tasks.push_back(task("b", "V01", true, true, 12 * kMinute, "D2", "G"));
    ds.tasks.push_back(task("b", "V02", true, true, 8 * kMinute, "D2", "G"));
    ds.tasks.push_back(task("c", "V01", true, true, 7 * kMinute, "D1", "GF"));
    // never attempted, never counted
    ds.tasks.push_back(task("c", "V03", false, false, 50 * kMinute));
    // training time is out of scope
    TaskRecord tr = task("c", "T01", true, true, 30 * kMinute, "D1", "GF");
    tr.module = "training";
    ds.tasks.push_back(tr);
    return ds;
}

Dataset success_dataset() {
    Dataset ds;
    ds.sessions.push_back(fixture_session());
    for (int i = 0; i < 24; ++i) {
        std::string id = "old" + std::to_string(i);
        ds.students.push_back(student(id, 10 + i % 4));
        ds.tasks.push_back(task(id, "V01", true, i >= 2));
        if (i < 10) ds.tasks.push_back(task(id, "V02", true, i < 7));
    }
    for (int i = 0; i < 8; ++i) {
        std::string id = "young" + std::to_string(i);
        ds.students.push_back(student(id, 3 + i % 4));
        ds.tasks.push_back(task(id, "V01", i < 6, i < 3));
    }
    ds.students.push_back(student("nobody", std::nullopt));
    ds.tasks.push_back(task("nobody", "V02", true, true));
    return ds;
}

Dataset strategy_dataset() {
    Dataset ds;
    ds.sessions.push_back(fixture_session());
    ds.students.push_back(student("o1", 11));
    ds.students.push_back(student("o2", 12));
    ds.students.push_back(student("y1", 5));
    ds.tasks.push_back(task("o1", "V01", true, true, 0, "D1", "G"));
    ds.tasks.push_back(task("o1", "V02", true, true, 0, "D1", "G"));
    ds.tasks.push_back(task("o2", "V01", true, true, 0, "D2", "P"));
    ds.tasks.push_back(task("o2", "V02", true, false, 0, "D2", "P"));
    ds.tasks.push_back(task("y1", "V01", true, true, 0, "D0", "GF"));
    ds.tasks.push_back(task("y1", "V02", true, true, 0, "D1", "G"));
    ds.tasks.push_back(task("y1", "V03", true, false, 0, "D2", "PF"));
    TaskRecord open = task("y1", "V04", true, false, 0, "D2", "G");
    open.truncated = true;
    ds.tasks.push_back(open);
    return ds;
}

EventLog::Clock step_clock(std::uint64_t seed) {
    auto state = std::make_shared<std::atomic<std::uint64_t>>(seed | 1);
    auto now = std::make_shared<std::atomic<std::int64_t>>(1678867200000);
    return [state, now] {
        std::uint64_t x = state->load();
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        state->store(x);
        return now->fetch_add(1000 + static_cast<std::int64_t>(x % 89000)) ;
    };
}

std::string solving_command(const Schema& s) {
    std::string colors, cells;
    for (std::size_t i = 0; i < kCellCount; ++i) {
        if (i) {
            colors += ',';
            cells += ',';
        }
        colors += to_string(*s.cells.cells()[i]);
        cells += all_cells()[i].to_string();
    }
    return "paintMultipleCells({" + colors + "},{" + cells + "})";
}

std::vector<TaskRecord> by_student(std::vector<TaskRecord> records) {
    std::stable_sort(records.begin(), records.end(),
                     [](const TaskRecord& a, const TaskRecord& b) { return a.student_id < b.student_id; });
    return records;
}

std::string random_session(Service& svc, std::uint64_t seed, int students, int steps) {
    gen::AstGen g(seed);
    Json form{{"date", "2023-03-15"},
              {"canton", "Ticino"},
              {"school", "Scuola Elementare Monte Verde"},
              {"grade_level", "quinta primaria"},
              {"programming_allowed", g.coin(0.8)}};
    std::string sid = svc.create_session(form).body["session_id"];
    std::vector<std::string> ids;
    for (int i = 0; i < students; ++i) {
        std::string birth = "201" + std::to_string(g.uniform(0, 8)) + "-0" + std::to_string(g.uniform(1, 9)) + "-1" +
                            std::to_string(g.uniform(0, 9));
        ids.push_back(svc.register_student(sid, {{"gender", g.coin() ? "f" : "m"}, {"birth_date", birth}})
                          .body["student_id"]);
    }
    std::map<std::string, std::int64_t> seqs;
    for (int step = 0; step < steps; ++step) {
        const std::string& id = ids[static_cast<std::size_t>(g.uniform(0, students - 1))];
        Json view = svc.view(id).body;
        int draft = static_cast<int>(view["draft"].size());
        Json body;
        switch (g.uniform(0, 16)) {
            case 0:
            case 1:
            case 2:
            case 3: body = {{"kind", "ADD_COMMAND"}, {"command", format_command(g.runnable())}}; break;
            case 4: {
                auto e = svc.schema_catalog().find(view["schema_id"].get<std::string>());
                if (e) body = {{"kind", "ADD_COMMAND"}, {"command", solving_command(*e->schema)}};
                break;
            }
            case 5:
            case 6: body = {{"kind", "CONFIRM_COMMAND"}}; break;
            case 7: body = {{"kind", "REMOVE_COMMAND"}, {"index", g.uniform(0, draft)}}; break;
            case 8: body = {{"kind", "REORDER_COMMANDS"}, {"from", g.uniform(0, draft)}, {"to", g.uniform(0, draft)}}; break;
            case 9: {
                int idx = g.uniform(0, std::max(0, draft - 1));
                std::string prop = g.coin() ? "color" : "colors";
                body = {{"kind", "MODIFY_PROPERTY"}, {"index", idx}, {"property", prop},
                        {"value", prop == "color" ? std::string(to_string(g.color())) : "{red,blue}"}};
                break;
            }
            case 10: body = {{"kind", "FEEDBACK_TOGGLE"}, {"state", g.coin() ? "on" : "off"}}; break;
            case 11: body = {{"kind", "INTERFACE_SWITCH"}, {"interface", g.coin() ? "G" : "P"}}; break;
            case 12: body = {{"kind", g.coin() ? "RETRY" : "SURRENDER"}}; break;
            case 13: body = {{"kind", g.coin(0.8) ? "TASK_COMPLETED" : "TASK_ABANDONED"}}; break;
            case 14:
            case 15: {
                Json nav{{"module", g.coin(0.7) ? "validation" : "training"}, {"index", g.uniform(1, 13)}};
                svc.navigate(id, nav);
                continue;
            }
            default: {
                Json answers{{"q" + std::to_string(g.uniform(1, 3)), g.coin() ? "happy" : "sad"}};
                svc.submit_survey(id, {{"answers", answers}});
                continue;
            }
        }
        if (body.is_null()) continue;
        if (g.coin(0.3)) {
            // occasional client sequence numbers, sometimes replayed
            auto& s = seqs[id];
            if (g.coin(0.8)) ++s;
            body["seq"] = s;
        }
        svc.submit_action(id, body);
    }
    return sid;
}

}  // namespace fixtures
