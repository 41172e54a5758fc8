#include <doctest.h>

#include "cat/dataset.hpp"
#include "cat/engine.hpp"
#include "fixtures.hpp"

using namespace cat;

namespace {

struct Script {
    std::vector<SessionEvent> events;
    std::int64_t t = 1000;

    void add(const std::string& student, const std::string& schema, EventKind k, Payload p = {},
             std::int64_t dt = 1000) {
        SessionEvent e;
        e.seq = events.size();
        e.timestamp_ms = t += dt;
        e.student_id = student;
        e.schema_id = schema;
        e.kind = k;
        e.payload = std::move(p);
        events.push_back(std::move(e));
    }
    void run(const std::string& student, const std::string& schema, const std::string& command) {
        add(student, schema, EventKind::add_command, {{"command", command}});
        add(student, schema, EventKind::confirm_command, {{"command", command}});
    }
};

const SchemaCatalog& catalog() {
    static const SchemaCatalog c = SchemaCatalog::bundled();
    return c;
}

const Schema& v(std::size_t i) { return *catalog().at(Module::validation, i); }

const TaskRecord* find(const std::vector<TaskRecord>& rs, const std::string& student, const std::string& schema) {
    for (const auto& r : rs)
        if (r.student_id == student && r.schema_id == schema) return &r;
    return nullptr;
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("catalog") {
    CHECK(catalog().size(Module::training) == 15);
    CHECK(catalog().size(Module::validation) == 12);
    auto e = catalog().find(v(3).id);
    REQUIRE(e);
    CHECK(e->module == Module::validation);
    CHECK(e->index == 3);
    CHECK_FALSE(catalog().at(Module::validation, 13));
    CHECK_FALSE(catalog().at(Module::validation, 0));
    CHECK(catalog().rank(catalog().at(Module::training, 15)->id) < catalog().rank(v(1).id));
    CHECK(parse_module("validation") == Module::validation);
}

TEST_CASE("a matching board solves the task") {
    Script s;
    s.run("a", v(1).id, fixtures::solving_command(v(1)));
    s.add("a", v(1).id, EventKind::task_completed, {{"success", "true"}});
    auto rs = derive_task_records(s.events, catalog());
    REQUIRE(rs.size() == 1);
    const auto& r = rs[0];
    CHECK(r.attempted);
    CHECK(r.solved);
    CHECK_FALSE(r.truncated);
    CHECK(r.module == "validation");
    CHECK(r.duration_ms == 2000);
    CHECK(r.board == v(1).cells.to_compact());
    CHECK(r.interaction == InteractionDimension{Artefact::G, false});
    REQUIRE(r.dimension);
    REQUIRE(r.score);
    CHECK(r.score->total == cat_score(*r.dimension, *r.interaction, default_rubric()).total);
}

TEST_CASE("a client success flag is not trusted") {
    Script s;
    s.run("a", v(1).id, "fillEmpty(blue)");
    s.add("a", v(1).id, EventKind::task_completed, {{"success", "true"}});
    auto rs = derive_task_records(s.events, catalog());
    REQUIRE(rs.size() == 1);
    CHECK_FALSE(rs[0].solved);
    CHECK_FALSE(rs[0].score);
}

TEST_CASE("navigating past a schema does not attempt it") {
    Script s;
    s.add("a", v(7).id, EventKind::navigate, {{"target", v(8).id}});
    auto rs = derive_task_records(s.events, catalog());
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].schema_id == v(7).id);
    CHECK_FALSE(rs[0].attempted);
    CHECK_FALSE(rs[0].truncated);
}

TEST_CASE("a log ending mid-task gives a truncated record") {
    Script s;
    s.run("a", v(2).id, "goCell(C1)");
    auto rs = derive_task_records(s.events, catalog());
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].attempted);
    CHECK_FALSE(rs[0].solved);
    CHECK(rs[0].truncated);
}

TEST_CASE("surrender") {
    Script s;
    s.run("a", v(2).id, "goCell(C1);paintSingleCell(red)");
    s.add("a", v(2).id, EventKind::surrender);
    auto rs = derive_task_records(s.events, catalog());
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].surrendered);
    CHECK_FALSE(rs[0].solved);
    CHECK_FALSE(rs[0].truncated);
}

TEST_CASE("draft editing and confirmation") {
    StudentEngine eng(catalog(), "a");
    Script s;
    const std::string id = v(1).id;
    s.add("a", id, EventKind::add_command, {{"command", "goCell(C1)"}});
    s.add("a", id, EventKind::add_command, {{"command", "paintSingleCell(red)"}});
    s.add("a", id, EventKind::add_command, {{"command", "go(right,1)"}});
    s.add("a", id, EventKind::reorder_commands, {{"from", "2"}, {"to", "1"}});
    s.add("a", id, EventKind::modify_property,
          {{"index", "2"}, {"property", "color"}, {"old", "red"}, {"new", "blue"}});
    s.add("a", id, EventKind::remove_command, {{"index", "9"}});
    for (const auto& e : s.events) eng.apply(e);
    const TaskState* t = eng.task(id);
    REQUIRE(t);
    REQUIRE(t->draft.size() == 3);
    CHECK(format_command(t->draft[1]) == "go(right,1)");
    CHECK(format_command(t->draft[2]) == "paintSingleCell(blue)");
    CHECK(t->program.commands.empty());

    Script c;
    c.t = s.t;
    c.add("a", id, EventKind::confirm_command, {{"command", "goCell(C1);go(right,1);paintSingleCell(blue)"}});
    eng.apply(c.events[0]);
    CHECK(t->draft.empty());
    CHECK(t->program.commands.size() == 3);
    CHECK(t->exec.board.get({'C', 2}) == Color::blue);

    Script r;
    r.t = c.t;
    r.add("a", id, EventKind::add_command, {{"command", "go(up,4)"}});
    r.add("a", id, EventKind::add_command, {{"command", "paintSingleCell(red)"}});
    r.add("a", id, EventKind::confirm_command, {{"command", "go(up,4);paintSingleCell(red)"}});
    for (const auto& e : r.events) eng.apply(e);
    REQUIRE(t->last_error);
    CHECK(t->last_error->kind == ExecErrorKind::out_of_board);
    CHECK(t->program.commands.size() == 3);

    Script z;
    z.t = r.t;
    z.add("a", id, EventKind::retry);
    eng.apply(z.events[0]);
    CHECK(t->program.commands.empty());
    CHECK(t->draft.empty());
    CHECK(t->exec.board == CrossBoard{});
    CHECK_FALSE(t->last_error);
}

TEST_CASE("terminal events advance and lock the task") {
    StudentEngine eng(catalog(), "a");
    eng.set_active_schema(v(1).id);
    Script s;
    s.add("a", v(1).id, EventKind::surrender);
    s.add("a", v(1).id, EventKind::add_command, {{"command", "fillEmpty(red)"}});
    for (const auto& e : s.events) eng.apply(e);
    CHECK(eng.active_schema() == v(2).id);
    const TaskState* t = eng.task(v(1).id);
    CHECK(t->read_only());
    CHECK(t->draft.empty());
}

TEST_CASE("interaction follows the student's switches") {
    Script s;
    s.add("a", v(1).id, EventKind::interface_switch, {{"interface", "P"}});
    s.add("a", v(1).id, EventKind::feedback_toggle, {{"state", "on"}});
    s.run("a", v(1).id, "fillEmpty(red)");
    s.add("a", v(1).id, EventKind::task_abandoned);
    // the next task starts in P with feedback still on
    s.run("a", v(2).id, "fillEmpty(red)");
    s.add("a", v(2).id, EventKind::task_completed, {{"success", "false"}});
    auto rs = derive_task_records(s.events, catalog());
    REQUIRE(rs.size() == 2);
    CHECK(rs[0].interaction->label() == "PF");
    CHECK(rs[0].abandoned);
    CHECK(rs[1].interaction->label() == "PF");
}

TEST_CASE("feedback switched on while away counts on return") {
    Script s;
    s.add("a", v(1).id, EventKind::add_command, {{"command", "goCell(C1)"}});
    s.add("a", v(1).id, EventKind::navigate, {{"target", v(2).id}});
    s.add("a", v(2).id, EventKind::feedback_toggle, {{"state", "on"}});
    s.add("a", v(2).id, EventKind::feedback_toggle, {{"state", "off"}});
    s.add("a", v(2).id, EventKind::feedback_toggle, {{"state", "on"}});
    s.add("a", v(2).id, EventKind::navigate, {{"target", v(1).id}});
    s.add("a", v(1).id, EventKind::confirm_command, {{"command", "goCell(C1)"}});
    s.add("a", v(1).id, EventKind::surrender);
    auto rs = derive_task_records(s.events, catalog());
    CHECK(find(rs, "a", v(1).id)->interaction->label() == "GF");
}

TEST_CASE("records are ordered by student then catalog") {
    Script s;
    s.add("b", v(3).id, EventKind::add_command, {{"command", "goCell(C1)"}});
    s.add("a", v(2).id, EventKind::add_command, {{"command", "goCell(C1)"}});
    s.add("b", v(1).id, EventKind::add_command, {{"command", "goCell(C1)"}});
    s.add("b", catalog().at(Module::training, 2)->id, EventKind::add_command, {{"command", "goCell(C1)"}});
    auto rs = derive_task_records(s.events, catalog());
    REQUIRE(rs.size() == 4);
    CHECK(rs[0].student_id == "b");
    CHECK(rs[0].module == "training");
    CHECK(rs[1].schema_id == v(1).id);
    CHECK(rs[2].schema_id == v(3).id);
    CHECK(rs[3].student_id == "a");
}

TEST_CASE("training tasks are not scored") {
    const Schema& t1 = *catalog().at(Module::training, 1);
    Script s;
    s.run("a", t1.id, fixtures::solving_command(t1));
    s.add("a", t1.id, EventKind::task_completed, {{"success", "true"}});
    auto rs = derive_task_records(s.events, catalog());
    CHECK(rs[0].solved);
    CHECK(rs[0].dimension);
    CHECK_FALSE(rs[0].score);
}

TEST_CASE("survey answers") {
    std::map<std::string, std::string> a{{"q2", "sad"}, {"q1", "happy"}};
    CHECK(encode_answers(a) == "q1=happy,q2=sad");
    CHECK(decode_answers("q1=happy,q2=sad") == a);
    CHECK(decode_answers("").empty());
}

TEST_CASE("derivation is a pure function of the log") {
    Service svc({.catalog = catalog(), .clock = fixtures::step_clock(3)});
    auto sid = fixtures::random_session(svc, 17, 3, 400);
    auto ev = svc.session_events(sid);
    auto a = derive_task_records(ev, catalog());
    auto b = derive_task_records(ev, catalog());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(to_json_line(a[i]) == to_json_line(b[i]));
    CHECK(fixtures::by_student(a) == fixtures::by_student(svc.live_records(sid)));
}

}
