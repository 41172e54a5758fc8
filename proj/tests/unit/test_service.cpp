#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include "cat/dataset.hpp"
#include "cat/service.hpp"
#include "fixtures.hpp"

using namespace cat;

namespace {

Schema uniform(const char* id, Color c) { return {id, CrossBoard::filled(c), std::nullopt}; }

SchemaCatalog small_catalog() {
    return SchemaCatalog({uniform("T1", Color::green)},
                         {uniform("U1", Color::blue), uniform("U2", Color::red), uniform("U3", Color::yellow)});
}

Json form() {
    return {{"date", "2023-03-15"}, {"canton", "Ticino"}, {"school", "Scuola Nord"}, {"grade_level", "5"}};
}

struct Fixture {
    Service svc;
    std::string session;
    std::string student;

    explicit Fixture(ServiceConfig cfg = {.catalog = small_catalog(), .clock = fixtures::step_clock(9)},
                     Json session_form = form())
        : svc(std::move(cfg)) {
        auto r = svc.create_session(session_form);
        REQUIRE(r.status == 201);
        session = r.body["session_id"];
        auto s = svc.register_student(session, {{"gender", "f"}, {"birth_date", "2011-05-01"}});
        REQUIRE(s.status == 201);
        student = s.body["student_id"];
    }

    Response act(Json body, const char* lang = "en") { return svc.submit_action(student, body, lang); }
    Response add(const std::string& cmd) { return act({{"kind", "ADD_COMMAND"}, {"command", cmd}}); }
    Response confirm() { return act({{"kind", "CONFIRM_COMMAND"}}); }
    Response go(int index, const char* module = "validation") {
        return svc.navigate(student, {{"module", module}, {"index", index}});
    }
};

}  // namespace

TEST_SUITE("service") {

TEST_CASE("session form") {
    Service svc;
    auto r = svc.create_session(form());
    CHECK(r.status == 201);
    std::string id = r.body["session_id"];
    CHECK(id.rfind("ses-", 0) == 0);
    CHECK(id.size() == 16);

    Json missing = form();
    missing.erase("canton");
    r = svc.create_session(missing);
    CHECK(r.status == 422);
    CHECK(r.body["error"] == "validation");
    CHECK(r.body["fields"].contains("canton"));
    CHECK(r.body["fields"].size() == 1);

    Json bad = form();
    bad["date"] = "15/03/2023";
    CHECK(svc.create_session(bad).body["fields"].contains("date"));
    CHECK(svc.create_session(Json::array()).status == 400);
}

TEST_CASE("student registration") {
    Fixture f;
    auto again = f.svc.register_student(f.session, {{"gender", "f"}, {"birth_date", "2011-05-01"}});
    CHECK(again.status == 201);
    CHECK(again.body["student_id"] != f.student);
    CHECK(f.svc.register_student(f.session, {{"gender", "f"}}).status == 422);
    CHECK(f.svc.register_student(f.session, {{"gender", "f"}, {"birth_date", "yesterday"}}).status == 422);
    CHECK(f.svc.register_student("ses-nope", {{"gender", "f"}, {"birth_date", "2011-05-01"}}).status == 404);
    auto v = f.svc.view(f.student).body;
    CHECK(v["schema_id"] == "T1");
    CHECK(v["module"] == "training");
    CHECK(v["progress"] == Json{{"index", 1}, {"total", 1}});
}

TEST_CASE("fill a uniform schema") {
    Fixture f;
    f.go(1);
    CHECK(f.add("fillEmpty(blue)").status == 200);
    auto r = f.confirm();
    REQUIRE(r.status == 200);
    CHECK(r.body["program"] == Json::array({"fillEmpty(blue)"}));
    CHECK(r.body["dimension"] == "D1");
    CHECK(r.body["score"]["total"] == 2);
    CHECK_FALSE(r.body.contains("board"));
    r = f.act({{"kind", "FEEDBACK_TOGGLE"}, {"state", "on"}});
    CHECK(r.body["board"]["compact"] == std::string(20, 'b'));
    CHECK(r.body["matches_reference"] == true);
    r = f.act({{"kind", "TASK_COMPLETED"}});
    CHECK(r.body["schema_id"] == "U2");
    auto recs = f.svc.live_records(f.session);
    REQUIRE(recs.size() == 2);
    CHECK(recs[1].solved);
    CHECK(recs[1].interaction->label() == "GF");
}

TEST_CASE("feedback-off views carry no board cells") {
    Fixture f;
    f.go(1);
    f.add("goCell(C1)");
    f.add("paintSingleCell(red)");
    auto r = f.confirm();
    for (const char* key : {"board", "cursor", "matches_reference"}) CHECK_FALSE(r.body.contains(key));
    CHECK(r.body.contains("reference"));
    f.act({{"kind", "FEEDBACK_TOGGLE"}, {"state", "on"}});
    r = f.act({{"kind", "FEEDBACK_TOGGLE"}, {"state", "off"}});
    CHECK_FALSE(r.body.contains("board"));
    CHECK(r.body.dump().find("\"compact\":\"") == r.body.dump().rfind("\"compact\":\""));
    auto ev = f.svc.session_events(f.session);
    CHECK(ev.back().kind == EventKind::feedback_toggle);
}

TEST_CASE("surrender is skipped not failed") {
    Fixture f;
    f.go(1);
    f.add("fillEmpty(red)");
    f.confirm();
    auto r = f.act({{"kind", "SURRENDER"}});
    CHECK(r.body["schema_id"] == "U2");
    f.add("fillEmpty(red)");
    f.confirm();
    f.act({{"kind", "TASK_COMPLETED"}});
    auto d = f.svc.dashboard(f.student).body;
    REQUIRE(d["rows"].size() == 2);
    CHECK(d["rows"][0]["status"] == "skipped");
    CHECK(d["rows"][0]["status_label"] == "Skipped");
    CHECK(d["rows"][0]["score"].is_null());
    CHECK(d["rows"][1]["status"] == "correct");
    CHECK(d["rows"][1]["produced"]["compact"] == std::string(20, 'r'));
    CHECK(d["total_score"] == d["rows"][1]["score"]["total"]);
    CHECK(f.svc.dashboard(f.student, "it").body["rows"][0]["status_label"] == "Saltato");
}

TEST_CASE("wrong board is incorrect") {
    Fixture f;
    f.go(1);
    f.add("fillEmpty(red)");
    f.confirm();
    auto r = f.act({{"kind", "TASK_COMPLETED"}});
    CHECK(f.svc.dashboard(f.student).body["rows"][0]["status"] == "incorrect");
    CHECK(f.svc.session_events(f.session).back().payload.at("success") == "false");
}

TEST_CASE("dashboard of a fresh student is empty") {
    Fixture f;
    auto d = f.svc.dashboard(f.student);
    CHECK(d.status == 200);
    CHECK(d.body["rows"].empty());
    CHECK(f.svc.dashboard("stu-none").status == 404);
}

TEST_CASE("navigation") {
    Fixture f;
    auto r = f.go(3);
    CHECK(r.body["schema_id"] == "U3");
    CHECK(r.body["progress"]["index"] == 3);
    r = f.go(4);
    CHECK(r.status == 422);
    CHECK(r.body["error"] == "range");
    CHECK(f.go(0).status == 422);
    CHECK(f.svc.navigate(f.student, {{"index", "two"}}).status == 422);
    CHECK(f.svc.navigate(f.student, {{"module", "bonus"}, {"index", 1}}).status == 422);

    f.go(1);
    f.add("fillEmpty(blue)");
    f.confirm();
    f.act({{"kind", "TASK_COMPLETED"}});
    r = f.go(1);
    CHECK(r.body["read_only"] == true);
    CHECK(r.body["status"] == "completed");
    CHECK(f.add("fillEmpty(red)").status == 409);
    auto ev = f.svc.session_events(f.session);
    CHECK(ev.back().kind == EventKind::navigate);
    CHECK(ev.back().payload.at("target") == "U1");
    CHECK(ev.back().schema_id == "U2");
}

TEST_CASE("action validation") {
    Fixture f;
    f.go(1);
    auto r = f.add("go(rigth,2)");
    CHECK(r.status == 422);
    CHECK(r.body["parse_error"]["kind"] == "unknown_direction");
    CHECK(f.confirm().status == 422);
    CHECK(f.act({{"kind", "JUMP"}}).status == 422);
    CHECK(f.act({{"command", "x"}}).status == 422);
    CHECK(f.act({{"kind", "NAVIGATE"}}).status == 422);
    CHECK(f.act({{"kind", "REMOVE_COMMAND"}, {"index", 0}}).status == 422);
    CHECK(f.act({{"kind", "FEEDBACK_TOGGLE"}, {"state", "maybe"}}).status == 422);
    CHECK(f.act({{"kind", "RETRY"}}, "es").status == 422);
    CHECK(f.svc.submit_action("stu-none", {{"kind", "RETRY"}}).status == 404);
    CHECK(f.svc.session_events(f.session).size() == 1);
}

TEST_CASE("block operations need the programming interface") {
    Fixture f;
    f.go(1);
    f.add("goCell(C1)");
    f.add("paintSingleCell(red)");
    CHECK(f.act({{"kind", "REORDER_COMMANDS"}, {"from", 0}, {"to", 1}}).status == 409);
    CHECK(f.act({{"kind", "MODIFY_PROPERTY"}, {"index", 1}, {"property", "color"}, {"value", "blue"}}).status == 409);
    f.act({{"kind", "INTERFACE_SWITCH"}, {"interface", "P"}});
    auto r = f.act({{"kind", "MODIFY_PROPERTY"}, {"index", 1}, {"property", "color"}, {"value", "blue"}});
    REQUIRE(r.status == 200);
    CHECK(r.body["draft"][1] == "paintSingleCell(blue)");
    auto ev = f.svc.session_events(f.session).back();
    CHECK(ev.payload == Payload{{"index", "1"}, {"property", "color"}, {"old", "red"}, {"new", "blue"}});
    CHECK(f.act({{"kind", "MODIFY_PROPERTY"}, {"index", 1}, {"property", "color"}, {"value", "pink"}}).status == 422);
    CHECK(f.act({{"kind", "MODIFY_PROPERTY"}, {"index", 1}, {"property", "cell"}, {"value", "C1"}}).status == 422);
    r = f.act({{"kind", "REORDER_COMMANDS"}, {"from", 0}, {"to", 1}});
    CHECK(r.body["draft"] == Json::array({"paintSingleCell(blue)", "goCell(C1)"}));
    r = f.confirm();
    REQUIRE(r.body["error"].is_object());
    CHECK(r.body["error"]["kind"] == "NO_POSITION");
    CHECK(r.body["error"]["suggestion"].get<std::string>().size() > 0);
    CHECK(r.body["interface"] == "P");
}

TEST_CASE("sessions can bar the programming interface") {
    Json barred = form();
    barred["programming_allowed"] = false;
    Fixture f({.catalog = small_catalog()}, barred);
    auto r = f.act({{"kind", "INTERFACE_SWITCH"}, {"interface", "P"}});
    CHECK(r.status == 403);
    CHECK(f.svc.view(f.student).body["programming_allowed"] == false);
    CHECK(f.act({{"kind", "INTERFACE_SWITCH"}, {"interface", "G"}}).status == 200);
}

TEST_CASE("retry resets the task") {
    Fixture f;
    f.go(1);
    f.add("fillEmpty(red)");
    f.confirm();
    f.add("goCell(C1)");
    auto r = f.act({{"kind", "RETRY"}});
    CHECK(r.body["program"].empty());
    CHECK(r.body["draft"].empty());
    CHECK(r.body["dimension"].is_null());
    f.act({{"kind", "FEEDBACK_TOGGLE"}, {"state", "on"}});
    CHECK(f.svc.view(f.student).body["board"]["compact"] == std::string(20, '.'));
}

TEST_CASE("sequence numbers deduplicate replays") {
    Fixture f;
    f.go(1);
    auto body = Json{{"kind", "ADD_COMMAND"}, {"command", "goCell(C1)"}, {"seq", 1}};
    CHECK(f.act(body).body["duplicate"] == false);
    auto r = f.act(body);
    CHECK(r.status == 200);
    CHECK(r.body["duplicate"] == true);
    CHECK(r.body["draft"].size() == 1);
    body["seq"] = 0;
    CHECK(f.act(body).body["duplicate"] == true);
    body["seq"] = 2;
    CHECK(f.act(body).body["draft"].size() == 2);
    CHECK(f.svc.session_events(f.session).size() == 3);
}

TEST_CASE("survey") {
    Fixture f;
    CHECK(f.svc.submit_survey(f.student, {{"answers", {{"q1", "happy"}}}}).status == 409);
    for (int i = 1; i <= 3; ++i) {
        f.go(i);
        f.act({{"kind", "SURRENDER"}});
    }
    CHECK(f.svc.submit_survey(f.student, {{"answers", {{"q1", "meh"}}}}).status == 422);
    CHECK(f.svc.submit_survey(f.student, {{"answers", Json::object()}}).status == 422);
    auto r = f.svc.submit_survey(f.student, {{"answers", {{"q1", "happy"}}}});
    CHECK(r.status == 200);
    CHECK(r.body["answers"]["q1"] == "happy");
    CHECK(f.svc.submit_survey(f.student, {{"answers", {{"q1", "sad"}}}}).status == 409);
    CHECK(f.svc.submit_survey(f.student, {{"answers", {{"q2", "neutral"}}}}).body["answers"].size() == 2);
    auto ev = f.svc.session_events(f.session);
    CHECK(ev.back().kind == EventKind::survey_response);
    CHECK(ev.back().payload.at("answers") == "q2=neutral");
}

TEST_CASE("export") {
    auto dir = std::filesystem::temp_directory_path() / "cat_service_export";
    std::filesystem::remove_all(dir);
    Fixture f({.catalog = small_catalog(), .pseudonym_salt = "s", .data_dir = dir.string()});
    f.go(1);
    f.add("fillEmpty(blue)");
    f.confirm();
    auto r = f.svc.export_session(f.session, false);
    CHECK(r.status == 409);
    CHECK(r.body["message"] == "session still active");
    CHECK(f.svc.close_session(f.session).status == 200);
    CHECK(f.add("fillEmpty(red)").status == 409);
    CHECK(f.svc.register_student(f.session, {{"gender", "f"}, {"birth_date", "2011-05-01"}}).status == 409);

    r = f.svc.export_session(f.session, true);
    CHECK(r.status == 200);
    CHECK(r.content_type == "application/x-ndjson");
    CHECK(r.text().find("Ticino") == std::string::npos);
    CHECK(r.text().find("Scuola Nord") == std::string::npos);
    CHECK(r.text().find(f.student) == std::string::npos);
    CHECK(std::filesystem::exists(dir / (f.session + ".events.jsonl")));
    CHECK(std::filesystem::exists(dir / (f.session + ".pseudo.catlog.jsonl")));
    std::ifstream map(dir / (f.session + ".mapping.csv"));
    std::string csv((std::istreambuf_iterator<char>(map)), {});
    CHECK(csv.find("Scuola Nord") != std::string::npos);
    CHECK(f.svc.export_session("ses-none", false).status == 404);
    std::filesystem::remove_all(dir);
}

TEST_CASE("localised labels") {
    Fixture f;
    for (auto [lang, word] : {std::pair{"en", "Retry"}, {"it", "Riprova"}, {"fr", "Réessayer"}, {"de", "Nochmal"}}) {
        auto v = f.svc.view(f.student, lang);
        REQUIRE(v.status == 200);
        CHECK(v.body["labels"]["retry"] == word);
        CHECK(v.body["lang"] == lang);
    }
    CHECK(f.svc.view(f.student, "es").status == 422);
    CHECK(label("xx", "score") == "Score");
}

TEST_CASE("every logged action replays to the live state") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Service svc({.clock = fixtures::step_clock(seed)});
        auto sid = fixtures::random_session(svc, seed, 3, 300);
        auto ev = svc.session_events(sid);
        auto engines = replay(ev, svc.schema_catalog());
        auto live = svc.live_records(sid);
        CHECK(derive_task_records(ev, svc.schema_catalog()).size() == live.size());
        for (const auto& r : live) {
            auto it = engines.find(r.student_id);
            REQUIRE(it != engines.end());
            const TaskState* t = it->second.task(r.schema_id);
            REQUIRE(t);
            CHECK(it->second.record_of(*t, default_rubric()) == r);
        }
    }
}

TEST_CASE("students work in parallel") {
    Service svc({.catalog = small_catalog()});
    std::string sid = svc.create_session(form()).body["session_id"];
    std::vector<std::string> ids;
    for (int i = 0; i < 8; ++i)
        ids.push_back(svc.register_student(sid, {{"gender", "m"}, {"birth_date", "2012-02-02"}}).body["student_id"]);
    std::vector<std::thread> threads;
    for (const auto& id : ids)
        threads.emplace_back([&svc, id] {
            svc.navigate(id, {{"module", "validation"}, {"index", 1}});
            for (int k = 0; k < 30; ++k) {
                svc.submit_action(id, {{"kind", "ADD_COMMAND"}, {"command", "goCell(C" + std::to_string(k % 6 + 1) + ")"}});
                svc.submit_action(id, {{"kind", "CONFIRM_COMMAND"}});
            }
            svc.submit_action(id, {{"kind", "ADD_COMMAND"}, {"command", "fillEmpty(blue)"}});
            svc.submit_action(id, {{"kind", "CONFIRM_COMMAND"}});
            svc.submit_action(id, {{"kind", "TASK_COMPLETED"}});
        });
    for (auto& t : threads) t.join();
    auto ev = svc.session_events(sid);
    CHECK(ev.size() == 8 * 64);
    std::map<std::string, int> adds;
    for (const auto& e : ev)
        if (e.kind == EventKind::add_command && e.payload.at("command").rfind("goCell", 0) == 0) {
            int k = adds[e.student_id]++;
            CHECK(e.payload.at("command") == "goCell(C" + std::to_string(k % 6 + 1) + ")");
        }
    for (const auto& r : svc.live_records(sid))
        if (r.schema_id == "U1") CHECK(r.solved);
    CHECK(fixtures::by_student(derive_task_records(ev, svc.schema_catalog())) == fixtures::by_student(svc.live_records(sid)));
}

}
