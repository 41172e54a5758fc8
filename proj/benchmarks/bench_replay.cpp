#include <benchmark/benchmark.h>

#include <string>

#include "cat/analysis.hpp"
#include "cat/dataset.hpp"
#include "cat/engine.hpp"
#include "cat/schema.hpp"
#include "cat/service.hpp"

using namespace cat;

namespace {

std::string solve(const Schema& s) {
    std::string colours, cells;
    for (auto c : all_cells()) {
        colours += (colours.empty() ? "" : ",") + std::string(to_string(*s.cells.get(c)));
        cells += (cells.empty() ? "" : ",") + c.to_string();
    }
    return "paintMultipleCells({" + colours + "},{" + cells + "})";
}

// one class: every pupil walks the validation set, solving even schemas
struct Classroom {
    Service svc;
    std::string session;

    explicit Classroom(int pupils) : svc([] {
        ServiceConfig cfg;
        cfg.clock = [t = std::int64_t{1678867200000}]() mutable { return t += 7000; };
        return cfg;
    }()) {
        session = svc.create_session({{"date", "2023-03-15"}, {"canton", "Ticino"}, {"school", "Scuola"},
                                      {"grade_level", "5"}, {"programming_allowed", true}})
                      .body["session_id"];
        for (int i = 0; i < pupils; ++i) {
            std::string id = svc.register_student(session, {{"gender", "f"}, {"birth_date", "2012-01-01"}})
                                 .body["student_id"];
            const auto& set = validation_schemas();
            for (std::size_t k = 0; k < set.size(); ++k) {
                svc.navigate(id, {{"module", "validation"}, {"index", k + 1}});
                svc.submit_action(id, {{"kind", "ADD_COMMAND"}, {"command", "goCell(C1)"}});
                svc.submit_action(id, {{"kind", "ADD_COMMAND"}, {"command", k % 2 ? "paintSingleCell(red)" : solve(set[k])}});
                svc.submit_action(id, {{"kind", "CONFIRM_COMMAND"}});
                svc.submit_action(id, {{"kind", k % 2 ? "SURRENDER" : "TASK_COMPLETED"}});
            }
        }
        svc.close_session(session);
    }
};

void BM_Replay(benchmark::State& state) {
    Classroom room(static_cast<int>(state.range(0)));
    auto events = room.svc.session_events(room.session);
    for (auto _ : state) {
        auto records = derive_task_records(events, room.svc.schema_catalog());
        benchmark::DoNotOptimize(records);
    }
    state.counters["events"] = static_cast<double>(events.size());
}
BENCHMARK(BM_Replay)->Arg(3)->Arg(25);

void BM_ExportAndParse(benchmark::State& state) {
    Classroom room(25);
    for (auto _ : state) {
        auto raw = room.svc.export_session(room.session, true);
        auto ds = parse_dataset(raw.raw);
        benchmark::DoNotOptimize(ds);
    }
}
BENCHMARK(BM_ExportAndParse);

void BM_Analyses(benchmark::State& state) {
    Classroom room(25);
    Dataset ds = parse_dataset(room.svc.export_session(room.session, false).raw);
    for (auto _ : state) {
        auto t = time_by_interaction(ds);
        auto s = success_by_schema(ds, default_age_bands());
        auto d = strategy_distribution(ds, default_age_bands());
        benchmark::DoNotOptimize(t);
        benchmark::DoNotOptimize(s);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_Analyses);

}  // namespace
