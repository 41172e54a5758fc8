#include <benchmark/benchmark.h>

#include "cat/interp.hpp"
#include "cat/lang.hpp"
#include "cat/schema.hpp"
#include "cat/scorer.hpp"

using namespace cat;

namespace {

void BM_RunProgram(benchmark::State& state) {
    Program p = *parse_program(
        "goCell(C1)\npaintPattern({yellow,red},6,right)\n"
        "repeatCommands({paintPattern({green,blue},4,square_right_up_left)},{A3,E3})\n"
        "mirrorCells({C1,C2,C3,C4,C5,C6},horizontal)\nmirrorBoard(vertical)\nfillEmpty(blue)");
    for (auto _ : state) {
        auto r = run_program(p);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_RunProgram);

void BM_PatternPath(benchmark::State& state) {
    auto spec = *parse_pattern_name("zigzag_right_up");
    CellCoord start{'C', 1};
    for (auto _ : state) {
        auto path = pattern_path(start, spec, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(path);
    }
}
BENCHMARK(BM_PatternPath)->Arg(4)->Arg(64)->Arg(1024);

void BM_ClassifyAndCheck(benchmark::State& state) {
    Program p = *parse_program("goCell(C1)\npaintPattern({yellow,red},6,right)\nmirrorBoard(horizontal)");
    const Schema& s = validation_schemas().front();
    CrossBoard b = run_program(p).state.board;
    for (auto _ : state) {
        auto d = classify_dimension(p);
        bool ok = check_success(b, s);
        benchmark::DoNotOptimize(d);
        benchmark::DoNotOptimize(ok);
    }
}
BENCHMARK(BM_ClassifyAndCheck);

}  // namespace
