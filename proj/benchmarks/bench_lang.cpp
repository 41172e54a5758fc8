#include <benchmark/benchmark.h>

#include "cat/lang.hpp"

using namespace cat;

namespace {

const char* kProgram =
    "goCell(C1)\n"
    "paintPattern({yellow,red},6,right)\n"
    "repeatCommands({paintPattern({green,blue},4,square_right_up_left)},{A3,E3})\n"
    "mirrorCells({C1,C2,C3,C4,C5,C6},horizontal)\n"
    "copyCells({A3,A4},{E3,E4})\n"
    "fillEmpty(blue)\n";

void BM_Parse(benchmark::State& state) {
    for (auto _ : state) {
        auto p = parse_program(kProgram);
        benchmark::DoNotOptimize(p);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(std::string_view(kProgram).size()));
}
BENCHMARK(BM_Parse);

void BM_Format(benchmark::State& state) {
    Program p = *parse_program(kProgram);
    for (auto _ : state) {
        auto s = format_program(p);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_Format);

void BM_ParseError(benchmark::State& state) {
    for (auto _ : state) {
        auto p = parse_program("goCell(C1)\npaintSingleCell(red)\ngo(rigth,2)");
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_ParseError);

}  // namespace
