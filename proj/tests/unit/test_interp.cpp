#include <doctest.h>

#include <nlohmann/json.hpp>
#include <set>

#include "cat/interp.hpp"
#include "gen.hpp"
#include "oracle.hpp"

using namespace cat;

namespace {

CellCoord at(const char* s) { return *CellCoord::parse(s); }

Program prog(std::string_view text) {
    auto p = parse_program(text);
    REQUIRE_MESSAGE(p.has_value(), std::string(text));
    return *p;
}

RunResult run(std::string_view text, const CrossBoard& b = {}) { return run_program(prog(text), b); }

std::string compact_of(std::initializer_list<std::pair<const char*, Color>> cells) {
    CrossBoard b;
    for (auto [c, col] : cells) b.set(at(c), col);
    return b.to_compact();
}

std::vector<std::string> coloured(const CrossBoard& b) {
    std::vector<std::string> out;
    for (auto c : all_cells())
        if (b.is_coloured(c)) out.push_back(c.to_string());
    return out;
}

CrossBoard row_c_alternating() {
    CrossBoard b;
    const char* cells[] = {"C1", "C2", "C3", "C4", "C5", "C6"};
    for (int i = 0; i < 6; ++i) b.set(at(cells[i]), i % 2 ? Color::red : Color::yellow);
    return b;
}

}  // namespace

TEST_SUITE("interp") {

TEST_CASE("goCell") {
    ExecState s;
    s.cursor = at("C1");
    CHECK_FALSE(exec_go_cell(s, at("C3")));
    CHECK(s.cursor == at("C3"));
    ExecState t;
    CHECK_FALSE(exec_go_cell(t, at("A3")));
    CHECK(t.cursor == at("A3"));
    auto e = exec_go_cell(t, at("B2"));
    REQUIRE(e);
    CHECK(e->kind == ExecErrorKind::out_of_board);
    CHECK(e->cell == at("B2"));
    CHECK(t.cursor == at("A3"));
}

TEST_CASE("go") {
    ExecState s;
    s.cursor = at("C1");
    CHECK_FALSE(exec_go(s, Direction::right, 2));
    CHECK(s.cursor == at("C3"));
    s.cursor = at("C1");
    auto e = exec_go(s, Direction::up, 2);
    REQUIRE(e);
    CHECK(e->kind == ExecErrorKind::out_of_board);
    CHECK(s.cursor == at("C1"));
    s.cursor = at("C6");
    CHECK_FALSE(exec_go(s, Direction::left, 5));
    CHECK(s.cursor == at("C1"));
    ExecState u;
    CHECK(exec_go(u, Direction::up, 1)->kind == ExecErrorKind::no_position);
    // every intermediate step must stay on the cross
    s.cursor = at("F4");
    CHECK(exec_go(s, Direction::down_right, 2)->kind == ExecErrorKind::out_of_board);
    CHECK(s.cursor == at("F4"));
}

TEST_CASE("paintSingleCell") {
    ExecState s;
    s.cursor = at("C3");
    CHECK_FALSE(exec_paint_single(s, Color::red));
    CHECK(s.board.get(at("C3")) == Color::red);
    ExecState u;
    CHECK(exec_paint_single(u, Color::red)->kind == ExecErrorKind::no_position);
    s.board.set(at("C3"), Color::yellow);
    CHECK_FALSE(exec_paint_single(s, Color::red));
    CHECK(s.board.get(at("C3")) == Color::red);
    CHECK(s.cursor == at("C3"));
}

TEST_CASE("paintPattern") {
    auto r = run("goCell(C1);paintPattern({yellow,red},6,right)");
    REQUIRE(r.ok());
    CHECK(r.state.board == row_c_alternating());
    CHECK(r.state.cursor == at("C6"));

    r = run("goCell(A3);paintPattern({green,blue},4,square_right_up_left)");
    REQUIRE(r.ok());
    CHECK(r.state.board.to_compact() == compact_of({{"A3", Color::green}, {"A4", Color::blue},
                                                   {"B4", Color::green}, {"B3", Color::blue}}));
    CHECK(r.state.cursor == at("B3"));

    r = run("goCell(F3);paintPattern({red},3,up)");
    REQUIRE(r.error);
    CHECK(r.error->kind == ExecErrorKind::pattern_overflow);
    CHECK(r.state.board == CrossBoard{});
    CHECK(r.state.cursor == at("F3"));

    r = run("goCell(C1);paintPattern({red},7,right)");
    REQUIRE(r.error);
    CHECK(r.error->message == "the right pattern from C1 leaves the cross at C7");
    CHECK(r.error->cell == CellCoord{'C', 7});
    CHECK_FALSE(r.error->suggestion.empty());

    CHECK(run("goCell(A3);paintPattern({red},3,square_right_up_left)").error->kind == ExecErrorKind::invalid_pattern);
    CHECK(run("goCell(A3);paintPattern({red},4,square_right_right_left)").error->kind ==
          ExecErrorKind::invalid_pattern);
    CHECK(run("paintPattern({red},2,up)").error->kind == ExecErrorKind::no_position);
}

TEST_CASE("L and zigzag geometry") {
    auto r = run("goCell(A3);paintPattern({red},4,l_up_right)");
    REQUIRE(r.ok());
    CHECK(coloured(r.state.board) == std::vector<std::string>{"A3", "B3", "C3", "C4"});
    CHECK(r.state.cursor == at("C4"));
    r = run("goCell(C1);paintPattern({red,blue},5,zigzag_right_up)");
    REQUIRE(r.ok());
    CHECK(r.state.board.to_compact() == compact_of({{"C1", Color::red}, {"C2", Color::blue}, {"D2", Color::red},
                                                   {"D3", Color::blue}, {"E3", Color::red}}));
    auto path = pattern_path(at("C1"), PatternSpec::zigzag(Direction::right, Direction::up), 5);
    CHECK(path == std::vector<CellCoord>{at("C1"), at("C2"), at("D2"), at("D3"), at("E3")});
}

TEST_CASE("paintMultipleCells") {
    auto r = run("paintMultipleCells({yellow,red},{C1,C2,C3,C4,C5,C6})");
    REQUIRE(r.ok());
    CHECK(r.state.board == row_c_alternating());
    CHECK(r.state.cursor == at("C6"));
    r = run("paintMultipleCells({blue},{D4})");
    CHECK(r.state.board.get(at("D4")) == Color::blue);
    CHECK(r.state.cursor == at("D4"));
    r = run("paintMultipleCells({red},{C1,E1})");
    REQUIRE(r.error);
    CHECK(r.error->kind == ExecErrorKind::out_of_board);
    CHECK(r.error->cell == at("E1"));
    CHECK(r.state.board == CrossBoard{});
}

TEST_CASE("fillEmpty") {
    auto r = run("fillEmpty(blue)");
    CHECK(r.state.board == CrossBoard::filled(Color::blue));
    CHECK_FALSE(r.state.cursor);
    CrossBoard b;
    for (int c = 1; c <= 6; ++c) b.set({'C', c}, Color::yellow);
    r = run("fillEmpty(green)", b);
    int green = 0, yellow = 0;
    for (auto c : r.state.board.cells()) (*c == Color::green ? green : yellow)++;
    CHECK(green == 14);
    CHECK(yellow == 6);
    r = run("fillEmpty()");
    REQUIRE(r.error);
    CHECK(r.error->kind == ExecErrorKind::no_color);
    CHECK(r.error->suggestion == "select a colour first");
}

TEST_CASE("repeatCommands") {
    auto r = run("repeatCommands({paintPattern({green,blue},4,square_right_up_left)},{A3,E3})");
    REQUIRE(r.ok());
    CHECK(coloured(r.state.board) == std::vector<std::string>{"A3", "A4", "B3", "B4", "E3", "E4", "F3", "F4"});
    CHECK(r.state.cursor == at("F3"));

    auto a = run("repeatCommands({paintSingleCell(red)},{C1})");
    auto b = run("goCell(C1);paintSingleCell(red)");
    CHECK(a.state.board == b.state.board);
    CHECK(a.state.cursor == b.state.cursor);

    r = run("repeatCommands({go(up,3)},{C1})");
    REQUIRE(r.error);
    CHECK(r.error->kind == ExecErrorKind::out_of_board);
    CHECK(run("repeatCommands({paintSingleCell(red)},{B2})").error->kind == ExecErrorKind::out_of_board);
    // the whole command is undone when a later iteration fails
    r = run("repeatCommands({paintPattern({red},2,right)},{C1,C6})");
    REQUIRE(r.error);
    CHECK(r.state.board == CrossBoard{});
}

TEST_CASE("copyCells") {
    CrossBoard b;
    b.set(at("C1"), Color::yellow);
    auto r = run("copyCells({C1},{C6})", b);
    CHECK(r.state.board.get(at("C6")) == Color::yellow);
    b.set(at("C6"), Color::red);
    r = run("copyCells({C1,C6},{C6,C1})", b);
    CHECK(r.state.board.get(at("C1")) == Color::red);
    CHECK(r.state.board.get(at("C6")) == Color::yellow);
    CHECK(run("copyCells({C1,C2},{F3})").error->kind == ExecErrorKind::length_mismatch);
    CHECK(run("copyCells({C1},{B2})").error->kind == ExecErrorKind::out_of_board);
    r = run("copyCells({C2},{C6})", b);
    CHECK(r.state.board.get(at("C6")) == Color::red);
    CHECK_FALSE(r.state.cursor);
}

TEST_CASE("mirrorBoard") {
    CrossBoard b;
    b.set(at("C1"), Color::yellow);
    CHECK(coloured(run("mirrorBoard(horizontal)", b).state.board) == std::vector<std::string>{"C1", "D1"});
    CHECK(coloured(run("mirrorBoard(vertical)", b).state.board) == std::vector<std::string>{"C1", "C6"});
    CrossBoard full = CrossBoard::filled(Color::red);
    full.set(at("A3"), Color::blue);
    CHECK(run("mirrorBoard(horizontal)", full).state.board == full);
}

TEST_CASE("mirrorCells") {
    auto r = run("mirrorCells({C1,C2,C3,C4,C5,C6},horizontal)", row_c_alternating());
    for (int c = 1; c <= 6; ++c) CHECK(r.state.board.get({'D', c}) == r.state.board.get({'C', c}));
    CrossBoard b;
    b.set(at("D4"), Color::green);
    b.set(at("C4"), Color::red);
    CHECK(run("mirrorCells({D4},horizontal)", b).state.board.get(at("C4")) == Color::red);
    CHECK(run("mirrorCells({},horizontal)", b).state.board == b);
    CHECK(run("mirrorCells({B2},horizontal)", b).error->kind == ExecErrorKind::out_of_board);
}

TEST_CASE("mirrorCommands") {
    auto r = run("mirrorCommands({goCell(C1),paintPattern({yellow},6,right)},horizontal)");
    REQUIRE(r.ok());
    CHECK(coloured(r.state.board) == std::vector<std::string>{"D1", "D2", "D3", "D4", "D5", "D6"});
    r = run("mirrorCommands({goCell(C1),paintPattern({yellow},6,right)},vertical)");
    REQUIRE(r.ok());
    CHECK(coloured(r.state.board) == std::vector<std::string>{"C1", "C2", "C3", "C4", "C5", "C6"});
    CHECK(r.state.cursor == at("C1"));
    CHECK(run("mirrorCommands({},horizontal)").state.board == CrossBoard{});
}

TEST_CASE("run_program") {
    auto r = run("goCell(C1)\npaintPattern({yellow,red},6,right)");
    CHECK(r.ok());
    CHECK(r.state.board.coloured_count() == 6);
    r = run("");
    CHECK(r.ok());
    CHECK(r.state.executed == 0);
    r = run("goCell(C1)\npaintSingleCell(red)\npaintPattern({red},9,right)\nfillEmpty(blue)");
    REQUIRE(r.error);
    CHECK(r.state.executed == 2);
    CHECK(r.error->command_index == 2);
    CHECK(r.error->command == "paintPattern({red},9,right)");
    CHECK(r.state.board.coloured_count() == 1);
    CHECK(r.state.trace.size() == 3);
    CHECK(r.state.trace.back().error == r.error);
}

TEST_CASE("progress callback sees every step in order") {
    std::vector<std::size_t> seen;
    RunOptions opts;
    opts.on_step = [&](const TraceEntry& t) { seen.push_back(t.index); };
    auto r = run_program(prog("goCell(C1);paintSingleCell(red);go(up,5);fillEmpty(red)"), CrossBoard{}, opts);
    CHECK(seen == std::vector<std::size_t>{0, 1, 2});
    CHECK(r.state.trace[1].changed == std::vector<CellCoord>{at("C1")});
}

TEST_CASE("trace export") {
    auto r = run("goCell(C1);paintSingleCell(red);go(down,1)");
    std::string text = trace_to_jsonl(r.state.trace);
    std::vector<nlohmann::json> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        lines.push_back(nlohmann::json::parse(text.substr(pos, nl - pos)));
        pos = nl == std::string::npos ? text.size() : nl + 1;
    }
    REQUIRE(lines.size() == 3);
    CHECK(lines[1]["command"] == "paintSingleCell(red)");
    CHECK(lines[1]["changed"] == nlohmann::json::array({"C1"}));
    CHECK(lines[1]["error"].is_null());
    CHECK(lines[2]["error"]["kind"] == "OUT_OF_BOARD");
}

TEST_CASE("line pattern equals explicit cell list") {
    for (auto start : all_cells())
        for (auto d : kAllDirections)
            for (int n = 1; n <= 6; ++n) {
                auto path = pattern_path(start, PatternSpec::line(d), n);
                bool fits = std::all_of(path.begin(), path.end(), [](CellCoord c) { return is_valid_cell(c); });
                if (!fits) continue;
                auto a = run_program(Program{{GoCell{start}, PaintPattern{{Color::green}, n, PatternSpec::line(d)}}});
                auto b = run_program(Program{{PaintMultipleCells{{Color::green}, path}}});
                REQUIRE(a.ok());
                REQUIRE(b.ok());
                CHECK(a.state.board == b.state.board);
                CHECK(a.state.cursor == b.state.cursor);
            }
}

TEST_CASE("pattern cells match the brute-force walk") {
    for (const auto& pc : oracle::legal_patterns()) {
        auto spec = parse_pattern_name(pc.token);
        REQUIRE(spec);
        for (auto start : oracle::cross()) {
            CellCoord s{static_cast<char>('A' + start.row), start.col + 1};
            int n = spec->fixed_size().value_or(5);
            auto got = pattern_path(s, *spec, n);
            auto want = oracle::walk(start, pc, n);
            REQUIRE(got.size() == want.size());
            for (std::size_t i = 0; i < got.size(); ++i)
                CHECK(got[i].to_string() == oracle::name(want[i]));
        }
    }
}

TEST_CASE("mirrorBoard is idempotent") {
    gen::AstGen g(21);
    for (int i = 0; i < 500; ++i) {
        CrossBoard b;
        for (auto c : all_cells())
            if (g.coin(0.3)) b.set(c, g.color());
        for (auto a : {Axis::horizontal, Axis::vertical}) {
            ExecState once;
            once.board = b;
            exec_mirror_board(once, a);
            ExecState twice = once;
            exec_mirror_board(twice, a);
            CHECK(once.board == twice.board);
            for (auto c : all_cells())
                if (b.is_coloured(c)) CHECK(once.board.get(c) == b.get(c));
        }
    }
}

TEST_CASE("random programs stay on the cross and count commands") {
    gen::AstGen g(99);
    for (int i = 0; i < 2000; ++i) {
        Program p;
        int n = g.uniform(1, 8);
        for (int k = 0; k < n; ++k) p.commands.push_back(g.coin(0.8) ? g.runnable() : g.command());
        RunResult r;
        REQUIRE_NOTHROW(r = run_program(p));
        if (r.state.cursor) CHECK(is_valid_cell(*r.state.cursor));
        for (const auto& t : r.state.trace)
            for (auto c : t.changed) CHECK(is_valid_cell(c));
        if (r.ok()) {
            CHECK(r.state.executed == p.commands.size());
        } else {
            CHECK(r.state.executed + 1 <= p.commands.size());
            CHECK(r.error->command_index == r.state.executed);
            CHECK(r.error->command == format_command(p.commands[r.state.executed]));
        }
    }
}

TEST_CASE("a failing command leaves the state untouched") {
    gen::AstGen g(5);
    for (int i = 0; i < 2000; ++i) {
        ExecState s;
        for (int k = 0; k < 3; ++k) (void)execute(s, g.runnable());
        ExecState before = s;
        Command c = g.command();
        if (apply_command(s, c)) {
            CHECK(s.board == before.board);
            CHECK(s.cursor == before.cursor);
        }
    }
}

}
