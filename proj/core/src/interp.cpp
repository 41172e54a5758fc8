#include "cat/interp.hpp"

#include <nlohmann/json.hpp>

namespace cat {

std::string_view to_string(ExecErrorKind k) noexcept {
    switch (k) {
    case ExecErrorKind::out_of_board: return "OUT_OF_BOARD";
    case ExecErrorKind::no_position: return "NO_POSITION";
    case ExecErrorKind::pattern_overflow: return "PATTERN_OVERFLOW";
    case ExecErrorKind::invalid_pattern: return "INVALID_PATTERN";
    case ExecErrorKind::length_mismatch: return "LENGTH_MISMATCH";
    case ExecErrorKind::no_color: return "NO_COLOR";
    }
    return "?";
}

namespace {

ExecError make_error(ExecErrorKind kind, std::string message, std::string suggestion,
                     std::optional<CellCoord> cell = std::nullopt) {
    ExecError e;
    e.kind = kind;
    e.message = std::move(message);
    e.suggestion = std::move(suggestion);
    e.cell = cell;
    return e;
}

ExecError off_cross(CellCoord c) {
    return make_error(ExecErrorKind::out_of_board, c.to_string() + " is not a dot of the cross",
                      "use a coordinate in rows C-D or columns 3-4", c);
}

ExecError no_position() {
    return make_error(ExecErrorKind::no_position, "there is no current position yet",
                      "start with goCell(...) to choose a dot");
}

std::optional<CellCoord> first_invalid(const std::vector<CellCoord>& cells) {
    for (auto c : cells)
        if (!is_valid_cell(c)) return c;
    return std::nullopt;
}

const Color& cycle(const std::vector<Color>& colors, std::size_t k) { return colors[k % colors.size()]; }

}  // namespace

std::vector<CellCoord> pattern_path(CellCoord start, const PatternSpec& pattern, int repetitions) {
    std::vector<CellCoord> path{start};
    const auto& m = pattern.moves;
    auto walk = [&](Direction d) { path.push_back(advance(path.back(), step_of(d))); };
    switch (pattern.kind) {
    case PatternKind::cardinal:
    case PatternKind::diagonal:
        for (int k = 1; k < repetitions; ++k) walk(m[0]);
        break;
    case PatternKind::square:
        walk(m[0]);
        walk(m[1]);
        walk(m[2]);
        break;
    case PatternKind::l:
        walk(m[0]);
        walk(m[0]);
        walk(m[1]);
        break;
    case PatternKind::zigzag:
        for (int k = 1; k < repetitions; ++k) walk(k % 2 == 1 ? m[0] : m[1]);
        break;
    }
    return path;
}

ExecStatus exec_go_cell(ExecState& s, CellCoord cell) {
    if (!is_valid_cell(cell)) return off_cross(cell);
    s.cursor = cell;
    return std::nullopt;
}

ExecStatus exec_go(ExecState& s, Direction move, int repetitions) {
    if (!s.cursor) return no_position();
    CellCoord at = *s.cursor;
    for (int k = 1; k <= repetitions; ++k) {
        at = advance(at, step_of(move));
        if (!is_valid_cell(at)) {
            int fit = k - 1;
            std::string hint = fit > 0 ? "at most " + std::to_string(fit) + " step" + (fit == 1 ? "" : "s") +
                                             " fit going " + std::string(to_string(move))
                                       : "pick a different direction";
            return make_error(ExecErrorKind::out_of_board,
                              "moving " + std::string(to_string(move)) + " from " + s.cursor->to_string() +
                                  " leaves the cross after " + std::to_string(fit) + " step" + (fit == 1 ? "" : "s"),
                              hint, at);
        }
    }
    s.cursor = at;
    return std::nullopt;
}

ExecStatus exec_paint_single(ExecState& s, Color color) {
    if (!s.cursor) return no_position();
    s.board.set(*s.cursor, color);
    return std::nullopt;
}

ExecStatus exec_paint_pattern(ExecState& s, const std::vector<Color>& colors, int repetitions,
                              const PatternSpec& pattern) {
    if (!s.cursor) return no_position();
    if (colors.empty())
        return make_error(ExecErrorKind::no_color, "no colour given for the pattern", "select a colour first");
    if (auto size = pattern.fixed_size(); size && repetitions != *size)
        return make_error(ExecErrorKind::invalid_pattern,
                          "a " + std::string(to_string(pattern.kind)) + " pattern paints exactly " +
                              std::to_string(*size) + " dots, not " + std::to_string(repetitions),
                          "set the repetitions to " + std::to_string(*size));
    if (!has_valid_shape(pattern))
        return make_error(ExecErrorKind::invalid_pattern, "'" + pattern.name() + "' is not a valid " +
                                                              std::string(to_string(pattern.kind)) + " shape",
                          "choose one of the listed pattern shapes");
    if (repetitions < 1)
        return make_error(ExecErrorKind::invalid_pattern, "repetitions must be at least 1", "paint at least one dot");

    auto path = pattern_path(*s.cursor, pattern, repetitions);
    for (std::size_t k = 0; k < path.size(); ++k) {
        if (!is_valid_cell(path[k]))
            return make_error(ExecErrorKind::pattern_overflow,
                              "the " + pattern.name() + " pattern from " + s.cursor->to_string() +
                                  " leaves the cross at " + path[k].to_string(),
                              k > 0 && !pattern.fixed_size()
                                  ? "start from another dot or paint at most " + std::to_string(k) + " dots"
                                  : "start from another dot",
                              path[k]);
    }
    for (std::size_t k = 0; k < path.size(); ++k) s.board.set(path[k], cycle(colors, k));
    s.cursor = path.back();
    return std::nullopt;
}

ExecStatus exec_paint_multiple(ExecState& s, const std::vector<Color>& colors,
                               const std::vector<CellCoord>& cells) {
    if (colors.empty())
        return make_error(ExecErrorKind::no_color, "no colour given for the cells", "select a colour first");
    if (auto bad = first_invalid(cells)) return off_cross(*bad);
    for (std::size_t k = 0; k < cells.size(); ++k) s.board.set(cells[k], cycle(colors, k));
    if (!cells.empty()) s.cursor = cells.back();
    return std::nullopt;
}

ExecStatus exec_fill_empty(ExecState& s, std::optional<Color> color) {
    if (!color)
        return make_error(ExecErrorKind::no_color, "fillEmpty was used without a colour", "select a colour first");
    for (auto c : all_cells())
        if (!s.board.is_coloured(c)) s.board.set(c, *color);
    return std::nullopt;
}

ExecStatus exec_repeat(ExecState& s, const std::vector<Command>& commands,
                       const std::vector<CellCoord>& positions) {
    ExecState work = s;
    for (auto p : positions) {
        if (!is_valid_cell(p)) return off_cross(p);
        work.cursor = p;
        for (const auto& c : commands)
            if (auto err = apply_command(work, c)) return err;
    }
    s.board = work.board;
    s.cursor = work.cursor;
    return std::nullopt;
}

ExecStatus exec_copy(ExecState& s, const std::vector<CellCoord>& origin,
                     const std::vector<CellCoord>& destination) {
    if (origin.size() != destination.size())
        return make_error(ExecErrorKind::length_mismatch,
                          "copyCells has " + std::to_string(origin.size()) + " origin and " +
                              std::to_string(destination.size()) + " destination cells",
                          "give the same number of origin and destination cells");
    if (auto bad = first_invalid(origin)) return off_cross(*bad);
    if (auto bad = first_invalid(destination)) return off_cross(*bad);
    const CrossBoard before = s.board;
    for (std::size_t k = 0; k < origin.size(); ++k)
        if (auto color = before.get(origin[k])) s.board.set(destination[k], *color);
    return std::nullopt;
}

namespace {

void mirror_sources(ExecState& s, const std::vector<CellCoord>& sources, Axis axis) {
    const CrossBoard before = s.board;
    for (auto c : sources) {
        auto color = before.get(c);
        if (!color) continue;
        CellCoord target = mirror_coord(c, axis);
        if (!before.is_coloured(target) && !s.board.is_coloured(target)) s.board.set(target, *color);
    }
}

}  // namespace

ExecStatus exec_mirror_board(ExecState& s, Axis axis) {
    std::vector<CellCoord> all(all_cells().begin(), all_cells().end());
    mirror_sources(s, all, axis);
    return std::nullopt;
}

ExecStatus exec_mirror_cells(ExecState& s, const std::vector<CellCoord>& cells, Axis axis) {
    if (auto bad = first_invalid(cells)) return off_cross(*bad);
    mirror_sources(s, cells, axis);
    return std::nullopt;
}

ExecStatus exec_mirror_commands(ExecState& s, const std::vector<Command>& commands, Axis axis) {
    ExecState work = s;
    for (const auto& c : commands)
        if (auto err = apply_command(work, reflect(c, axis))) return err;
    s.board = work.board;
    s.cursor = work.cursor;
    return std::nullopt;
}

ExecStatus apply_command(ExecState& s, const Command& c) {
    return std::visit(
        [&s](const auto& node) -> ExecStatus {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, GoCell>) return exec_go_cell(s, node.cell);
            else if constexpr (std::is_same_v<T, Go>) {
                if (node.repetitions < 1)
                    return make_error(ExecErrorKind::invalid_pattern, "repetitions must be at least 1",
                                      "move at least one step");
                return exec_go(s, node.move, node.repetitions);
            }
            else if constexpr (std::is_same_v<T, PaintSingleCell>) return exec_paint_single(s, node.color);
            else if constexpr (std::is_same_v<T, PaintPattern>)
                return exec_paint_pattern(s, node.colors, node.repetitions, node.pattern);
            else if constexpr (std::is_same_v<T, PaintMultipleCells>)
                return exec_paint_multiple(s, node.colors, node.cells);
            else if constexpr (std::is_same_v<T, FillEmpty>) return exec_fill_empty(s, node.color);
            else if constexpr (std::is_same_v<T, RepeatCommands>) return exec_repeat(s, node.commands, node.positions);
            else if constexpr (std::is_same_v<T, CopyCells>) return exec_copy(s, node.origin, node.destination);
            else if constexpr (std::is_same_v<T, MirrorBoard>) return exec_mirror_board(s, node.axis);
            else if constexpr (std::is_same_v<T, MirrorCells>) return exec_mirror_cells(s, node.cells, node.axis);
            else return exec_mirror_commands(s, node.commands, node.axis);
        },
        c.node);
}

ExecStatus execute(ExecState& s, const Command& c) {
    TraceEntry entry;
    entry.index = s.executed;
    entry.command = format_command(c);

    ExecState work{s.board, s.cursor, s.executed, {}};
    if (auto err = apply_command(work, c)) {
        err->command_index = entry.index;
        err->command = entry.command;
        entry.error = err;
        s.trace.push_back(std::move(entry));
        return err;
    }
    for (auto cell : all_cells())
        if (work.board.get(cell) != s.board.get(cell)) entry.changed.push_back(cell);
    s.board = work.board;
    s.cursor = work.cursor;
    ++s.executed;
    s.trace.push_back(std::move(entry));
    return std::nullopt;
}

RunResult run_program(const Program& program, ExecState initial, const RunOptions& options) {
    RunResult result{std::move(initial), std::nullopt};
    for (const auto& c : program.commands) {
        auto err = execute(result.state, c);
        if (options.on_step) options.on_step(result.state.trace.back());
        if (err) {
            result.error = std::move(err);
            break;
        }
    }
    return result;
}

RunResult run_program(const Program& program, const CrossBoard& initial, const RunOptions& options) {
    ExecState state;
    state.board = initial;
    return run_program(program, std::move(state), options);
}

std::string trace_to_jsonl(const std::vector<TraceEntry>& trace) {
    std::string out;
    for (const auto& t : trace) {
        nlohmann::ordered_json line;
        line["index"] = t.index;
        line["command"] = t.command;
        auto changed = nlohmann::ordered_json::array();
        for (auto c : t.changed) changed.push_back(c.to_string());
        line["changed"] = std::move(changed);
        if (t.error) {
            nlohmann::ordered_json err;
            err["kind"] = std::string(to_string(t.error->kind));
            err["message"] = t.error->message;
            err["suggestion"] = t.error->suggestion;
            if (t.error->cell) err["cell"] = t.error->cell->to_string();
            line["error"] = std::move(err);
        } else {
            line["error"] = nullptr;
        }
        out += line.dump();
        out += '\n';
    }
    return out;
}

}  // namespace cat
