#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cat/board.hpp"
#include "cat/lang.hpp"

namespace cat {

enum class ExecErrorKind { out_of_board, no_position, pattern_overflow, invalid_pattern, length_mismatch, no_color };

/// Upper-case wire name, e.g. "OUT_OF_BOARD".
std::string_view to_string(ExecErrorKind k) noexcept;

struct ExecError {
    ExecErrorKind kind = ExecErrorKind::out_of_board;
    std::size_t command_index = 0;
    std::string command;  // canonical text of the failing top-level command
    std::string message;
    std::string suggestion;
    std::optional<CellCoord> cell;  // offending cell, when there is one

    friend bool operator==(const ExecError&, const ExecError&) = default;
};

struct TraceEntry {
    std::size_t index = 0;
    std::string command;
    std::vector<CellCoord> changed;  // cells whose colour changed, canonical order
    std::optional<ExecError> error;

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct ExecState {
    CrossBoard board;
    std::optional<CellCoord> cursor;
    std::size_t executed = 0;
    std::vector<TraceEntry> trace;

    friend bool operator==(const ExecState&, const ExecState&) = default;
};

/// nullopt on success. A failing operation leaves the state untouched.
using ExecStatus = std::optional<ExecError>;

// Individual operations. They neither bump `executed` nor append to `trace`;
// execute() and run_program() do that.
ExecStatus exec_go_cell(ExecState& s, CellCoord cell);
ExecStatus exec_go(ExecState& s, Direction move, int repetitions);
ExecStatus exec_paint_single(ExecState& s, Color color);
ExecStatus exec_paint_pattern(ExecState& s, const std::vector<Color>& colors, int repetitions,
                              const PatternSpec& pattern);
ExecStatus exec_paint_multiple(ExecState& s, const std::vector<Color>& colors,
                               const std::vector<CellCoord>& cells);
ExecStatus exec_fill_empty(ExecState& s, std::optional<Color> color);
ExecStatus exec_repeat(ExecState& s, const std::vector<Command>& commands,
                       const std::vector<CellCoord>& positions);
ExecStatus exec_copy(ExecState& s, const std::vector<CellCoord>& origin,
                     const std::vector<CellCoord>& destination);
ExecStatus exec_mirror_board(ExecState& s, Axis axis);
ExecStatus exec_mirror_cells(ExecState& s, const std::vector<CellCoord>& cells, Axis axis);
ExecStatus exec_mirror_commands(ExecState& s, const std::vector<Command>& commands, Axis axis);

/// Dispatches one command without touching `executed` or `trace`.
ExecStatus apply_command(ExecState& s, const Command& c);

/// The cell sequence a pattern visits from `start`, including cells outside
/// the cross. Fixed-size patterns always yield their 4 cells.
std::vector<CellCoord> pattern_path(CellCoord start, const PatternSpec& pattern, int repetitions);

/// Executes one top-level command: on success bumps `executed` and appends a
/// trace entry; on failure appends the failing entry and leaves the rest of
/// the state as it was.
ExecStatus execute(ExecState& s, const Command& c);

struct RunOptions {
    /// Called after every command, in execution order, including the failing one.
    std::function<void(const TraceEntry&)> on_step;
};

struct RunResult {
    ExecState state;
    std::optional<ExecError> error;
    [[nodiscard]] bool ok() const noexcept { return !error.has_value(); }
};

/// Runs commands in order and halts at the first error.
RunResult run_program(const Program& program, const CrossBoard& initial = {}, const RunOptions& options = {});
RunResult run_program(const Program& program, ExecState initial, const RunOptions& options = {});

/// One JSON object per line: {"index","command","changed","error"}.
std::string trace_to_jsonl(const std::vector<TraceEntry>& trace);

}  // namespace cat
