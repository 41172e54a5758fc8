#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cat/board.hpp"
#include "cat/expected.hpp"

namespace cat {

// ---------------------------------------------------------------------------
// Directions and patterns
// ---------------------------------------------------------------------------

enum class Direction : std::uint8_t {
    up, down, left, right,                    // cardinal
    up_left, up_right, down_left, down_right  // diagonal
};

inline constexpr std::array<Direction, 8> kAllDirections{
    Direction::up,      Direction::down,     Direction::left,      Direction::right,
    Direction::up_left, Direction::up_right, Direction::down_left, Direction::down_right};

std::string_view to_string(Direction d) noexcept;
std::optional<Direction> parse_direction(std::string_view name) noexcept;

constexpr bool is_cardinal(Direction d) noexcept { return static_cast<int>(d) < 4; }
constexpr bool is_diagonal(Direction d) noexcept { return !is_cardinal(d); }

struct Step {
    int rows = 0;  // +1 = towards row F
    int cols = 0;  // +1 = towards column 6
};

Step step_of(Direction d) noexcept;
Direction opposite(Direction d) noexcept;
bool perpendicular(Direction a, Direction b) noexcept;
/// Direction seen in a mirror across the given axis.
Direction reflect(Direction d, Axis axis) noexcept;

constexpr CellCoord advance(CellCoord c, Step s) noexcept {
    return {static_cast<char>(c.row + s.rows), c.col + s.cols};
}

enum class PatternKind : std::uint8_t { cardinal, diagonal, square, l, zigzag };

std::string_view to_string(PatternKind k) noexcept;

/// A painting pattern. Only the first arity() entries of `moves` are used;
/// the rest are kept at a fixed filler value so equality stays structural.
struct PatternSpec {
    PatternKind kind = PatternKind::cardinal;
    std::array<Direction, 3> moves{Direction::up, Direction::up, Direction::up};

    static PatternSpec line(Direction d);
    static PatternSpec square(Direction first, Direction second, Direction third);
    static PatternSpec l(Direction first, Direction second);
    static PatternSpec zigzag(Direction first, Direction second);

    [[nodiscard]] std::size_t arity() const noexcept;
    /// Concrete token, e.g. "right", "square_right_up_left", "l_up_right".
    [[nodiscard]] std::string name() const;
    /// Fixed-size patterns (square, l) paint exactly this many cells.
    [[nodiscard]] std::optional<int> fixed_size() const noexcept;

    friend bool operator==(const PatternSpec&, const PatternSpec&) = default;
};

std::optional<PatternSpec> parse_pattern_name(std::string_view token);
/// Square: perpendicular cardinal second move, third move undoes the first.
/// L: two perpendicular cardinals. Zigzag: directions neither equal nor opposite.
bool has_valid_shape(const PatternSpec& p) noexcept;
PatternSpec reflect(const PatternSpec& p, Axis axis);

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct Command;

struct GoCell {
    CellCoord cell;
    friend bool operator==(const GoCell&, const GoCell&) = default;
};
struct Go {
    Direction move = Direction::up;
    int repetitions = 1;
    friend bool operator==(const Go&, const Go&) = default;
};
struct PaintSingleCell {
    Color color = Color::yellow;
    friend bool operator==(const PaintSingleCell&, const PaintSingleCell&) = default;
};
struct PaintPattern {
    std::vector<Color> colors;
    int repetitions = 1;
    PatternSpec pattern;
    friend bool operator==(const PaintPattern&, const PaintPattern&) = default;
};
struct PaintMultipleCells {
    std::vector<Color> colors;
    std::vector<CellCoord> cells;
    friend bool operator==(const PaintMultipleCells&, const PaintMultipleCells&) = default;
};
/// `color` is empty when the gesture interface fires fill without a selection.
struct FillEmpty {
    std::optional<Color> color;
    friend bool operator==(const FillEmpty&, const FillEmpty&) = default;
};
struct RepeatCommands {
    std::vector<Command> commands;
    std::vector<CellCoord> positions;
    friend bool operator==(const RepeatCommands&, const RepeatCommands&);
};
struct CopyCells {
    std::vector<CellCoord> origin;
    std::vector<CellCoord> destination;
    friend bool operator==(const CopyCells&, const CopyCells&) = default;
};
struct MirrorBoard {
    Axis axis = Axis::horizontal;
    friend bool operator==(const MirrorBoard&, const MirrorBoard&) = default;
};
struct MirrorCells {
    std::vector<CellCoord> cells;
    Axis axis = Axis::horizontal;
    friend bool operator==(const MirrorCells&, const MirrorCells&) = default;
};
struct MirrorCommands {
    std::vector<Command> commands;
    Axis axis = Axis::horizontal;
    friend bool operator==(const MirrorCommands&, const MirrorCommands&);
};

using CommandNode = std::variant<GoCell, Go, PaintSingleCell, PaintPattern, PaintMultipleCells,
                                 FillEmpty, RepeatCommands, CopyCells, MirrorBoard, MirrorCells,
                                 MirrorCommands>;

struct Command {
    CommandNode node;

    Command() = default;
    template <class T>
        requires(!std::is_same_v<std::remove_cvref_t<T>, Command> &&
                 std::is_constructible_v<CommandNode, T &&>)
    Command(T&& value) : node(std::forward<T>(value)) {}

    template <class T>
    [[nodiscard]] bool is() const noexcept { return std::holds_alternative<T>(node); }
    template <class T>
    [[nodiscard]] const T& as() const { return std::get<T>(node); }

    friend bool operator==(const Command&, const Command&) = default;
};

inline bool operator==(const RepeatCommands& a, const RepeatCommands& b) {
    return a.commands == b.commands && a.positions == b.positions;
}
inline bool operator==(const MirrorCommands& a, const MirrorCommands& b) {
    return a.commands == b.commands && a.axis == b.axis;
}

/// Keyword as written in source, e.g. "paintPattern".
std::string_view command_name(const Command& c) noexcept;
/// RepeatCommands and MirrorCommands.
bool is_composite(const Command& c) noexcept;

struct Program {
    std::vector<Command> commands;
    friend bool operator==(const Program&, const Program&) = default;
};

// ---------------------------------------------------------------------------
// Parsing and printing
// ---------------------------------------------------------------------------

enum class ParseErrorKind {
    syntax,
    unknown_command,
    unknown_direction,
    unknown_color,
    unknown_pattern,
    unknown_axis,
    arity_mismatch,
    malformed_list,
    empty_list,
    non_positive_repetitions,
    repetitions_too_large,
    invalid_coordinate,
    nested_composite,
};

std::string_view to_string(ParseErrorKind k) noexcept;

struct ParseError {
    ParseErrorKind kind = ParseErrorKind::syntax;
    std::size_t offset = 0;  // byte offset of the offending token
    int line = 1;
    int column = 1;
    std::string message;

    [[nodiscard]] std::string describe() const;
    friend bool operator==(const ParseError&, const ParseError&) = default;
};

inline constexpr int kMaxRepetitions = 10000;

/// Commands are separated by newlines or ';'. '#' starts a line comment.
Expected<Program, ParseError> parse_program(std::string_view text);
/// Exactly one command, no separators.
Expected<Command, ParseError> parse_command(std::string_view text);

/// Canonical single-line text: `name(arg,arg)`, lists as `{a,b}`, no spaces.
std::string format_command(const Command& c);
/// One canonical command per line, no trailing newline.
std::string format_program(const Program& p);

/// Argument names of a command form, in positional order.
std::vector<std::string_view> argument_names(const Command& c);
/// Canonical text of one named argument.
std::optional<std::string> argument_text(const Command& c, std::string_view property);
/// Replaces one named argument with new canonical text and re-validates.
Expected<Command, ParseError> modify_argument(const Command& c, std::string_view property,
                                              std::string_view new_value);

/// Reflects every coordinate and direction in the command across the axis.
Command reflect(const Command& c, Axis axis);

// ---------------------------------------------------------------------------
// Static validation
// ---------------------------------------------------------------------------

enum class DiagnosticKind {
    square_arity,      // square pattern with repetitions != 4
    l_arity,           // L pattern with repetitions != 4
    square_shape,      // second move not perpendicular or third not opposite of first
    l_shape,           // L moves not orthogonal cardinals
    zigzag_shape,      // zigzag moves equal or opposite
    length_mismatch,   // copyCells lists differ in length
    empty_command_list,
    empty_position_list,
    nested_composite,
};

std::string_view to_string(DiagnosticKind k) noexcept;

struct Diagnostic {
    DiagnosticKind kind;
    std::vector<std::size_t> path;  // command index, then nested index when inside a composite
    std::string message;
    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::vector<Diagnostic> validate_static(const Program& p);
std::vector<Diagnostic> validate_static(const Command& c);

}  // namespace cat
