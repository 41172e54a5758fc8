#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cat {

// ---------------------------------------------------------------------------
// Colours
// ---------------------------------------------------------------------------

enum class Color : std::uint8_t { yellow, red, green, blue };

inline constexpr std::array<Color, 4> kAllColors{Color::yellow, Color::red, Color::green,
                                                 Color::blue};

std::string_view to_string(Color c) noexcept;
std::optional<Color> parse_color(std::string_view name) noexcept;

/// Single-letter glyph used by text grids and compact board strings: y r g b.
char color_glyph(Color c) noexcept;
std::optional<Color> color_from_glyph(char glyph) noexcept;

// ---------------------------------------------------------------------------
// Coordinates
// ---------------------------------------------------------------------------

/// A syntactic grid coordinate. Rows run A (bottom) to F (top), columns 1 (left)
/// to 6 (right). A coordinate may lie inside the 6x6 grid yet outside the cross;
/// use is_valid_cell() for membership.
struct CellCoord {
    char row = 'A';
    int col = 1;

    friend constexpr auto operator<=>(const CellCoord&, const CellCoord&) = default;

    [[nodiscard]] std::string to_string() const;
    /// Parses "C3"-style tokens. Accepts any row A..F and column 1..6.
    static std::optional<CellCoord> parse(std::string_view token) noexcept;
};

inline constexpr int kGridSize = 6;
inline constexpr std::size_t kCellCount = 20;

/// Row letter and column fall inside the 6x6 grid (not necessarily the cross).
constexpr bool in_grid(CellCoord c) noexcept {
    return c.row >= 'A' && c.row <= 'F' && c.col >= 1 && c.col <= kGridSize;
}

/// Membership in the 2-thick cross: rows C and D plus columns 3 and 4.
constexpr bool is_valid_cell(CellCoord c) noexcept {
    return in_grid(c) && (c.row == 'C' || c.row == 'D' || c.col == 3 || c.col == 4);
}

/// The 20 cross cells in canonical order: row A..F, then column ascending.
const std::array<CellCoord, kCellCount>& all_cells() noexcept;

/// Position of a cross cell in canonical order.
std::optional<std::size_t> cell_index(CellCoord c) noexcept;

// ---------------------------------------------------------------------------
// Mirroring
// ---------------------------------------------------------------------------

/// horizontal reflects across the x-axis (rows A<->F, B<->E, C<->D);
/// vertical reflects across the y-axis (columns 1<->6, 2<->5, 3<->4).
enum class Axis : std::uint8_t { horizontal, vertical };

std::string_view to_string(Axis a) noexcept;
std::optional<Axis> parse_axis(std::string_view name) noexcept;

constexpr CellCoord mirror_coord(CellCoord c, Axis axis) noexcept {
    if (axis == Axis::horizontal) return {static_cast<char>('A' + 'F' - c.row), c.col};
    return {c.row, kGridSize + 1 - c.col};
}

// ---------------------------------------------------------------------------
// Board
// ---------------------------------------------------------------------------

class InvalidCellError : public std::out_of_range {
public:
    explicit InvalidCellError(CellCoord c);
    CellCoord cell;
};

/// The colouring state of the 20 cross cells. Accessing a coordinate outside
/// the cross throws InvalidCellError.
class CrossBoard {
public:
    CrossBoard() = default;

    [[nodiscard]] std::optional<Color> get(CellCoord c) const;
    void set(CellCoord c, Color color);
    void clear(CellCoord c);

    [[nodiscard]] bool is_coloured(CellCoord c) const { return get(c).has_value(); }
    [[nodiscard]] std::size_t coloured_count() const noexcept;
    [[nodiscard]] bool is_complete() const noexcept { return coloured_count() == kCellCount; }

    /// Uniformly coloured board.
    static CrossBoard filled(Color color);

    /// 20 glyphs in canonical order, '.' for uncoloured.
    [[nodiscard]] std::string to_compact() const;
    static std::optional<CrossBoard> from_compact(std::string_view compact);

    const std::array<std::optional<Color>, kCellCount>& cells() const noexcept { return cells_; }

    friend bool operator==(const CrossBoard&, const CrossBoard&) = default;

private:
    std::array<std::optional<Color>, kCellCount> cells_{};
};

/// Text grid with row F at the top; cells outside the cross are blank.
std::string render_grid(const CrossBoard& board);

// ---------------------------------------------------------------------------
// Schemas
// ---------------------------------------------------------------------------

/// A reference pattern. Reference boards are fully coloured.
struct Schema {
    std::string id;
    CrossBoard cells;
    std::optional<int> complexity_hint;

    friend bool operator==(const Schema&, const Schema&) = default;
};

}  // namespace cat
