#include "cat/board.hpp"

#include <algorithm>
#include <sstream>

namespace cat {

namespace {

constexpr std::array<std::string_view, 4> kColorNames{"yellow", "red", "green", "blue"};
constexpr std::array<char, 4> kColorGlyphs{'y', 'r', 'g', 'b'};

constexpr std::array<CellCoord, kCellCount> make_cells() {
    std::array<CellCoord, kCellCount> out{};
    std::size_t n = 0;
    for (char row = 'A'; row <= 'F'; ++row)
        for (int col = 1; col <= kGridSize; ++col)
            if (is_valid_cell({row, col})) out[n++] = {row, col};
    return out;
}

constexpr std::array<CellCoord, kCellCount> kCells = make_cells();

}  // namespace

std::string_view to_string(Color c) noexcept { return kColorNames[static_cast<std::size_t>(c)]; }

std::optional<Color> parse_color(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kColorNames.size(); ++i)
        if (kColorNames[i] == name) return static_cast<Color>(i);
    return std::nullopt;
}

char color_glyph(Color c) noexcept { return kColorGlyphs[static_cast<std::size_t>(c)]; }

std::optional<Color> color_from_glyph(char glyph) noexcept {
    for (std::size_t i = 0; i < kColorGlyphs.size(); ++i)
        if (kColorGlyphs[i] == glyph) return static_cast<Color>(i);
    return std::nullopt;
}

std::string CellCoord::to_string() const {
    std::string out;
    out += row;
    out += std::to_string(col);
    return out;
}

std::optional<CellCoord> CellCoord::parse(std::string_view token) noexcept {
    if (token.size() != 2) return std::nullopt;
    CellCoord c{token[0], token[1] - '0'};
    if (!in_grid(c)) return std::nullopt;
    return c;
}

const std::array<CellCoord, kCellCount>& all_cells() noexcept { return kCells; }

std::optional<std::size_t> cell_index(CellCoord c) noexcept {
    if (!is_valid_cell(c)) return std::nullopt;
    auto it = std::lower_bound(kCells.begin(), kCells.end(), c);
    return static_cast<std::size_t>(it - kCells.begin());
}

std::string_view to_string(Axis a) noexcept {
    return a == Axis::horizontal ? "horizontal" : "vertical";
}

std::optional<Axis> parse_axis(std::string_view name) noexcept {
    if (name == "horizontal") return Axis::horizontal;
    if (name == "vertical") return Axis::vertical;
    return std::nullopt;
}

InvalidCellError::InvalidCellError(CellCoord c)
    : std::out_of_range("cell " + c.to_string() + " is not part of the cross"), cell(c) {}

std::optional<Color> CrossBoard::get(CellCoord c) const {
    auto idx = cell_index(c);
    if (!idx) throw InvalidCellError(c);
    return cells_[*idx];
}

void CrossBoard::set(CellCoord c, Color color) {
    auto idx = cell_index(c);
    if (!idx) throw InvalidCellError(c);
    cells_[*idx] = color;
}

void CrossBoard::clear(CellCoord c) {
    auto idx = cell_index(c);
    if (!idx) throw InvalidCellError(c);
    cells_[*idx].reset();
}

std::size_t CrossBoard::coloured_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(cells_.begin(), cells_.end(), [](const auto& c) { return c.has_value(); }));
}

CrossBoard CrossBoard::filled(Color color) {
    CrossBoard b;
    b.cells_.fill(color);
    return b;
}

std::string CrossBoard::to_compact() const {
    std::string out(kCellCount, '.');
    for (std::size_t i = 0; i < kCellCount; ++i)
        if (cells_[i]) out[i] = color_glyph(*cells_[i]);
    return out;
}

std::optional<CrossBoard> CrossBoard::from_compact(std::string_view compact) {
    if (compact.size() != kCellCount) return std::nullopt;
    CrossBoard b;
    for (std::size_t i = 0; i < kCellCount; ++i) {
        if (compact[i] == '.') continue;
        auto c = color_from_glyph(compact[i]);
        if (!c) return std::nullopt;
        b.cells_[i] = *c;
    }
    return b;
}

std::string render_grid(const CrossBoard& board) {
    std::ostringstream out;
    out << "  1 2 3 4 5 6\n";
    for (char row = 'F'; row >= 'A'; --row) {
        std::string line(1, row);
        for (int col = 1; col <= kGridSize; ++col) {
            line += ' ';
            CellCoord c{row, col};
            if (!is_valid_cell(c)) {
                line += ' ';
                continue;
            }
            auto color = board.get(c);
            line += color ? color_glyph(*color) : '.';
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    }
    return out.str();
}

}  // namespace cat
