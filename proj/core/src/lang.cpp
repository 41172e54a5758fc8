#include "cat/lang.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace cat {

// ---------------------------------------------------------------------------
// Directions
// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::string_view, 8> kDirectionNames{
    "up", "down", "left", "right", "up_left", "up_right", "down_left", "down_right"};

constexpr std::array<Step, 8> kSteps{{
    {1, 0}, {-1, 0}, {0, -1}, {0, 1}, {1, -1}, {1, 1}, {-1, -1}, {-1, 1},
}};

Direction from_step(Step s) {
    for (std::size_t i = 0; i < kSteps.size(); ++i)
        if (kSteps[i].rows == s.rows && kSteps[i].cols == s.cols) return static_cast<Direction>(i);
    return Direction::up;  // unreachable for unit steps
}

}  // namespace

std::string_view to_string(Direction d) noexcept { return kDirectionNames[static_cast<std::size_t>(d)]; }

std::optional<Direction> parse_direction(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kDirectionNames.size(); ++i)
        if (kDirectionNames[i] == name) return static_cast<Direction>(i);
    return std::nullopt;
}

Step step_of(Direction d) noexcept { return kSteps[static_cast<std::size_t>(d)]; }

Direction opposite(Direction d) noexcept {
    Step s = step_of(d);
    return from_step({-s.rows, -s.cols});
}

bool perpendicular(Direction a, Direction b) noexcept {
    Step x = step_of(a), y = step_of(b);
    return x.rows * y.rows + x.cols * y.cols == 0;
}

Direction reflect(Direction d, Axis axis) noexcept {
    Step s = step_of(d);
    if (axis == Axis::horizontal) return from_step({-s.rows, s.cols});
    return from_step({s.rows, -s.cols});
}

// ---------------------------------------------------------------------------
// Patterns
// ---------------------------------------------------------------------------

std::string_view to_string(PatternKind k) noexcept {
    switch (k) {
    case PatternKind::cardinal: return "cardinal";
    case PatternKind::diagonal: return "diagonal";
    case PatternKind::square: return "square";
    case PatternKind::l: return "l";
    case PatternKind::zigzag: return "zigzag";
    }
    return "?";
}

PatternSpec PatternSpec::line(Direction d) {
    PatternSpec p;
    p.kind = is_cardinal(d) ? PatternKind::cardinal : PatternKind::diagonal;
    p.moves[0] = d;
    return p;
}

PatternSpec PatternSpec::square(Direction first, Direction second, Direction third) {
    return {PatternKind::square, {first, second, third}};
}

PatternSpec PatternSpec::l(Direction first, Direction second) {
    return {PatternKind::l, {first, second, Direction::up}};
}

PatternSpec PatternSpec::zigzag(Direction first, Direction second) {
    return {PatternKind::zigzag, {first, second, Direction::up}};
}

std::size_t PatternSpec::arity() const noexcept {
    switch (kind) {
    case PatternKind::cardinal:
    case PatternKind::diagonal: return 1;
    case PatternKind::square: return 3;
    case PatternKind::l:
    case PatternKind::zigzag: return 2;
    }
    return 1;
}

std::string PatternSpec::name() const {
    std::string out;
    if (kind == PatternKind::square || kind == PatternKind::l || kind == PatternKind::zigzag)
        out = std::string(to_string(kind)) + "_";
    for (std::size_t i = 0; i < arity(); ++i) {
        if (i) out += '_';
        out += to_string(moves[i]);
    }
    return out;
}

std::optional<int> PatternSpec::fixed_size() const noexcept {
    if (kind == PatternKind::square || kind == PatternKind::l) return 4;
    return std::nullopt;
}

namespace {

std::vector<std::string_view> split_words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find('_', start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// All ways to read `words` as exactly `count` direction names. Compound names
// take two words ("up", "left" -> up_left).
void split_directions(const std::vector<std::string_view>& words, std::size_t at, std::size_t count,
                      std::vector<Direction>& current, std::vector<std::vector<Direction>>& found) {
    if (at == words.size()) {
        if (current.size() == count) found.push_back(current);
        return;
    }
    if (current.size() == count) return;
    if (auto d = parse_direction(words[at])) {
        current.push_back(*d);
        split_directions(words, at + 1, count, current, found);
        current.pop_back();
    }
    if (at + 1 < words.size()) {
        std::string joined = std::string(words[at]) + "_" + std::string(words[at + 1]);
        if (auto d = parse_direction(joined)) {
            current.push_back(*d);
            split_directions(words, at + 2, count, current, found);
            current.pop_back();
        }
    }
}

std::optional<std::vector<Direction>> unique_directions(const std::vector<std::string_view>& words,
                                                        std::size_t from, std::size_t count) {
    std::vector<std::string_view> rest(words.begin() + static_cast<std::ptrdiff_t>(from), words.end());
    std::vector<Direction> current;
    std::vector<std::vector<Direction>> found;
    split_directions(rest, 0, count, current, found);
    if (found.size() != 1) return std::nullopt;
    return found.front();
}

std::optional<std::vector<Direction>> cardinal_words(const std::vector<std::string_view>& words,
                                                     std::size_t count) {
    if (words.size() != count + 1) return std::nullopt;
    std::vector<Direction> out;
    for (std::size_t i = 1; i < words.size(); ++i) {
        auto d = parse_direction(words[i]);
        if (!d || !is_cardinal(*d)) return std::nullopt;
        out.push_back(*d);
    }
    return out;
}

}  // namespace

std::optional<PatternSpec> parse_pattern_name(std::string_view token) {
    if (auto d = parse_direction(token)) return PatternSpec::line(*d);
    auto words = split_words(token);
    if (words.size() < 2) return std::nullopt;
    if (words[0] == "square") {
        if (auto m = cardinal_words(words, 3)) return PatternSpec::square((*m)[0], (*m)[1], (*m)[2]);
    } else if (words[0] == "l") {
        if (auto m = cardinal_words(words, 2)) return PatternSpec::l((*m)[0], (*m)[1]);
    } else if (words[0] == "zigzag") {
        if (auto m = unique_directions(words, 1, 2)) return PatternSpec::zigzag((*m)[0], (*m)[1]);
    }
    return std::nullopt;
}

bool has_valid_shape(const PatternSpec& p) noexcept {
    const auto& m = p.moves;
    switch (p.kind) {
    case PatternKind::cardinal: return is_cardinal(m[0]);
    case PatternKind::diagonal: return is_diagonal(m[0]);
    case PatternKind::square:
        return is_cardinal(m[0]) && is_cardinal(m[1]) && perpendicular(m[0], m[1]) && m[2] == opposite(m[0]);
    case PatternKind::l: return is_cardinal(m[0]) && is_cardinal(m[1]) && perpendicular(m[0], m[1]);
    case PatternKind::zigzag: return m[0] != m[1] && m[1] != opposite(m[0]);
    }
    return false;
}

PatternSpec reflect(const PatternSpec& p, Axis axis) {
    PatternSpec out = p;
    for (std::size_t i = 0; i < p.arity(); ++i) out.moves[i] = reflect(p.moves[i], axis);
    return out;
}

// ---------------------------------------------------------------------------
// Command helpers
// ---------------------------------------------------------------------------

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

enum class Keyword {
    go_cell, go, paint_single, paint_pattern, paint_multiple, fill_empty,
    repeat, copy, mirror_board, mirror_cells, mirror_commands,
};

constexpr std::array<std::string_view, 11> kCommandNames{
    "goCell",    "go",             "paintSingleCell", "paintPattern", "paintMultipleCells", "fillEmpty",
    "repeatCommands", "copyCells", "mirrorBoard",     "mirrorCells",  "mirrorCommands"};

std::optional<Keyword> keyword_of(std::string_view name) {
    for (std::size_t i = 0; i < kCommandNames.size(); ++i)
        if (kCommandNames[i] == name) return static_cast<Keyword>(i);
    return std::nullopt;
}

}  // namespace

std::string_view command_name(const Command& c) noexcept { return kCommandNames[c.node.index()]; }

bool is_composite(const Command& c) noexcept {
    return c.is<RepeatCommands>() || c.is<MirrorCommands>();
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

std::string_view to_string(ParseErrorKind k) noexcept {
    switch (k) {
    case ParseErrorKind::syntax: return "syntax";
    case ParseErrorKind::unknown_command: return "unknown_command";
    case ParseErrorKind::unknown_direction: return "unknown_direction";
    case ParseErrorKind::unknown_color: return "unknown_color";
    case ParseErrorKind::unknown_pattern: return "unknown_pattern";
    case ParseErrorKind::unknown_axis: return "unknown_axis";
    case ParseErrorKind::arity_mismatch: return "arity_mismatch";
    case ParseErrorKind::malformed_list: return "malformed_list";
    case ParseErrorKind::empty_list: return "empty_list";
    case ParseErrorKind::non_positive_repetitions: return "non_positive_repetitions";
    case ParseErrorKind::repetitions_too_large: return "repetitions_too_large";
    case ParseErrorKind::invalid_coordinate: return "invalid_coordinate";
    case ParseErrorKind::nested_composite: return "nested_composite";
    }
    return "?";
}

std::string ParseError::describe() const {
    std::ostringstream out;
    out << line << ':' << column << ": " << message;
    return out.str();
}

namespace {

enum class Tok { ident, integer, lparen, rparen, lbrace, rbrace, comma, separator, end };

struct Token {
    Tok kind;
    std::string_view text;
    std::size_t offset;
};

std::string_view describe(const Token& t) {
    switch (t.kind) {
    case Tok::separator: return "end of statement";
    case Tok::end: return "end of input";
    default: return t.text;
    }
}

class Parser {
public:
    explicit Parser(std::string_view source) : src_(source) {}

    Expected<Program, ParseError> program() {
        if (auto err = lex()) return Unexpected{*err};
        Program p;
        while (true) {
            while (peek().kind == Tok::separator) ++pos_;
            if (peek().kind == Tok::end) break;
            auto cmd = command(false);
            if (!cmd) return Unexpected{cmd.error()};
            p.commands.push_back(std::move(*cmd));
            const Token& t = peek();
            if (t.kind != Tok::separator && t.kind != Tok::end)
                return fail(ParseErrorKind::syntax, t,
                            "expected newline or ';' after command, found '" + std::string(describe(t)) + "'");
        }
        return p;
    }

    Expected<Command, ParseError> single() {
        if (auto err = lex()) return Unexpected{*err};
        if (peek().kind == Tok::end) return fail(ParseErrorKind::syntax, peek(), "expected a command");
        auto cmd = command(false);
        if (!cmd) return cmd;
        if (peek().kind != Tok::end)
            return fail(ParseErrorKind::syntax, peek(),
                        "unexpected '" + std::string(describe(peek())) + "' after command");
        return cmd;
    }

private:
    std::string_view src_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    ParseError error_at(ParseErrorKind kind, std::size_t offset, std::string message) const {
        ParseError e{kind, offset, 1, 1, std::move(message)};
        for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
            if (src_[i] == '\n') {
                ++e.line;
                e.column = 1;
            } else {
                ++e.column;
            }
        }
        return e;
    }

    Unexpected<ParseError> fail(ParseErrorKind kind, const Token& t, std::string message) const {
        return Unexpected{error_at(kind, t.offset, std::move(message))};
    }

    std::optional<ParseError> lex() {
        int depth = 0;
        std::size_t i = 0;
        auto is_ident_start = [](char c) {
            return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
        };
        auto is_ident = [&](char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); };
        auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
        while (i < src_.size()) {
            char c = src_[i];
            if (c == ' ' || c == '\t' || c == '\r') {
                ++i;
            } else if (c == '#') {
                while (i < src_.size() && src_[i] != '\n') ++i;
            } else if (c == '\n' || c == ';') {
                if (depth == 0) toks_.push_back({Tok::separator, src_.substr(i, 1), i});
                else if (c == ';')
                    return error_at(ParseErrorKind::syntax, i, "';' inside an argument list");
                ++i;
            } else if (is_ident_start(c)) {
                std::size_t start = i;
                while (i < src_.size() && is_ident(src_[i])) ++i;
                toks_.push_back({Tok::ident, src_.substr(start, i - start), start});
            } else if (is_digit(c) || (c == '-' && i + 1 < src_.size() && is_digit(src_[i + 1]))) {
                std::size_t start = i++;
                while (i < src_.size() && is_ident(src_[i])) ++i;
                toks_.push_back({Tok::integer, src_.substr(start, i - start), start});
            } else {
                Tok kind;
                switch (c) {
                case '(': kind = Tok::lparen; ++depth; break;
                case ')': kind = Tok::rparen; depth = std::max(0, depth - 1); break;
                case '{': kind = Tok::lbrace; ++depth; break;
                case '}': kind = Tok::rbrace; depth = std::max(0, depth - 1); break;
                case ',': kind = Tok::comma; break;
                default: {
                    std::string shown = (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f)
                                            ? "byte 0x" + to_hex(static_cast<unsigned char>(c))
                                            : "'" + std::string(1, c) + "'";
                    return error_at(ParseErrorKind::syntax, i, "unexpected character " + shown);
                }
                }
                toks_.push_back({kind, src_.substr(i, 1), i});
                ++i;
            }
        }
        toks_.push_back({Tok::end, {}, src_.size()});
        return std::nullopt;
    }

    static std::string to_hex(unsigned char b) {
        constexpr char digits[] = "0123456789abcdef";
        return {digits[b >> 4], digits[b & 0xf]};
    }

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (t.kind != Tok::end) ++pos_;
        return t;
    }

    std::optional<ParseError> expect(Tok kind, std::string_view what) {
        const Token& t = peek();
        if (t.kind != kind)
            return error_at(ParseErrorKind::syntax, t.offset,
                            "expected " + std::string(what) + ", found '" + std::string(describe(t)) + "'");
        ++pos_;
        return std::nullopt;
    }

    // Between positional arguments.
    std::optional<ParseError> separator(std::string_view name, int arity) {
        const Token& t = peek();
        if (t.kind == Tok::rparen)
            return error_at(ParseErrorKind::arity_mismatch, t.offset, arity_message(name, arity));
        return expect(Tok::comma, "','");
    }

    std::optional<ParseError> close(std::string_view name, int arity) {
        const Token& t = peek();
        if (t.kind == Tok::comma)
            return error_at(ParseErrorKind::arity_mismatch, t.offset, arity_message(name, arity));
        return expect(Tok::rparen, "')'");
    }

    static std::string arity_message(std::string_view name, int arity) {
        return std::string(name) + " expects " + std::to_string(arity) + " argument" + (arity == 1 ? "" : "s");
    }

    template <class T, class Lookup>
    Expected<T, ParseError> word(ParseErrorKind kind, std::string_view what, Lookup lookup) {
        const Token& t = peek();
        if (t.kind != Tok::ident)
            return fail(t.kind == Tok::integer ? kind : ParseErrorKind::syntax, t,
                        "expected " + std::string(what) + ", found '" + std::string(describe(t)) + "'");
        auto v = lookup(t.text);
        if (!v) return fail(kind, t, "unknown " + std::string(what) + " '" + std::string(t.text) + "'");
        ++pos_;
        return *v;
    }

    Expected<Direction, ParseError> direction() {
        return word<Direction>(ParseErrorKind::unknown_direction, "direction",
                               [](std::string_view s) { return parse_direction(s); });
    }
    Expected<Color, ParseError> color() {
        return word<Color>(ParseErrorKind::unknown_color, "colour",
                           [](std::string_view s) { return parse_color(s); });
    }
    Expected<Axis, ParseError> axis() {
        return word<Axis>(ParseErrorKind::unknown_axis, "mirror direction",
                          [](std::string_view s) { return parse_axis(s); });
    }
    Expected<PatternSpec, ParseError> pattern() {
        return word<PatternSpec>(ParseErrorKind::unknown_pattern, "pattern",
                                 [](std::string_view s) { return parse_pattern_name(s); });
    }
    Expected<CellCoord, ParseError> coord() {
        return word<CellCoord>(ParseErrorKind::invalid_coordinate, "coordinate",
                               [](std::string_view s) { return CellCoord::parse(s); });
    }

    Expected<int, ParseError> repetitions() {
        const Token& t = peek();
        if (t.kind != Tok::integer)
            return fail(ParseErrorKind::syntax, t, "expected a repetition count, found '" + std::string(describe(t)) + "'");
        long long value = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ptr != t.text.data() + t.text.size() && ec == std::errc{})
            return fail(ParseErrorKind::syntax, t, "malformed number '" + std::string(t.text) + "'");
        if (ec == std::errc::result_out_of_range || (ec == std::errc{} && value > kMaxRepetitions)) {
            if (!t.text.empty() && t.text[0] == '-')
                return fail(ParseErrorKind::non_positive_repetitions, t, "repetitions must be at least 1");
            return fail(ParseErrorKind::repetitions_too_large, t,
                        "repetitions must be at most " + std::to_string(kMaxRepetitions));
        }
        if (ec != std::errc{}) return fail(ParseErrorKind::syntax, t, "malformed number '" + std::string(t.text) + "'");
        if (value < 1) return fail(ParseErrorKind::non_positive_repetitions, t, "repetitions must be at least 1");
        ++pos_;
        return static_cast<int>(value);
    }

    template <class T, class Item>
    Expected<std::vector<T>, ParseError> list(std::string_view what, bool allow_empty, Item item) {
        const Token& open = peek();
        if (open.kind != Tok::lbrace)
            return fail(ParseErrorKind::malformed_list, open,
                        "expected '{' to start a list of " + std::string(what));
        ++pos_;
        std::vector<T> out;
        if (peek().kind == Tok::rbrace) {
            if (!allow_empty)
                return fail(ParseErrorKind::empty_list, open, "list of " + std::string(what) + " must not be empty");
            ++pos_;
            return out;
        }
        while (true) {
            if (peek().kind == Tok::lbrace || peek().kind == Tok::rbrace)
                return fail(ParseErrorKind::malformed_list, peek(),
                            "expected one of the " + std::string(what) + ", found '" + std::string(describe(peek())) + "'");
            auto v = item();
            if (!v) return Unexpected{v.error()};
            out.push_back(std::move(*v));
            const Token& t = peek();
            if (t.kind == Tok::comma) {
                ++pos_;
                continue;
            }
            if (t.kind == Tok::rbrace) {
                ++pos_;
                return out;
            }
            return fail(ParseErrorKind::malformed_list, t,
                        "expected ',' or '}' in list of " + std::string(what) + ", found '" +
                            std::string(describe(t)) + "'");
        }
    }

    Expected<std::vector<Color>, ParseError> colors(bool allow_empty = false) {
        return list<Color>("colours", allow_empty, [this] { return color(); });
    }
    Expected<std::vector<CellCoord>, ParseError> cells(bool allow_empty) {
        return list<CellCoord>("coordinates", allow_empty, [this] { return coord(); });
    }
    Expected<std::vector<Command>, ParseError> commands() {
        return list<Command>("commands", true, [this] { return command(true); });
    }

#define CAT_TRY(var, expr)                        \
    auto var = (expr);                            \
    if (!var) return Unexpected{var.error()}
#define CAT_CHECK(expr)                           \
    if (auto err_ = (expr)) return Unexpected{*err_}

    Expected<Command, ParseError> command(bool nested) {
        const Token& name_tok = peek();
        if (name_tok.kind != Tok::ident)
            return fail(ParseErrorKind::syntax, name_tok,
                        "expected a command name, found '" + std::string(describe(name_tok)) + "'");
        auto kw = keyword_of(name_tok.text);
        if (!kw) return fail(ParseErrorKind::unknown_command, name_tok, "unknown command '" + std::string(name_tok.text) + "'");
        if (nested && (*kw == Keyword::repeat || *kw == Keyword::mirror_commands))
            return fail(ParseErrorKind::nested_composite, name_tok,
                        std::string(name_tok.text) + " cannot appear inside another command list");
        ++pos_;
        CAT_CHECK(expect(Tok::lparen, "'('"));
        std::string_view name = name_tok.text;

        switch (*kw) {
        case Keyword::go_cell: {
            CAT_TRY(c, coord());
            CAT_CHECK(close(name, 1));
            return Command{GoCell{*c}};
        }
        case Keyword::go: {
            CAT_TRY(d, direction());
            CAT_CHECK(separator(name, 2));
            CAT_TRY(n, repetitions());
            CAT_CHECK(close(name, 2));
            return Command{Go{*d, *n}};
        }
        case Keyword::paint_single: {
            CAT_TRY(c, color());
            CAT_CHECK(close(name, 1));
            return Command{PaintSingleCell{*c}};
        }
        case Keyword::paint_pattern: {
            CAT_TRY(cs, colors());
            CAT_CHECK(separator(name, 3));
            CAT_TRY(n, repetitions());
            CAT_CHECK(separator(name, 3));
            CAT_TRY(p, pattern());
            CAT_CHECK(close(name, 3));
            return Command{PaintPattern{std::move(*cs), *n, *p}};
        }
        case Keyword::paint_multiple: {
            CAT_TRY(cs, colors());
            CAT_CHECK(separator(name, 2));
            CAT_TRY(cells_, cells(false));
            CAT_CHECK(close(name, 2));
            return Command{PaintMultipleCells{std::move(*cs), std::move(*cells_)}};
        }
        case Keyword::fill_empty: {
            if (peek().kind == Tok::rparen) {
                ++pos_;
                return Command{FillEmpty{}};
            }
            CAT_TRY(c, color());
            CAT_CHECK(close(name, 1));
            return Command{FillEmpty{*c}};
        }
        case Keyword::repeat: {
            CAT_TRY(body, commands());
            CAT_CHECK(separator(name, 2));
            CAT_TRY(positions, cells(true));
            CAT_CHECK(close(name, 2));
            return Command{RepeatCommands{std::move(*body), std::move(*positions)}};
        }
        case Keyword::copy: {
            CAT_TRY(origin, cells(true));
            CAT_CHECK(separator(name, 2));
            CAT_TRY(destination, cells(true));
            CAT_CHECK(close(name, 2));
            return Command{CopyCells{std::move(*origin), std::move(*destination)}};
        }
        case Keyword::mirror_board: {
            CAT_TRY(a, axis());
            CAT_CHECK(close(name, 1));
            return Command{MirrorBoard{*a}};
        }
        case Keyword::mirror_cells: {
            CAT_TRY(cs, cells(true));
            CAT_CHECK(separator(name, 2));
            CAT_TRY(a, axis());
            CAT_CHECK(close(name, 2));
            return Command{MirrorCells{std::move(*cs), *a}};
        }
        case Keyword::mirror_commands: {
            CAT_TRY(body, commands());
            CAT_CHECK(separator(name, 2));
            CAT_TRY(a, axis());
            CAT_CHECK(close(name, 2));
            return Command{MirrorCommands{std::move(*body), *a}};
        }
        }
        return fail(ParseErrorKind::unknown_command, name_tok, "unknown command");
    }

#undef CAT_TRY
#undef CAT_CHECK
};

}  // namespace

Expected<Program, ParseError> parse_program(std::string_view text) { return Parser(text).program(); }

Expected<Command, ParseError> parse_command(std::string_view text) { return Parser(text).single(); }

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

template <class T, class F>
std::string join_list(const std::vector<T>& items, F&& render) {
    std::string out = "{";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += render(items[i]);
    }
    return out + "}";
}

std::string cells_text(const std::vector<CellCoord>& cells) {
    return join_list(cells, [](CellCoord c) { return c.to_string(); });
}
std::string colors_text(const std::vector<Color>& colors) {
    return join_list(colors, [](Color c) { return std::string(to_string(c)); });
}
std::string commands_text(const std::vector<Command>& cmds) {
    return join_list(cmds, [](const Command& c) { return format_command(c); });
}

std::vector<std::string> argument_texts(const Command& c) {
    return std::visit(
        overloaded{
            [](const GoCell& g) -> std::vector<std::string> { return {g.cell.to_string()}; },
            [](const Go& g) -> std::vector<std::string> {
                return {std::string(to_string(g.move)), std::to_string(g.repetitions)};
            },
            [](const PaintSingleCell& p) -> std::vector<std::string> { return {std::string(to_string(p.color))}; },
            [](const PaintPattern& p) -> std::vector<std::string> {
                return {colors_text(p.colors), std::to_string(p.repetitions), p.pattern.name()};
            },
            [](const PaintMultipleCells& p) -> std::vector<std::string> {
                return {colors_text(p.colors), cells_text(p.cells)};
            },
            [](const FillEmpty& f) -> std::vector<std::string> {
                if (!f.color) return {};
                return {std::string(to_string(*f.color))};
            },
            [](const RepeatCommands& r) -> std::vector<std::string> {
                return {commands_text(r.commands), cells_text(r.positions)};
            },
            [](const CopyCells& cp) -> std::vector<std::string> {
                return {cells_text(cp.origin), cells_text(cp.destination)};
            },
            [](const MirrorBoard& m) -> std::vector<std::string> { return {std::string(to_string(m.axis))}; },
            [](const MirrorCells& m) -> std::vector<std::string> {
                return {cells_text(m.cells), std::string(to_string(m.axis))};
            },
            [](const MirrorCommands& m) -> std::vector<std::string> {
                return {commands_text(m.commands), std::string(to_string(m.axis))};
            },
        },
        c.node);
}

}  // namespace

std::string format_command(const Command& c) {
    std::string out(command_name(c));
    out += '(';
    auto args = argument_texts(c);
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ',';
        out += args[i];
    }
    return out + ')';
}

std::string format_program(const Program& p) {
    std::string out;
    for (std::size_t i = 0; i < p.commands.size(); ++i) {
        if (i) out += '\n';
        out += format_command(p.commands[i]);
    }
    return out;
}

std::vector<std::string_view> argument_names(const Command& c) {
    switch (static_cast<Keyword>(c.node.index())) {
    case Keyword::go_cell: return {"cell"};
    case Keyword::go: return {"direction", "repetitions"};
    case Keyword::paint_single: return {"color"};
    case Keyword::paint_pattern: return {"colors", "repetitions", "pattern"};
    case Keyword::paint_multiple: return {"colors", "cells"};
    case Keyword::fill_empty: return {"color"};
    case Keyword::repeat: return {"commands", "positions"};
    case Keyword::copy: return {"origin", "destination"};
    case Keyword::mirror_board: return {"direction"};
    case Keyword::mirror_cells: return {"cells", "direction"};
    case Keyword::mirror_commands: return {"commands", "direction"};
    }
    return {};
}

std::optional<std::string> argument_text(const Command& c, std::string_view property) {
    auto names = argument_names(c);
    auto args = argument_texts(c);
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == property) return i < args.size() ? args[i] : std::string{};
    return std::nullopt;
}

Expected<Command, ParseError> modify_argument(const Command& c, std::string_view property,
                                              std::string_view new_value) {
    auto names = argument_names(c);
    auto args = argument_texts(c);
    args.resize(names.size());  // fillEmpty() has an implicit empty colour slot
    auto it = std::find(names.begin(), names.end(), property);
    if (it == names.end())
        return Unexpected{ParseError{ParseErrorKind::arity_mismatch, 0, 1, 1,
                                     std::string(command_name(c)) + " has no property '" + std::string(property) + "'"}};
    args[static_cast<std::size_t>(it - names.begin())] = std::string(new_value);
    std::string text(command_name(c));
    text += '(';
    bool trailing_empty = args.size() == 1 && args[0].empty();
    if (!trailing_empty)
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i) text += ',';
            text += args[i];
        }
    text += ')';
    return parse_command(text);
}

// ---------------------------------------------------------------------------
// Reflection
// ---------------------------------------------------------------------------

namespace {

std::vector<CellCoord> reflect_cells(const std::vector<CellCoord>& cells, Axis axis) {
    std::vector<CellCoord> out;
    out.reserve(cells.size());
    for (auto c : cells) out.push_back(mirror_coord(c, axis));
    return out;
}

std::vector<Command> reflect_commands(const std::vector<Command>& cmds, Axis axis) {
    std::vector<Command> out;
    out.reserve(cmds.size());
    for (const auto& c : cmds) out.push_back(reflect(c, axis));
    return out;
}

}  // namespace

Command reflect(const Command& c, Axis axis) {
    return std::visit(
        overloaded{
            [&](const GoCell& g) -> Command { return GoCell{mirror_coord(g.cell, axis)}; },
            [&](const Go& g) -> Command { return Go{reflect(g.move, axis), g.repetitions}; },
            [&](const PaintSingleCell& p) -> Command { return p; },
            [&](const PaintPattern& p) -> Command {
                return PaintPattern{p.colors, p.repetitions, reflect(p.pattern, axis)};
            },
            [&](const PaintMultipleCells& p) -> Command {
                return PaintMultipleCells{p.colors, reflect_cells(p.cells, axis)};
            },
            [&](const FillEmpty& f) -> Command { return f; },
            [&](const RepeatCommands& r) -> Command {
                return RepeatCommands{reflect_commands(r.commands, axis), reflect_cells(r.positions, axis)};
            },
            [&](const CopyCells& cp) -> Command {
                return CopyCells{reflect_cells(cp.origin, axis), reflect_cells(cp.destination, axis)};
            },
            [&](const MirrorBoard& m) -> Command { return m; },
            [&](const MirrorCells& m) -> Command { return MirrorCells{reflect_cells(m.cells, axis), m.axis}; },
            [&](const MirrorCommands& m) -> Command {
                return MirrorCommands{reflect_commands(m.commands, axis), m.axis};
            },
        },
        c.node);
}

// ---------------------------------------------------------------------------
// Static validation
// ---------------------------------------------------------------------------

std::string_view to_string(DiagnosticKind k) noexcept {
    switch (k) {
    case DiagnosticKind::square_arity: return "square_arity";
    case DiagnosticKind::l_arity: return "l_arity";
    case DiagnosticKind::square_shape: return "square_shape";
    case DiagnosticKind::l_shape: return "l_shape";
    case DiagnosticKind::zigzag_shape: return "zigzag_shape";
    case DiagnosticKind::length_mismatch: return "length_mismatch";
    case DiagnosticKind::empty_command_list: return "empty_command_list";
    case DiagnosticKind::empty_position_list: return "empty_position_list";
    case DiagnosticKind::nested_composite: return "nested_composite";
    }
    return "?";
}

namespace {

void check(const Command& c, std::vector<std::size_t>& path, bool nested, std::vector<Diagnostic>& out) {
    auto emit = [&](DiagnosticKind kind, std::string message) { out.push_back({kind, path, std::move(message)}); };

    if (nested && is_composite(c))
        emit(DiagnosticKind::nested_composite,
             std::string(command_name(c)) + " cannot appear inside another command list");

    if (const auto* p = std::get_if<PaintPattern>(&c.node)) {
        switch (p->pattern.kind) {
        case PatternKind::square:
            if (p->repetitions != 4)
                emit(DiagnosticKind::square_arity,
                     "square pattern paints exactly 4 cells (expected 4, got " + std::to_string(p->repetitions) + ")");
            if (!has_valid_shape(p->pattern))
                emit(DiagnosticKind::square_shape, "'" + p->pattern.name() + "' does not trace a 2x2 square");
            break;
        case PatternKind::l:
            if (p->repetitions != 4)
                emit(DiagnosticKind::l_arity,
                     "L pattern paints exactly 4 cells (expected 4, got " + std::to_string(p->repetitions) + ")");
            if (!has_valid_shape(p->pattern))
                emit(DiagnosticKind::l_shape, "'" + p->pattern.name() + "' needs two perpendicular cardinal moves");
            break;
        case PatternKind::zigzag:
            if (!has_valid_shape(p->pattern))
                emit(DiagnosticKind::zigzag_shape,
                     "'" + p->pattern.name() + "' needs two directions that are neither equal nor opposite");
            break;
        default: break;
        }
    } else if (const auto* cp = std::get_if<CopyCells>(&c.node)) {
        if (cp->origin.size() != cp->destination.size())
            emit(DiagnosticKind::length_mismatch, "copyCells lists differ in length (" +
                                                      std::to_string(cp->origin.size()) + " vs " +
                                                      std::to_string(cp->destination.size()) + ")");
    } else if (const auto* r = std::get_if<RepeatCommands>(&c.node)) {
        if (r->commands.empty()) emit(DiagnosticKind::empty_command_list, "repeatCommands has no commands");
        if (r->positions.empty()) emit(DiagnosticKind::empty_position_list, "repeatCommands has no positions");
    } else if (const auto* mc = std::get_if<MirrorCommands>(&c.node)) {
        if (mc->commands.empty()) emit(DiagnosticKind::empty_command_list, "mirrorCommands has no commands");
    }

    const std::vector<Command>* body = nullptr;
    if (const auto* r = std::get_if<RepeatCommands>(&c.node)) body = &r->commands;
    if (const auto* mc = std::get_if<MirrorCommands>(&c.node)) body = &mc->commands;
    if (body) {
        for (std::size_t i = 0; i < body->size(); ++i) {
            path.push_back(i);
            check((*body)[i], path, true, out);
            path.pop_back();
        }
    }
}

}  // namespace

std::vector<Diagnostic> validate_static(const Command& c) {
    std::vector<Diagnostic> out;
    std::vector<std::size_t> path{0};
    check(c, path, false, out);
    return out;
}

std::vector<Diagnostic> validate_static(const Program& p) {
    std::vector<Diagnostic> out;
    for (std::size_t i = 0; i < p.commands.size(); ++i) {
        std::vector<std::size_t> path{i};
        check(p.commands[i], path, false, out);
    }
    return out;
}

}  // namespace cat
