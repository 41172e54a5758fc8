#include "oracle.hpp"

namespace oracle {

bool on_cross(Pos p) {
    if (p.row < 0 || p.row > 5 || p.col < 0 || p.col > 5) return false;
    return p.row == 2 || p.row == 3 || p.col == 2 || p.col == 3;
}

std::string name(Pos p) {
    std::string s;
    s += static_cast<char>('A' + p.row);
    s += std::to_string(p.col + 1);
    return s;
}

std::optional<Pos> parse(std::string_view t) {
    if (t.size() != 2 || t[0] < 'A' || t[0] > 'F' || t[1] < '1' || t[1] > '6') return std::nullopt;
    return Pos{t[0] - 'A', t[1] - '1'};
}

std::vector<Pos> cross() {
    std::vector<Pos> out;
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c)
            if (on_cross({r, c})) out.push_back({r, c});
    return out;
}

Delta delta(std::string_view d) {
    static const std::map<std::string, Delta, std::less<>> table{
        {"up", {1, 0}},       {"down", {-1, 0}},      {"left", {0, -1}},     {"right", {0, 1}},
        {"up_left", {1, -1}}, {"up_right", {1, 1}}, {"down_left", {-1, -1}}, {"down_right", {-1, 1}},
    };
    return table.find(d)->second;
}

const std::vector<std::string>& cardinals() {
    static const std::vector<std::string> v{"up", "down", "left", "right"};
    return v;
}

const std::vector<std::string>& diagonals() {
    static const std::vector<std::string> v{"up_left", "up_right", "down_left", "down_right"};
    return v;
}

std::vector<PatternCase> legal_patterns() {
    std::vector<PatternCase> out;
    for (const auto& d : cardinals()) out.push_back({"cardinal", {d}, d});
    for (const auto& d : diagonals()) out.push_back({"diagonal", {d}, d});
    for (const auto& a : cardinals())
        for (const auto& b : cardinals()) {
            Delta x = delta(a), y = delta(b);
            if (x.dr * y.dr + x.dc * y.dc != 0) continue;
            for (const auto& c : cardinals()) {
                Delta z = delta(c);
                if (z.dr == -x.dr && z.dc == -x.dc) out.push_back({"square", {a, b, c}, "square_" + a + "_" + b + "_" + c});
            }
            out.push_back({"l", {a, b}, "l_" + a + "_" + b});
        }
    std::vector<std::string> all = cardinals();
    all.insert(all.end(), diagonals().begin(), diagonals().end());
    for (const auto& a : all)
        for (const auto& b : all) {
            Delta x = delta(a), y = delta(b);
            if (x == y || (x.dr == -y.dr && x.dc == -y.dc)) continue;
            out.push_back({"zigzag", {a, b}, "zigzag_" + a + "_" + b});
        }
    return out;
}

std::vector<Pos> walk(Pos start, const PatternCase& p, int reps) {
    auto add = [](Pos q, Delta d) { return Pos{q.row + d.dr, q.col + d.dc}; };
    std::vector<Pos> out{start};
    if (p.kind == "square") {
        for (const auto& d : p.dirs) out.push_back(add(out.back(), delta(d)));
    } else if (p.kind == "l") {
        Delta a = delta(p.dirs[0]);
        out.push_back(add(out.back(), a));
        out.push_back(add(out.back(), a));
        out.push_back(add(out.back(), delta(p.dirs[1])));
    } else if (p.kind == "zigzag") {
        for (int k = 1; k < reps; ++k) out.push_back(add(out.back(), delta(p.dirs[(k - 1) % 2])));
    } else {
        for (int k = 1; k < reps; ++k) out.push_back(add(out.back(), delta(p.dirs[0])));
    }
    return out;
}

const std::map<std::string, std::string>& mirror_horizontal() {
    static const std::map<std::string, std::string> t{
        {"A3", "F3"}, {"A4", "F4"}, {"B3", "E3"}, {"B4", "E4"},
        {"C1", "D1"}, {"C2", "D2"}, {"C3", "D3"}, {"C4", "D4"}, {"C5", "D5"}, {"C6", "D6"},
        {"D1", "C1"}, {"D2", "C2"}, {"D3", "C3"}, {"D4", "C4"}, {"D5", "C5"}, {"D6", "C6"},
        {"E3", "B3"}, {"E4", "B4"}, {"F3", "A3"}, {"F4", "A4"},
    };
    return t;
}

const std::map<std::string, std::string>& mirror_vertical() {
    static const std::map<std::string, std::string> t{
        {"A3", "A4"}, {"A4", "A3"}, {"B3", "B4"}, {"B4", "B3"},
        {"C1", "C6"}, {"C2", "C5"}, {"C3", "C4"}, {"C4", "C3"}, {"C5", "C2"}, {"C6", "C1"},
        {"D1", "D6"}, {"D2", "D5"}, {"D3", "D4"}, {"D4", "D3"}, {"D5", "D2"}, {"D6", "D1"},
        {"E3", "E4"}, {"E4", "E3"}, {"F3", "F4"}, {"F4", "F3"},
    };
    return t;
}

}  // namespace oracle
