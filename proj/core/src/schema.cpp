#include "cat/schema.hpp"

#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>

#include <nlohmann/json.hpp>

namespace cat {

using ordered_json = nlohmann::ordered_json;

Schema load_schema(std::string_view document) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(SchemaErrorKind::malformed, std::string("malformed schema: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("id") || !doc["id"].is_string() ||
        !doc.contains("cells") || !doc["cells"].is_object())
        throw SchemaError(SchemaErrorKind::malformed,
                          "malformed schema: expected {\"id\": string, \"cells\": object}");

    Schema schema;
    schema.id = doc["id"].get<std::string>();
    if (doc.contains("complexity")) {
        if (!doc["complexity"].is_number_integer())
            throw SchemaError(SchemaErrorKind::malformed, "malformed schema: complexity must be an integer");
        schema.complexity_hint = doc["complexity"].get<int>();
    }

    for (const auto& [key, value] : doc["cells"].items()) {
        auto coord = CellCoord::parse(key);
        if (!coord || !is_valid_cell(*coord))
            throw SchemaError(SchemaErrorKind::invalid_coordinate, "invalid coordinate " + key);
        if (value.is_null())
            throw SchemaError(SchemaErrorKind::uncoloured, "uncoloured cell " + key + " in reference schema");
        if (!value.is_string())
            throw SchemaError(SchemaErrorKind::malformed, "cell " + key + " must map to a colour name");
        auto color = parse_color(value.get<std::string>());
        if (!color)
            throw SchemaError(SchemaErrorKind::unknown_color,
                              "unknown colour '" + value.get<std::string>() + "' at " + key);
        schema.cells.set(*coord, *color);
    }
    if (!schema.cells.is_complete()) {
        std::string missing;
        for (auto c : all_cells())
            if (!schema.cells.is_coloured(c)) missing += (missing.empty() ? "" : ",") + c.to_string();
        throw SchemaError(SchemaErrorKind::incomplete, "incomplete schema: missing " + missing);
    }
    return schema;
}

Schema load_schema(std::istream& in) {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return load_schema(text);
}

Schema load_schema_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(SchemaErrorKind::malformed, "cannot open schema file " + path);
    return load_schema(in);
}

std::string save_schema(const Schema& schema) {
    ordered_json doc;
    doc["id"] = schema.id;
    ordered_json cells = ordered_json::object();
    for (auto c : all_cells()) {
        auto color = schema.cells.get(c);
        cells[c.to_string()] = color ? ordered_json(std::string(to_string(*color))) : ordered_json(nullptr);
    }
    doc["cells"] = std::move(cells);
    if (schema.complexity_hint) doc["complexity"] = *schema.complexity_hint;
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Bundled sets
// ---------------------------------------------------------------------------

namespace {

using Painter = std::function<Color(int row, int col)>;

constexpr Color Y = Color::yellow;
constexpr Color R = Color::red;
constexpr Color G = Color::green;
constexpr Color B = Color::blue;

Schema make(std::string id, int complexity, const Painter& paint) {
    Schema s{std::move(id), {}, complexity};
    for (auto c : all_cells()) s.cells.set(c, paint(c.row - 'A', c.col));
    return s;
}

bool centre(int r, int c) { return (r == 2 || r == 3) && (c == 3 || c == 4); }
bool vertical_arm(int r) { return r <= 1 || r >= 4; }

std::vector<Schema> build_validation() {
    std::vector<Schema> out;
    out.push_back(make("V01", 1, [](int r, int) { return vertical_arm(r) ? B : R; }));
    out.push_back(make("V02", 1, [](int r, int) {
        constexpr Color rows[] = {Y, R, G, B, Y, R};
        return rows[r];
    }));
    out.push_back(make("V03", 1, [](int, int c) { return (c == 3 || c == 4) ? G : Y; }));
    out.push_back(make("V04", 2, [](int, int c) { return c <= 3 ? R : B; }));
    out.push_back(make("V05", 2, [](int r, int) { return r <= 2 ? Y : G; }));
    out.push_back(make("V06", 2, [](int r, int c) { return centre(r, c) ? R : B; }));
    out.push_back(make("V07", 2, [](int r, int c) {
        if (r <= 2) return c <= 3 ? Y : R;
        return c <= 3 ? G : B;
    }));
    out.push_back(make("V08", 3, [](int r, int c) { return (r + c) % 2 == 0 ? Y : R; }));
    out.push_back(make("V09", 3, [](int, int c) { return c % 2 == 1 ? G : B; }));
    out.push_back(make("V10", 3, [](int r, int) { return r % 2 == 0 ? R : Y; }));
    out.push_back(make("V11", 3, [](int r, int c) {
        constexpr Color cycle[] = {Y, R, B};
        return cycle[(r + c) % 3];
    }));
    out.push_back(make("V12", 3, [](int r, int c) {
        if (centre(r, c)) return G;
        if (r == 0 || r == 5 || c == 1 || c == 6) return R;
        return Y;
    }));
    return out;
}

std::vector<Schema> build_training() {
    std::vector<Schema> out;
    int n = 0;
    auto id = [&n] {
        ++n;
        return std::string(n < 10 ? "T0" : "T") + std::to_string(n);
    };
    for (Color c : kAllColors) out.push_back(make(id(), 1, [c](int, int) { return c; }));
    out.push_back(make(id(), 1, [](int r, int) { return r == 2 ? R : Y; }));
    out.push_back(make(id(), 1, [](int r, int) { return r == 3 ? B : G; }));
    out.push_back(make(id(), 1, [](int, int c) { return c == 3 ? R : B; }));
    out.push_back(make(id(), 1, [](int, int c) { return c == 4 ? Y : G; }));
    out.push_back(make(id(), 2, [](int r, int) { return r <= 2 ? R : B; }));
    out.push_back(make(id(), 2, [](int, int c) { return c <= 3 ? Y : G; }));
    out.push_back(make(id(), 2, [](int r, int c) { return centre(r, c) ? Y : R; }));
    out.push_back(make(id(), 2, [](int r, int c) { return (c == 3 || c == 4) && vertical_arm(r) ? G : (centre(r, c) ? G : B); }));
    out.push_back(make(id(), 3, [](int, int c) { return c % 2 == 1 ? Y : R; }));
    out.push_back(make(id(), 3, [](int r, int) { return r % 2 == 0 ? G : B; }));
    out.push_back(make(id(), 3, [](int r, int c) { return (r + c) % 2 == 0 ? R : B; }));
    return out;
}

}  // namespace

const std::vector<Schema>& validation_schemas() {
    static const std::vector<Schema> schemas = build_validation();
    return schemas;
}

const std::vector<Schema>& training_schemas() {
    static const std::vector<Schema> schemas = build_training();
    return schemas;
}

}  // namespace cat
