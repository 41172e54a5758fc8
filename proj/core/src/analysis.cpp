#include "cat/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>
#include <sstream>

namespace cat {

using ojson = nlohmann::ordered_json;

namespace {

std::optional<int> to_int(std::string_view s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string csv_quote(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string q = "\"";
    for (char c : v) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

// Aligned plain-text table: first column left, others right.
std::string text_table(const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty()) return {};
    std::vector<std::size_t> width;
    auto display = [](const std::string& s) {
        std::size_t n = 0;
        for (unsigned char c : s)
            if ((c & 0xC0) != 0x80) ++n;  // count code points
        return n;
    };
    for (const auto& r : rows) {
        if (width.size() < r.size()) width.resize(r.size(), 0);
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], display(r[i]));
    }
    std::string out;
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::string pad(width[i] - display(r[i]), ' ');
            if (i) line += "  ";
            line += i == 0 ? r[i] + pad : pad + r[i];
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    return out;
}

std::string notes_text(const std::vector<std::string>& notices, const char* tag) {
    std::string out;
    for (const auto& n : notices) out += std::string(tag) + ": " + n + "\n";
    return out;
}

const std::string* group_of(const std::vector<AgeGroup>& groups, std::optional<int> age) {
    if (!age) return nullptr;
    for (const auto& g : groups)
        if (g.contains(*age)) return &g.label;
    return nullptr;
}

}  // namespace

Expected<std::vector<AgeGroup>, std::string> parse_age_bands(std::string_view spec) {
    std::vector<AgeGroup> out;
    std::size_t start = 0;
    while (start <= spec.size()) {
        auto end = spec.find(',', start);
        if (end == std::string_view::npos) end = spec.size();
        auto band = spec.substr(start, end - start);
        while (!band.empty() && band.front() == ' ') band.remove_prefix(1);
        while (!band.empty() && band.back() == ' ') band.remove_suffix(1);
        auto dash = band.find('-');
        if (dash == std::string_view::npos) return Unexpected(std::string("age band '") + std::string(band) + "' is not lo-hi");
        auto lo = to_int(band.substr(0, dash));
        auto hi = to_int(band.substr(dash + 1));
        if (!lo || !hi || *lo < 0 || *lo > *hi)
            return Unexpected(std::string("age band '") + std::string(band) + "' is not lo-hi");
        for (const auto& g : out)
            if (*lo <= g.max_age && g.min_age <= *hi)
                return Unexpected(std::string("age band '") + std::string(band) + "' overlaps '" + g.label + "'");
        out.push_back({std::string(band), *lo, *hi});
        start = end + 1;
    }
    if (out.empty()) return Unexpected(std::string("no age bands"));
    return out;
}

std::vector<AgeGroup> default_age_bands() { return {{"3-6", 3, 6}, {"10-13", 10, 13}}; }

std::map<std::string, std::optional<int>> student_ages(const Dataset& ds) {
    std::map<std::string, std::string> dates;
    for (const auto& s : ds.sessions) dates[s.session_id] = s.date;
    std::map<std::string, std::optional<int>> out;
    for (const auto& s : ds.students) {
        std::optional<int> age = s.age;
        if (!age && s.birth_date) {
            auto it = dates.find(s.session_id);
            if (it != dates.end()) age = age_in_years(*s.birth_date, it->second);
        }
        out[s.student_id] = age;
    }
    return out;
}

std::int64_t round_half_up(std::int64_t num, std::int64_t den) { return (2 * num + den) / (2 * den); }

std::int64_t to_minutes(std::int64_t ms) { return round_half_up(ms, 60000); }

// ---------------------------------------------------------------------------

TimeReport time_by_interaction(const Dataset& ds) {
    TimeReport report;
    std::map<std::string, std::map<std::string, std::int64_t>> per_cat;  // category -> student -> ms
    std::map<std::string, std::int64_t> total;
    std::vector<std::string> order;
    for (const auto& t : ds.tasks) {
        if (t.module != "validation" || !t.attempted) continue;
        if (!total.contains(t.student_id)) order.push_back(t.student_id);
        total[t.student_id] += t.duration_ms;
        if (t.interaction) per_cat[t.interaction->label()][t.student_id] += t.duration_ms;
    }
    auto row_of = [](const std::string& label, const std::map<std::string, std::int64_t>& values) {
        std::vector<std::int64_t> ms;
        for (const auto& [s, v] : values)
            if (v > 0) ms.push_back(v);
        TimeRow r;
        r.category = label;
        r.students = ms.size();
        if (ms.empty()) return r;
        std::int64_t sum = std::accumulate(ms.begin(), ms.end(), std::int64_t{0});
        r.avg_min = round_half_up(sum, 60000 * static_cast<std::int64_t>(ms.size()));
        r.min_min = to_minutes(*std::min_element(ms.begin(), ms.end()));
        r.max_min = to_minutes(*std::max_element(ms.begin(), ms.end()));
        return r;
    };
    for (auto cat : kInteractionOrder) {
        std::string label(cat);
        auto it = per_cat.find(label);
        TimeRow r = it == per_cat.end() ? TimeRow{label} : row_of(label, it->second);
        if (r.students == 0) {
            report.notices.push_back("no " + label + " users; row omitted");
            continue;
        }
        report.rows.push_back(r);
    }
    TimeRow t = row_of("Total", total);
    if (t.students > 0) report.rows.push_back(t);
    return report;
}

// ---------------------------------------------------------------------------

std::string SuccessCell::text() const {
    std::string out = std::to_string(solved) + "/" + std::to_string(attempted) + " (";
    if (attempted == 0) return out + "—)";
    return out + std::to_string(round_half_up(solved * 100, attempted)) + "%)";
}

SuccessCell SuccessReport::at(const std::string& schema, const std::string& group) const {
    auto s = cells.find(schema);
    if (s == cells.end()) return {};
    auto g = s->second.find(group);
    return g == s->second.end() ? SuccessCell{} : g->second;
}

SuccessReport success_by_schema(const Dataset& ds, const std::vector<AgeGroup>& groups) {
    SuccessReport r;
    auto ages = student_ages(ds);
    for (const auto& g : groups) {
        r.groups.push_back(g.label);
        r.group_sizes[g.label] = 0;
    }
    std::set<std::string> unassigned;
    auto label_of = [&](const std::string& student) {
        auto it = ages.find(student);
        const std::string* g = group_of(groups, it == ages.end() ? std::nullopt : it->second);
        if (!g) unassigned.insert(student);
        return g ? *g : std::string(kUnassigned);
    };
    for (const auto& s : ds.students) ++r.group_sizes[label_of(s.student_id)];

    for (const auto& t : ds.tasks) {
        if (t.module != "validation") continue;
        if (std::find(r.schemas.begin(), r.schemas.end(), t.schema_id) == r.schemas.end()) r.schemas.push_back(t.schema_id);
        if (!t.attempted) continue;
        std::string g = label_of(t.student_id);
        for (const std::string& key : {g, std::string("Total")}) {
            auto& cell = r.cells[t.schema_id][key];
            ++cell.attempted;
            if (t.solved) ++cell.solved;
        }
    }
    r.group_sizes["Total"] = static_cast<int>(ds.students.size());
    if (!unassigned.empty()) {
        r.groups.emplace_back(kUnassigned);
        r.notices.push_back(std::to_string(unassigned.size()) + " student(s) with unknown or out-of-band age reported as " +
                            std::string(kUnassigned));
    }
    r.groups.emplace_back("Total");
    return r;
}

// ---------------------------------------------------------------------------

namespace {

// Largest-remainder apportionment of 100 over the counts.
void apportion(StrategyGroup& g) {
    struct Slot {
        std::string d, i;
        std::int64_t floor, rem;
    };
    std::vector<Slot> slots;
    int assigned = 0;
    for (auto d : kDimensionOrder)
        for (auto i : kInteractionOrder) {
            std::int64_t n = g.counts[std::string(d)][std::string(i)];
            std::int64_t scaled = n * 100;
            slots.push_back({std::string(d), std::string(i), scaled / g.records, scaled % g.records});
            assigned += static_cast<int>(scaled / g.records);
        }
    std::vector<std::size_t> idx(slots.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return slots[a].rem > slots[b].rem; });
    for (std::size_t k = 0; assigned < 100 && k < idx.size(); ++k, ++assigned) ++slots[idx[k]].floor;
    for (const auto& s : slots) g.percent[s.d][s.i] = static_cast<int>(s.floor);
}

}  // namespace

StrategyReport strategy_distribution(const Dataset& ds, const std::vector<AgeGroup>& groups) {
    StrategyReport report;
    auto ages = student_ages(ds);
    std::map<std::string, StrategyGroup> by_label;
    int skipped = 0;
    for (const auto& t : ds.tasks) {
        if (t.module != "validation" || t.truncated || !t.dimension || !t.interaction) continue;
        auto it = ages.find(t.student_id);
        const std::string* g = group_of(groups, it == ages.end() ? std::nullopt : it->second);
        if (!g) {
            ++skipped;
            continue;
        }
        auto& sg = by_label[*g];
        ++sg.records;
        ++sg.counts[std::string(to_string(*t.dimension))][t.interaction->label()];
    }
    if (skipped) report.notices.push_back(std::to_string(skipped) + " record(s) without an age group left out");
    for (const auto& ag : groups) {
        auto it = by_label.find(ag.label);
        if (it == by_label.end()) {
            report.notices.push_back("group " + ag.label + " has no records; omitted");
            continue;
        }
        StrategyGroup g = std::move(it->second);
        g.label = ag.label;
        apportion(g);
        if (ag.max_age < 7) {
            int p = 0;
            for (auto d : kDimensionOrder) p += g.counts[std::string(d)]["P"] + g.counts[std::string(d)]["PF"];
            if (p > 0)
                report.warnings.push_back("group " + ag.label + ": " + std::to_string(p) +
                                          " record(s) use P/PF, but younger pupils are not allowed to use the visual "
                                          "programming interfaces");
        }
        report.groups.push_back(std::move(g));
    }
    return report;
}

// ---------------------------------------------------------------------------

std::optional<ReportFormat> parse_report_format(std::string_view s) noexcept {
    if (s == "text") return ReportFormat::text;
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    return std::nullopt;
}

std::string render(const TimeReport& r, ReportFormat f) {
    switch (f) {
    case ReportFormat::text: {
        std::vector<std::vector<std::string>> rows{{"Interface", "Avg time", "Min time", "Max time"}};
        for (const auto& x : r.rows)
            rows.push_back({x.category, std::to_string(x.avg_min) + " min", std::to_string(x.min_min) + " min",
                            std::to_string(x.max_min) + " min"});
        return text_table(rows) + notes_text(r.notices, "note");
    }
    case ReportFormat::csv: {
        std::string out = "interface,students,avg_min,min_min,max_min\n";
        for (const auto& x : r.rows)
            out += x.category + "," + std::to_string(x.students) + "," + std::to_string(x.avg_min) + "," +
                   std::to_string(x.min_min) + "," + std::to_string(x.max_min) + "\n";
        return out;
    }
    case ReportFormat::json: {
        ojson j;
        j["rows"] = ojson::array();
        for (const auto& x : r.rows)
            j["rows"].push_back({{"interface", x.category},
                                 {"students", x.students},
                                 {"avg_min", x.avg_min},
                                 {"min_min", x.min_min},
                                 {"max_min", x.max_min}});
        j["notices"] = r.notices;
        return j.dump(2) + "\n";
    }
    }
    return {};
}

std::string render(const SuccessReport& r, ReportFormat f) {
    switch (f) {
    case ReportFormat::text: {
        std::vector<std::vector<std::string>> rows;
        std::vector<std::string> head{"Schema"};
        for (const auto& g : r.groups) head.push_back(g);
        rows.push_back(head);
        for (const auto& s : r.schemas) {
            std::vector<std::string> row{s};
            for (const auto& g : r.groups) row.push_back(r.at(s, g).text());
            rows.push_back(row);
        }
        return text_table(rows) + notes_text(r.notices, "note");
    }
    case ReportFormat::csv: {
        std::string out = "schema,group,solved,attempted,percent\n";
        for (const auto& s : r.schemas)
            for (const auto& g : r.groups) {
                auto c = r.at(s, g);
                out += csv_quote(s) + "," + csv_quote(g) + "," + std::to_string(c.solved) + "," +
                       std::to_string(c.attempted) + "," +
                       (c.attempted ? std::to_string(round_half_up(c.solved * 100, c.attempted)) : std::string()) + "\n";
            }
        return out;
    }
    case ReportFormat::json: {
        ojson j;
        j["groups"] = r.groups;
        j["group_sizes"] = ojson::object();
        for (const auto& g : r.groups) j["group_sizes"][g] = r.group_sizes.contains(g) ? r.group_sizes.at(g) : 0;
        j["schemas"] = ojson::array();
        for (const auto& s : r.schemas) {
            ojson row;
            row["schema"] = s;
            for (const auto& g : r.groups) {
                auto c = r.at(s, g);
                row[g] = {{"solved", c.solved},
                          {"attempted", c.attempted},
                          {"percent", c.attempted ? ojson(round_half_up(c.solved * 100, c.attempted)) : ojson(nullptr)},
                          {"text", c.text()}};
            }
            j["schemas"].push_back(row);
        }
        j["notices"] = r.notices;
        return j.dump(2) + "\n";
    }
    }
    return {};
}

std::string render(const StrategyReport& r, ReportFormat f) {
    switch (f) {
    case ReportFormat::text: {
        std::string out;
        for (const auto& g : r.groups) {
            out += "Group " + g.label + " (" + std::to_string(g.records) + " records)\n";
            std::vector<std::vector<std::string>> rows;
            std::vector<std::string> head{""};
            for (auto i : kInteractionOrder) head.emplace_back(i);
            rows.push_back(head);
            for (auto d : kDimensionOrder) {
                std::vector<std::string> row{std::string(d)};
                for (auto i : kInteractionOrder)
                    row.push_back(std::to_string(g.percent.at(std::string(d)).at(std::string(i))) + "%");
                rows.push_back(row);
            }
            out += text_table(rows) + "\n";
        }
        return out + notes_text(r.notices, "note") + notes_text(r.warnings, "warning");
    }
    case ReportFormat::csv: {
        std::string out = "group,dimension,interaction,count,percent\n";
        for (const auto& g : r.groups)
            for (auto d : kDimensionOrder)
                for (auto i : kInteractionOrder) {
                    std::string ds(d), is(i);
                    out += csv_quote(g.label) + "," + ds + "," + is + "," +
                           std::to_string(g.counts.contains(ds) && g.counts.at(ds).contains(is) ? g.counts.at(ds).at(is) : 0) +
                           "," + std::to_string(g.percent.at(ds).at(is)) + "\n";
                }
        return out;
    }
    case ReportFormat::json: {
        ojson j;
        j["groups"] = ojson::array();
        for (const auto& g : r.groups) {
            ojson o;
            o["group"] = g.label;
            o["records"] = g.records;
            o["percent"] = ojson::object();
            for (auto d : kDimensionOrder)
                for (auto i : kInteractionOrder)
                    o["percent"][std::string(d)][std::string(i)] = g.percent.at(std::string(d)).at(std::string(i));
            j["groups"].push_back(o);
        }
        j["notices"] = r.notices;
        j["warnings"] = r.warnings;
        return j.dump(2) + "\n";
    }
    }
    return {};
}

}  // namespace cat
