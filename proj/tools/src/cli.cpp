#include "cat/cli.hpp"

#include <CLI11.hpp>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <pthread.h>
#include <sstream>

#include "cat/analysis.hpp"
#include "cat/dataset.hpp"
#include "cat/engine.hpp"
#include "cat/http.hpp"
#include "cat/interp.hpp"
#include "cat/lang.hpp"
#include "cat/schema.hpp"
#include "cat/scorer.hpp"
#include "cat/service.hpp"

namespace fs = std::filesystem;

namespace cat::cli {

namespace {

std::optional<std::string> data_dir() {
    if (const char* d = std::getenv("CAT_DATA_DIR"); d && *d) return std::string(d);
    return std::nullopt;
}

// Relative paths that do not exist are looked up under CAT_DATA_DIR.
std::string resolve(const std::string& path) {
    if (path.empty() || path == "-" || fs::exists(path) || fs::path(path).is_absolute()) return path;
    if (auto d = data_dir(); d && fs::exists(fs::path(*d) / path)) return (fs::path(*d) / path).string();
    return path;
}

std::optional<std::string> read_text(const std::string& path, std::istream& in) {
    if (path == "-") return std::string{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::ifstream f(resolve(path), std::ios::binary);
    if (!f) return std::nullopt;
    return std::string{std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

struct Loaded {
    std::optional<Schema> schema;
    int status = ok;
};

// A bundled schema id (V01, T03) or a schema file.
Loaded load_schema_arg(const std::string& arg, std::ostream& err) {
    if (arg.empty()) return {};
    auto catalog = SchemaCatalog::bundled();
    if (auto e = catalog.find(arg)) return {*e->schema, ok};
    std::ifstream f(resolve(arg), std::ios::binary);
    if (!f) {
        err << "cannot read schema " << arg << "\n";
        return {std::nullopt, io_error};
    }
    try {
        return {load_schema(f), ok};
    } catch (const SchemaError& e) {
        err << arg << ": " << e.what() << "\n";
        return {std::nullopt, parse_error};
    }
}

struct RubricArg {
    Rubric rubric = default_rubric();
    int status = ok;
};

RubricArg load_rubric_arg(const std::string& path, std::ostream& err) {
    if (path.empty()) return {};
    auto text = read_text(path, std::cin);
    if (!text) {
        err << "cannot read rubric " << path << "\n";
        return {default_rubric(), io_error};
    }
    try {
        return {load_rubric(*text), ok};
    } catch (const RubricError& e) {
        err << path << ": " << e.what() << "\n";
        return {default_rubric(), parse_error};
    }
}

void print_exec_error(const ExecError& e, std::ostream& out) {
    out << "error: " << to_string(e.kind) << " in command " << e.command_index + 1 << " `" << e.command
        << "`: " << e.message;
    if (e.cell) out << " (cell " << e.cell->to_string() << ")";
    out << "\n";
    if (!e.suggestion.empty()) out << "suggestion: " << e.suggestion << "\n";
}

void print_parse_error(const std::string& where, const ParseError& e, std::ostream& err) {
    err << where << ":" << e.line << ":" << e.column << ": parse error (" << to_string(e.kind) << "): " << e.message
        << "\n";
}

void print_score(const Program& p, InteractionDimension interaction, const Rubric& rubric, std::ostream& out) {
    auto dim = classify_dimension(p);
    out << "dimension: " << (dim ? std::string(to_string(*dim)) : "none") << "\n";
    out << "interaction: " << interaction.label() << "\n";
    if (!dim) {
        out << "score: -\n";
        return;
    }
    auto s = cat_score(*dim, interaction, rubric);
    out << "score: " << s.total << " (algorithm " << s.algorithm_points << " + artefact " << s.artefact_points
        << " + autonomy " << s.autonomy_points << ", rubric " << s.rubric_id << ")\n";
}

std::string mismatch_reason(const CrossBoard& board, const Schema& schema) {
    if (!board.is_complete()) return "incomplete, " + std::to_string(board.coloured_count()) + "/20 cells coloured";
    int diff = 0;
    for (const auto& c : all_cells())
        if (board.get(c) != schema.cells.get(c)) ++diff;
    return std::to_string(diff) + " cell(s) differ from " + schema.id;
}

// ---------------------------------------------------------------------------

struct RunArgs {
    std::string program;
    std::string schema;
    std::string rubric;
    std::string interaction = "P";
    std::string trace;
};

int cmd_run(const RunArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
    auto text = read_text(a.program, in);
    if (!text) {
        err << "cannot read program " << a.program << "\n";
        return io_error;
    }
    auto loaded = load_schema_arg(a.schema, err);
    if (loaded.status != ok) return loaded.status;
    auto rubric = load_rubric_arg(a.rubric, err);
    if (rubric.status != ok) return rubric.status;
    auto interaction = InteractionDimension::parse(a.interaction);
    if (!interaction) {
        err << "unknown interaction '" << a.interaction << "' (GF, G, PF or P)\n";
        return parse_error;
    }

    auto program = parse_program(*text);
    if (!program) {
        print_parse_error(a.program, program.error(), err);
        return parse_error;
    }
    for (const auto& d : validate_static(*program)) err << "warning: " << d.message << "\n";

    auto result = run_program(*program);
    if (!a.trace.empty()) {
        std::ofstream t(a.trace);
        if (!t) {
            err << "cannot write trace " << a.trace << "\n";
            return io_error;
        }
        t << trace_to_jsonl(result.state.trace);
    }
    out << render_grid(result.state.board);
    if (result.error) {
        print_exec_error(*result.error, out);
        return exec_error;
    }
    print_score(*program, *interaction, rubric.rubric, out);
    if (!loaded.schema) return ok;
    bool success = check_success(result.state.board, *loaded.schema);
    out << "success: " << (success ? "yes" : "no (" + mismatch_reason(result.state.board, *loaded.schema) + ")")
        << "\n";
    return success ? ok : mismatch;
}

// ---------------------------------------------------------------------------

int cmd_score(const RunArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
    auto text = read_text(a.program, in);
    if (!text) {
        err << "cannot read program " << a.program << "\n";
        return io_error;
    }
    auto rubric = load_rubric_arg(a.rubric, err);
    if (rubric.status != ok) return rubric.status;
    auto interaction = InteractionDimension::parse(a.interaction);
    if (!interaction) {
        err << "unknown interaction '" << a.interaction << "' (GF, G, PF or P)\n";
        return parse_error;
    }
    auto program = parse_program(*text);
    if (!program) {
        print_parse_error(a.program, program.error(), err);
        return parse_error;
    }
    for (const auto& c : program->commands) {
        auto d = classify_command(c);
        out << (d ? std::string(to_string(*d)) : std::string("--")) << "  " << format_command(c) << "\n";
    }
    print_score(*program, *interaction, rubric.rubric, out);
    return ok;
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::vector<std::string>& files, std::ostream& out, std::ostream& err) {
    int status = ok;
    auto worse = [&](int s) {
        if (s == io_error || status == io_error) status = io_error;
        else status = std::max(status, s);
    };
    for (const auto& f : files) {
        std::ifstream in(resolve(f), std::ios::binary);
        if (!in) {
            err << f << ": cannot read\n";
            worse(io_error);
            continue;
        }
        std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
        if (fs::path(f).extension() == ".cat") {
            auto p = parse_program(text);
            if (!p) {
                print_parse_error(f, p.error(), err);
                worse(parse_error);
                continue;
            }
            auto diags = validate_static(*p);
            for (const auto& d : diags) err << f << ": " << to_string(d.kind) << ": " << d.message << "\n";
            if (!diags.empty()) {
                worse(parse_error);
                continue;
            }
            out << f << ": ok (" << p->commands.size() << " commands)\n";
        } else {
            try {
                auto s = load_schema(text);
                out << f << ": ok (schema " << s.id << ")\n";
            } catch (const SchemaError& e) {
                err << f << ": " << e.what() << "\n";
                worse(parse_error);
            }
        }
    }
    return status;
}

// ---------------------------------------------------------------------------

struct ReplArgs {
    std::string schema;
    std::string rubric;
    std::string lang = "en";
};

int cmd_repl(const ReplArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
    auto loaded = load_schema_arg(a.schema, err);
    if (loaded.status != ok) return loaded.status;
    auto rubric = load_rubric_arg(a.rubric, err);
    if (rubric.status != ok) return rubric.status;
    if (!is_supported_language(a.lang)) {
        err << "unsupported language '" << a.lang << "' (it, fr, de, en)\n";
        return parse_error;
    }

    ExecState state;
    Program program;
    bool feedback = true;
    bool feedback_used = true;

    auto show = [&] {
        if (loaded.schema) out << label(a.lang, "reference") << ":\n" << render_grid(loaded.schema->cells);
        if (feedback)
            out << label(a.lang, "board") << ":\n" << render_grid(state.board);
        else
            out << "(" << label(a.lang, "feedback_off") << ")\n";
        if (loaded.schema && check_success(state.board, *loaded.schema)) out << "schema solved\n";
    };
    auto reset = [&] {
        state = {};
        program = {};
        feedback_used = feedback;
    };

    std::string line;
    while (out << "> " << std::flush, std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        line = line.substr(first);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\r' || line.back() == '\t')) line.pop_back();

        if (line[0] == ':') {
            std::istringstream words(line);
            std::string cmd, arg;
            words >> cmd >> arg;
            if (cmd == ":quit" || cmd == ":q") break;
            if (cmd == ":feedback" && (arg == "on" || arg == "off")) {
                feedback = arg == "on";
                feedback_used = feedback_used || feedback;
                out << label(a.lang, feedback ? "feedback_on" : "feedback_off") << "\n";
                show();
            } else if (cmd == ":score") {
                print_score(program, {Artefact::P, feedback_used}, rubric.rubric, out);
            } else if (cmd == ":reset") {
                reset();
                out << "board reset\n";
                show();
            } else if (cmd == ":surrender") {
                out << (loaded.schema ? "schema " + loaded.schema->id + " skipped" : std::string("skipped")) << "\n";
                reset();
                show();
            } else if (cmd == ":program") {
                out << format_program(program) << (program.commands.empty() ? "" : "\n");
            } else if (cmd == ":help") {
                out << ":feedback on|off  :score  :reset  :surrender  :program  :quit\n";
            } else {
                out << "unknown directive " << line << " (try :help)\n";
            }
            continue;
        }

        auto parsed = parse_program(line);
        if (!parsed) {
            out << "parse error at column " << parsed.error().column << ": " << parsed.error().message << "\n";
            continue;
        }
        for (const auto& c : parsed->commands) {
            if (auto e = execute(state, c)) {
                print_exec_error(*e, out);
                break;
            }
            program.commands.push_back(c);
        }
        show();
    }
    out << "\n";
    return ok;
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    std::string kind;
    std::vector<std::string> datasets;
    std::string bands;
    std::string format = "text";
    bool pseudo = false;
    std::string salt = "cat";
};

int cmd_analyze(const AnalyzeArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
    auto format = parse_report_format(a.format);
    if (!format) {
        err << "unknown format '" << a.format << "' (text, csv, json)\n";
        return parse_error;
    }
    std::vector<AgeGroup> groups = default_age_bands();
    if (!a.bands.empty()) {
        auto parsed = parse_age_bands(a.bands);
        if (!parsed) {
            err << parsed.error() << "\n";
            return parse_error;
        }
        groups = *parsed;
    }

    std::vector<std::string> files = a.datasets;
    if (files.empty()) {
        fs::path dir = data_dir().value_or(".");
        std::error_code ec;
        for (const auto& entry : fs::directory_iterator(dir, ec)) {
            auto name = entry.path().filename().string();
            if (name.size() > 12 && name.ends_with(".catlog.jsonl")) files.push_back(entry.path().string());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) {
            err << "no .catlog.jsonl datasets in " << dir.string() << "\n";
            return io_error;
        }
    }

    Dataset all;
    for (const auto& f : files) {
        auto text = read_text(f, in);
        if (!text) {
            err << "cannot read dataset " << f << "\n";
            return io_error;
        }
        try {
            if (a.pseudo) *text = pseudonymise(*text, a.salt).dataset;
            Dataset ds = parse_dataset(*text);
            auto append = [](auto& dst, auto& src) { dst.insert(dst.end(), src.begin(), src.end()); };
            append(all.sessions, ds.sessions);
            append(all.students, ds.students);
            append(all.events, ds.events);
            append(all.tasks, ds.tasks);
        } catch (const DatasetError& e) {
            err << f << ": " << e.what() << "\n";
            return parse_error;
        }
    }

    if (a.kind == "times")
        out << render(time_by_interaction(all), *format);
    else if (a.kind == "success")
        out << render(success_by_schema(all, groups), *format);
    else
        out << render(strategy_distribution(all, groups), *format);
    return ok;
}

// ---------------------------------------------------------------------------

struct PseudoArgs {
    std::string dataset;
    std::string salt = "cat";
    std::string output;
    std::string mapping;
};

int cmd_pseudonymise(const PseudoArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
    auto text = read_text(a.dataset, in);
    if (!text) {
        err << "cannot read dataset " << a.dataset << "\n";
        return io_error;
    }
    PseudonymisedDataset p;
    try {
        p = pseudonymise(*text, a.salt);
    } catch (const DatasetError& e) {
        err << a.dataset << ": " << e.what() << "\n";
        return parse_error;
    }
    if (a.output.empty()) {
        out << p.dataset;
    } else {
        std::ofstream f(a.output);
        if (!(f << p.dataset)) {
            err << "cannot write " << a.output << "\n";
            return io_error;
        }
    }
    if (!a.mapping.empty()) {
        std::ofstream f(a.mapping);
        if (!(f << mapping_to_csv(p.mapping))) {
            err << "cannot write " << a.mapping << "\n";
            return io_error;
        }
    }
    return ok;
}

// ---------------------------------------------------------------------------

struct SchemasArgs {
    std::string dir;
    std::string module = "all";
};

int cmd_schemas_export(const SchemasArgs& a, std::ostream& out, std::ostream& err) {
    if (a.module != "all" && !parse_module(a.module)) {
        err << "unknown module '" << a.module << "' (training, validation, all)\n";
        return parse_error;
    }
    fs::path dir = a.dir.empty() ? fs::path(data_dir().value_or(".")) / "schemas" : fs::path(a.dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    auto catalog = SchemaCatalog::bundled();
    for (Module m : {Module::training, Module::validation}) {
        if (a.module != "all" && parse_module(a.module) != m) continue;
        for (const auto& s : catalog.schemas(m)) {
            auto path = dir / (s.id + ".json");
            std::ofstream f(path);
            if (!(f << save_schema(s))) {
                err << "cannot write " << path.string() << "\n";
                return io_error;
            }
            out << path.string() << "\n";
        }
    }
    return ok;
}

int cmd_schemas_list(std::ostream& out) {
    auto catalog = SchemaCatalog::bundled();
    for (Module m : {Module::training, Module::validation})
        for (const auto& s : catalog.schemas(m))
            out << s.id << "  " << to_string(m) << "  complexity "
                << (s.complexity_hint ? std::to_string(*s.complexity_hint) : "-") << "  " << s.cells.to_compact()
                << "\n";
    return ok;
}

// ---------------------------------------------------------------------------

struct ServeArgs {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string data_dir;
    std::string rubric;
    std::string salt = "cat";
};

int cmd_serve(const ServeArgs& a, std::ostream& out, std::ostream& err) {
    ServiceConfig config;
    auto rubric = load_rubric_arg(a.rubric, err);
    if (rubric.status != ok) return rubric.status;
    config.rubric = rubric.rubric;
    config.pseudonym_salt = a.salt;
    if (!a.data_dir.empty())
        config.data_dir = a.data_dir;
    else
        config.data_dir = data_dir();

    Service service(std::move(config));
    HttpServer server(service);
    int port = server.bind(a.host, a.port);
    if (port < 0) {
        err << "cannot bind " << a.host << ":" << a.port << "\n";
        return io_error;
    }
    out << "listening on http://" << a.host << ":" << port << "\n" << std::flush;

    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);
    std::thread waiter([&] {
        int sig = 0;
        sigwait(&set, &sig);
        server.stop();
    });
    server.listen();
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Virtual cross array task engine", args.empty() ? "cat" : args[0]};
    app.require_subcommand(1);
    int status = ok;

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Run a .cat program and report board, dimension and score");
    run_cmd->add_option("program", run_args.program, "Program file ('-' for stdin)")->required();
    run_cmd->add_option("--schema", run_args.schema, "Schema file or bundled id (e.g. V01)");
    run_cmd->add_option("--rubric", run_args.rubric, "Rubric JSON file");
    run_cmd->add_option("--interaction", run_args.interaction, "Interaction category used for the score")
        ->capture_default_str();
    run_cmd->add_option("--trace", run_args.trace, "Write the execution trace as JSON lines");
    run_cmd->callback([&] { status = cmd_run(run_args, in, out, err); });

    RunArgs score_args;
    auto* score_cmd = app.add_subcommand("score", "Classify a program and compute its score");
    score_cmd->add_option("program", score_args.program, "Program file ('-' for stdin)")->required();
    score_cmd->add_option("--rubric", score_args.rubric, "Rubric JSON file");
    score_cmd->add_option("--interaction", score_args.interaction, "Interaction category")->capture_default_str();
    score_cmd->callback([&] { status = cmd_score(score_args, in, out, err); });

    std::vector<std::string> validate_files;
    auto* validate_cmd = app.add_subcommand("validate", "Check schema files (.json) and programs (.cat)");
    validate_cmd->add_option("files", validate_files, "Files to check")->required();
    validate_cmd->callback([&] { status = cmd_validate(validate_files, out, err); });

    ReplArgs repl_args;
    auto* repl_cmd = app.add_subcommand("repl", "Interactive interpreter");
    repl_cmd->add_option("--schema", repl_args.schema, "Schema file or bundled id");
    repl_cmd->add_option("--rubric", repl_args.rubric, "Rubric JSON file");
    repl_cmd->add_option("--lang", repl_args.lang, "Label language: it, fr, de, en")->capture_default_str();
    repl_cmd->callback([&] { status = cmd_repl(repl_args, in, out, err); });

    AnalyzeArgs analyze_args;
    auto* analyze_cmd = app.add_subcommand("analyze", "Reports over exported datasets");
    analyze_cmd->add_option("report", analyze_args.kind, "times, success or strategies")
        ->required()
        ->check(CLI::IsMember({"times", "success", "strategies"}));
    analyze_cmd->add_option("datasets", analyze_args.datasets,
                            "Dataset files (default: every .catlog.jsonl in CAT_DATA_DIR)");
    analyze_cmd->add_option("--bands", analyze_args.bands, "Age bands, e.g. 3-6,10-13");
    analyze_cmd->add_option("--format", analyze_args.format, "text, csv or json")->capture_default_str();
    analyze_cmd->add_flag("--pseudo", analyze_args.pseudo, "Pseudonymise the input first");
    analyze_cmd->add_option("--salt", analyze_args.salt, "Salt for --pseudo");
    analyze_cmd->callback([&] { status = cmd_analyze(analyze_args, in, out, err); });

    PseudoArgs pseudo_args;
    auto* pseudo_cmd = app.add_subcommand("pseudonymise", "Pseudonymise a dataset");
    pseudo_cmd->add_option("dataset", pseudo_args.dataset, "Dataset file ('-' for stdin)")->required();
    pseudo_cmd->add_option("--salt", pseudo_args.salt, "Hash salt");
    pseudo_cmd->add_option("-o,--out", pseudo_args.output, "Output file (default stdout)");
    pseudo_cmd->add_option("--mapping", pseudo_args.mapping, "Write the code mapping table (CSV) here");
    pseudo_cmd->callback([&] { status = cmd_pseudonymise(pseudo_args, in, out, err); });

    SchemasArgs schemas_args;
    auto* schemas_cmd = app.add_subcommand("schemas", "Bundled reference schemas");
    schemas_cmd->require_subcommand(1);
    auto* export_cmd = schemas_cmd->add_subcommand("export", "Write bundled schemas as JSON files");
    export_cmd->add_option("dir", schemas_args.dir, "Output directory (default CAT_DATA_DIR/schemas)");
    export_cmd->add_option("--module", schemas_args.module, "training, validation or all")->capture_default_str();
    export_cmd->callback([&] { status = cmd_schemas_export(schemas_args, out, err); });
    auto* list_cmd = schemas_cmd->add_subcommand("list", "List bundled schemas");
    list_cmd->callback([&] { status = cmd_schemas_list(out); });

    ServeArgs serve_args;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP session service");
    serve_cmd->add_option("--host", serve_args.host)->capture_default_str();
    serve_cmd->add_option("--port", serve_args.port, "0 picks a free port")->capture_default_str();
    serve_cmd->add_option("--data-dir", serve_args.data_dir, "Storage root (default CAT_DATA_DIR)");
    serve_cmd->add_option("--rubric", serve_args.rubric, "Rubric JSON file");
    serve_cmd->add_option("--salt", serve_args.salt, "Salt for pseudonymised exports");
    serve_cmd->callback([&] { status = cmd_serve(serve_args, out, err); });

    std::vector<std::string> argv_rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(argv_rev.begin(), argv_rev.end());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return parse_error;
    }
    return status;
}

}  // namespace cat::cli
