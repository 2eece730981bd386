#include <unistd.h>

#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "snel/backend.hpp"
#include "snel/error.hpp"
#include "snel/eval.hpp"
#include "snel/lexer.hpp"
#include "snel/parser.hpp"
#include "snel/remote.hpp"
#include "snel/scene.hpp"
#include "snel/typecheck.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitQueryError = 1;    // lex / parse / type errors
constexpr int kExitRuntimeError = 2;  // evaluation, backend, scene errors

enum class OutputFormat { Json, Pretty };

struct Options {
    std::string scene_path;
    std::string mode = "prob";
    double threshold = 0.5;
    int index_base = 0;
    std::string backend;  // "" = env SNEL_BACKEND_URL, else mock
    std::string output;   // "json" | "pretty" | "" = auto
};

struct Session {
    snel::Scene scene;
    std::unique_ptr<snel::Backend> backend;
    snel::EvalConfig config;
    snel::ScoreCache cache;
};

bool is_query_error(const snel::Error& err) {
    return dynamic_cast<const snel::LexError*>(&err) != nullptr ||
           dynamic_cast<const snel::ParseError*>(&err) != nullptr ||
           dynamic_cast<const snel::TypeError*>(&err) != nullptr;
}

OutputFormat resolve_output(const Options& opts) {
    if (opts.output == "json") return OutputFormat::Json;
    if (opts.output == "pretty") return OutputFormat::Pretty;
    return isatty(STDOUT_FILENO) ? OutputFormat::Pretty : OutputFormat::Json;
}

std::unique_ptr<snel::Backend> make_backend(const std::string& selector) {
    std::string choice = selector;
    if (choice.empty()) {
        const char* env = std::getenv("SNEL_BACKEND_URL");
        choice = (env != nullptr && *env != '\0') ? env : "mock";
    }
    if (choice == "mock") return std::make_unique<snel::MockBackend>();
    if (choice.rfind("http://", 0) == 0 || choice.rfind("https://", 0) == 0) {
        return std::make_unique<snel::RemoteBackend>(choice);
    }
    throw snel::EvalError("backend must be 'mock' or an http(s):// URL, got '" + choice + "'");
}

snel::EvalConfig make_config(const Options& opts) {
    snel::EvalConfig config;
    const auto mode = snel::mode_from_name(opts.mode);
    if (!mode) throw snel::EvalError("mode must be prob, fuzzy or bool");
    config.mode = *mode;
    config.threshold = opts.threshold;
    config.index_base = opts.index_base;
    config.validate();
    return config;
}

Session open_session(const Options& opts) {
    Session session;
    session.config = make_config(opts);
    session.backend = make_backend(opts.backend);
    if (opts.scene_path.empty()) {
        throw snel::FileError("no scene loaded; pass --scene PATH");
    }
    session.scene = snel::load_scene(opts.scene_path);
    session.backend->prepare(session.scene);
    return session;
}

void print_result(const snel::Value& value, OutputFormat format) {
    if (format == OutputFormat::Json) {
        std::cout << snel::value_to_json(value).dump() << "\n";
    } else {
        std::cout << snel::value_to_pretty(value) << "\n";
    }
}

int run_query(const Options& opts, const std::string& query_text) {
    OutputFormat format = resolve_output(opts);
    try {
        Session session = open_session(opts);
        snel::Query query = snel::parse_query(query_text);
        snel::typecheck(query);
        const snel::Value value = snel::evaluate_query(query, session.scene, *session.backend,
                                                       session.config, session.cache);
        print_result(value, format);
        return kExitOk;
    } catch (const snel::Error& err) {
        std::cerr << snel::render_diagnostic(query_text, err);
        return is_query_error(err) ? kExitQueryError : kExitRuntimeError;
    }
}

int run_check(const std::string& query_text) {
    try {
        snel::Query query = snel::parse_query(query_text);
        snel::typecheck(query);
        std::cout << snel::dump(query) << "\n";
        return kExitOk;
    } catch (const snel::Error& err) {
        std::cerr << snel::render_diagnostic(query_text, err);
        return is_query_error(err) ? kExitQueryError : kExitRuntimeError;
    }
}

bool handle_meta_command(const std::string& line, Session& session, bool& quit) {
    std::istringstream is(line);
    std::string command;
    is >> command;
    if (command == ":quit" || command == ":q") {
        quit = true;
        return true;
    }
    if (command == ":mode") {
        std::string name;
        is >> name;
        const auto mode = snel::mode_from_name(name);
        if (!mode) {
            std::cerr << "error: :mode takes prob, fuzzy or bool\n";
        } else {
            session.config.mode = *mode;
        }
        return true;
    }
    if (command == ":threshold") {
        double value = 0.0;
        if (!(is >> value) || !(value > 0.0 && value < 1.0)) {
            std::cerr << "error: :threshold takes a number strictly between 0 and 1\n";
        } else {
            session.config.threshold = value;
        }
        return true;
    }
    if (command == ":scene") {
        std::string path;
        is >> path;
        try {
            snel::Scene scene = snel::load_scene(path);
            session.backend->prepare(scene);
            session.scene = std::move(scene);
            session.cache.clear();
            std::cout << "scene '" << session.scene.id << "' loaded ("
                      << session.scene.size() << " entities)\n";
        } catch (const snel::Error& err) {
            std::cerr << "error: " << err.what() << "\n";
        }
        return true;
    }
    if (!command.empty() && command[0] == ':') {
        std::cerr << "error: unknown command " << command
                  << " (try :mode, :threshold, :scene, :quit)\n";
        return true;
    }
    return false;
}

int run_repl(const Options& opts) {
    OutputFormat format = resolve_output(opts);
    Session session;
    try {
        session = open_session(opts);
    } catch (const snel::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitRuntimeError;
    }

    std::cout << "snel repl — scene '" << session.scene.id << "' (" << session.scene.size()
              << " entities), mode " << snel::mode_name(session.config.mode)
              << ". :quit to leave.\n";

    std::string line;
    bool quit = false;
    while (!quit && (std::cout << "snel> " << std::flush, std::getline(std::cin, line))) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (handle_meta_command(line, session, quit)) continue;
        try {
            snel::Query query = snel::parse_query(line);
            snel::typecheck(query);
            const snel::Value value = snel::evaluate_query(query, session.scene, *session.backend,
                                                           session.config, session.cache);
            print_result(value, format);
        } catch (const snel::Error& err) {
            std::cerr << snel::render_diagnostic(line, err);
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"snel — structured entity queries over multimodal scenes"};
    app.require_subcommand(1);

    Options opts;
    std::string query_text;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scene", opts.scene_path, "scene file (JSON)");
        cmd->add_option("--mode", opts.mode, "score interpretation: prob|fuzzy|bool")
            ->check(CLI::IsMember({"prob", "fuzzy", "bool"}));
        cmd->add_option("--threshold", opts.threshold, "selection threshold in (0,1)");
        cmd->add_option("--index-base", opts.index_base, "first entity index: 0 or 1")
            ->check(CLI::IsMember({0, 1}));
        cmd->add_option("--backend", opts.backend,
                        "mock or an http(s) URL (env SNEL_BACKEND_URL when omitted)");
        cmd->add_option("--output", opts.output, "json|pretty (default: pretty on a terminal)")
            ->check(CLI::IsMember({"json", "pretty"}));
    };

    CLI::App* query_cmd = app.add_subcommand("query", "evaluate one query against a scene");
    add_common(query_cmd);
    query_cmd->add_option("query", query_text, "query text")->required();

    CLI::App* repl_cmd = app.add_subcommand("repl", "interactive session");
    add_common(repl_cmd);

    CLI::App* check_cmd = app.add_subcommand("check", "parse and typecheck without evaluating");
    check_cmd->add_option("query", query_text, "query text")->required();

    CLI11_PARSE(app, argc, argv);

    if (query_cmd->parsed()) return run_query(opts, query_text);
    if (check_cmd->parsed()) return run_check(query_text);
    return run_repl(opts);
}
