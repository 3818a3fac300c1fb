// qdec: command-line front end. Exit codes: 0 ok, 1 bound violation, 2 malformed input, 3 internal error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "qdec/coding.hpp"

namespace {

using qdec::io::json;
using qdec::ExperimentConfig;

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::string csv(const qdec::cli::Table& t) {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
        os << "\n";
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return os.str();
}

// key,value rows for the scalar fields of a result.
qdec::cli::Table scalars(const json& j) {
    qdec::cli::Table t;
    t.header = {"key", "value"};
    for (const auto& [k, v] : j.items())
        if (v.is_primitive()) t.rows.push_back({k, v.is_string() ? v.get<std::string>() : v.dump()});
    return t;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw qdec::io::InputError("cannot write " + p.string());
    f << text;
}

json merged_result(const ExperimentConfig& cfg, const qdec::cli::Outcome& o) {
    json j = o.result;
    j["command"] = cfg.command;
    j["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
    j["bounds_hold"] = o.bounds_hold;
    return j;
}

void emit(const ExperimentConfig& cfg, const qdec::cli::Outcome& o, const std::string& format) {
    const json result = merged_result(cfg, o);
    if (!cfg.out_dir.empty()) {
        const std::filesystem::path dir(cfg.out_dir);
        std::filesystem::create_directories(dir);
        write_text(dir / "config.json", to_json(cfg).dump(2) + "\n");
        write_text(dir / "result.json", result.dump(2) + "\n");
        if (!o.samples.empty()) write_text(dir / "samples.csv", csv(o.samples));
        if (!o.svg.empty()) write_text(dir / "plot.svg", o.svg);
        for (const auto& [name, j] : o.extras) write_text(dir / (name + ".json"), j.dump(2) + "\n");
    }
    if (format == "csv")
        std::cout << csv(o.samples.empty() ? scalars(result) : o.samples);
    else
        std::cout << result.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qdec: one-shot decoupling, coding, rate and locking experiments"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    ExperimentConfig cfg;
    std::string format = "json", config_path;
    app.add_option("--seed", cfg.seed, "root seed for every random draw")->envname("QDEC_SEED");
    app.add_option("--samples", cfg.samples, "sample count (0: command default)")->check(CLI::NonNegativeNumber);
    app.add_option("--eps", cfg.eps, "smoothing or target error");
    app.add_option("--tolerance", cfg.tolerance, "tolerance of the declared bound checks");
    app.add_option("--out", cfg.out_dir, "directory for config, result, CSV and SVG files");
    app.add_option("--format", format, "stdout format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--config", config_path, "rerun a saved config.json");

    json& params = cfg.params;
    auto& inputs = cfg.inputs;
    auto file = [&](CLI::App* sub, const std::string& flag, const std::string& role, const std::string& help) {
        sub->add_option_function<std::string>(flag, [&inputs, role](const std::string& v) { inputs[role] = v; }, help);
    };
    auto text = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
        sub->add_option_function<std::string>(flag, [&params, key](const std::string& v) { params[key] = v; }, help);
    };
    auto integer = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
        sub->add_option_function<int>(flag, [&params, key](const int& v) { params[key] = v; }, help);
    };
    auto labels = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
        sub->add_option_function<std::vector<std::string>>(
               flag, [&params, key](const std::vector<std::string>& v) { params[key] = v; }, help)
            ->delimiter(',');
    };

    CLI::App* ent = app.add_subcommand("entropy", "smooth min-, collision-, max- or von Neumann entropy of a state");
    file(ent, "--state", "state", "state file (pure or density)");
    text(ent, "--kind", "kind", "hmin | h2 | hmax | vn");
    labels(ent, "--a", "a", "labels of the measured system, comma separated");
    labels(ent, "--b", "b", "labels of the conditioning system");

    CLI::App* dec = app.add_subcommand("decouple", "Monte Carlo decoupling experiment against its bound");
    text(dec, "--corollary", "corollary", "fqsw | merge | subspace | projective-merge");
    integer(dec, "--dim-a", "dim_a", "system dimension");
    integer(dec, "--split", "split", "kept factor (fqsw) or output dimension");
    integer(dec, "--split2", "split2", "second output factor (projective-merge)");
    integer(dec, "--dim-r", "dim_r", "reference dimension");
    text(dec, "--sampler", "sampler", "haar | clifford");
    file(dec, "--state", "state", "density on (system, reference); random pure when absent");

    CLI::App* code = app.add_subcommand("code", "build and simulate a one-shot code");
    file(code, "--message", "message", "message state");
    file(code, "--message2", "message2", "second message state (broadcast)");
    file(code, "--channel", "channel", "channel file");
    file(code, "--sigma", "sigma", "channel input state with its copy");
    file(code, "--side", "side", "side-information state (side, copy)");
    labels(code, "--roles", "roles", "message,receiver,reference labels");
    labels(code, "--roles2", "roles2", "roles of the second message");
    text(code, "--preset", "preset", "identity");
    integer(code, "--message-dim", "message_dim", "preset message dimension");
    integer(code, "--input-dim", "input_dim", "preset channel dimension");
    integer(code, "--first-round", "first_round", "samples in the first search round");
    integer(code, "--max-round", "max_round", "largest search round");

    CLI::App* rate = app.add_subcommand("rate", "rate region of a channel for a fixed or optimized input");
    file(rate, "--channel", "channel", "channel file");
    file(rate, "--sigma", "sigma", "input state on (messages, channel inputs)");
    file(rate, "--side", "side", "side-information state (side, copy)");
    rate->add_flag_callback("--optimize", [&params] { params["optimize"] = true; }, "search over inputs");
    integer(rate, "--dim-a", "dim_a", "message dimension for the search");
    integer(rate, "--dim-d", "dim_d", "discarded system dimension (1: pure inputs)");
    integer(rate, "--restarts", "restarts", "search restarts");
    labels(rate, "--messages", "messages", "message labels of a two-receiver input");

    CLI::App* lock = app.add_subcommand("lock", "leakage of a random locking scheme");
    integer(lock, "--messages", "messages", "number of messages");
    integer(lock, "--dimC", "dim_c", "cyphertext dimension");
    integer(lock, "--dimK", "dim_k", "key dimension");
    integer(lock, "--restarts", "restarts", "measurement search restarts");
    integer(lock, "--iterations", "iterations", "iterations per restart");

    CLI::App* mom = app.add_subcommand("moments", "second moment of U x U: sampled against closed form");
    integer(mom, "--dim", "dim", "dimension of U");
    text(mom, "--sampler", "sampler", "haar | clifford");

    CLI::App* suite = app.add_subcommand("suite", "acceptance criteria");
    suite->add_flag("--all", "run every criterion (the default)");
    suite->add_option_function<std::vector<int>>(
             "--criteria", [&params](const std::vector<int>& v) { params["criteria"] = v; }, "criterion numbers")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!config_path.empty()) {
            const std::string out = cfg.out_dir;
            cfg = qdec::config_from_json(qdec::io::read_file(config_path));
            if (!out.empty()) cfg.out_dir = out;
        } else {
            if (app.get_subcommands().empty()) {
                std::cerr << app.help();
                return 2;
            }
            cfg.command = app.get_subcommands().front()->get_name();
        }
        const auto outcome = qdec::cli::run(cfg);
        emit(cfg, outcome, format);
        return outcome.bounds_hold ? 0 : 1;
    } catch (const qdec::coding::BudgetExhausted& e) {
        std::cerr << "bound check failed: " << e.what() << "\n";
        return 1;
    } catch (const qdec::io::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
