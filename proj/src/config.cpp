#include "nsdasf/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

namespace nsdasf {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw config_error("config: invalid boolean for " + key + ": " + v);
}

}  // namespace

void ExperimentConfig::validate() const {
    if (node_count <= 0 || channels_per_node <= 0 || output_count <= 0)
        throw config_error("config: network dimensions must be positive");
    if (output_count > channels_per_node)
        throw config_error("config: Q must not exceed M_k");
    if (lambda < 0) throw config_error("config: lambda must be nonnegative");
    if (noise_std <= 0) throw config_error("config: noise_std must be positive");
    if (n_samples <= 0) throw config_error("config: N must be positive");
    if (runs <= 0) throw config_error("config: runs must be positive");
    if (iterations < 0) throw config_error("config: iterations must be nonnegative");
    if (solver.max_iterations <= 0 || solver.tolerance <= 0 || solver.step_ratio <= 0)
        throw config_error("config: invalid solver options");
    if (bytes_per_scalar <= 0) throw config_error("config: bytes_per_scalar must be positive");
    if (output.empty()) throw config_error("config: output path must be set");
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config: malformed section at line " + std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            if (section != "network" && section != "problem" && section != "solver" &&
                section != "experiment")
                throw config_error("config: unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: expected key = value at line " + std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw config_error("config: empty key or value at line " + std::to_string(line_no));

        const std::string scoped = section + "." + key;
        try {
            if (scoped == "network.K") cfg.node_count = std::stoi(value);
            else if (scoped == "network.M_k") cfg.channels_per_node = std::stoi(value);
            else if (scoped == "network.Q") cfg.output_count = std::stoi(value);
            else if (scoped == "problem.lambda") cfg.lambda = std::stod(value);
            else if (scoped == "problem.noise_std") cfg.noise_std = std::stod(value);
            else if (scoped == "solver.max_iterations") cfg.solver.max_iterations = std::stoi(value);
            else if (scoped == "solver.tolerance") cfg.solver.tolerance = std::stod(value);
            else if (scoped == "solver.step_ratio") cfg.solver.step_ratio = std::stod(value);
            else if (scoped == "experiment.type") {
                if (value == "static") cfg.experiment = ExperimentKind::Static;
                else if (value == "tracking") cfg.experiment = ExperimentKind::Tracking;
                else if (value == "custom") cfg.experiment = ExperimentKind::Custom;
                else throw config_error("config: unknown experiment type " + value);
            }
            else if (scoped == "experiment.N") cfg.n_samples = std::stoi(value);
            else if (scoped == "experiment.runs") cfg.runs = std::stoi(value);
            else if (scoped == "experiment.iterations") cfg.iterations = std::stoi(value);
            else if (scoped == "experiment.mode") {
                if (value == "batch") cfg.mode = RunMode::Batch;
                else if (value == "adaptive") cfg.mode = RunMode::Adaptive;
                else throw config_error("config: unknown mode " + value);
            }
            else if (scoped == "experiment.seed") cfg.seed = std::stoull(value);
            else if (scoped == "experiment.cache_gamma") cfg.cache_gamma = parse_bool(value, key);
            else if (scoped == "experiment.bytes_per_scalar")
                cfg.bytes_per_scalar = std::stoi(value);
            else if (scoped == "experiment.dump_trace") cfg.dump_trace = parse_bool(value, key);
            else if (scoped == "experiment.output") cfg.output = value;
            else throw config_error("config: unknown key " + scoped);
        } catch (const std::invalid_argument&) {
            throw config_error("config: invalid value for " + scoped + ": " + value);
        } catch (const std::out_of_range&) {
            throw config_error("config: value out of range for " + scoped + ": " + value);
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open " + path);
    return parse_config(in);
}

}  // namespace nsdasf
