#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "specrw/convert/converter.hpp"
#include "specrw/essence/param.hpp"
#include "specrw/essence/parser.hpp"
#include "specrw/essence/printer.hpp"
#include "specrw/eval/evaluator.hpp"
#include "specrw/graph/encode.hpp"
#include "specrw/graph/host_format.hpp"
#include "specrw/instances/generator.hpp"
#include "specrw/rules/builtin.hpp"

namespace specrw::cli {

// Exit codes are a stable contract.
inline constexpr int exit_ok = 0;
inline constexpr int exit_parse = 1;
inline constexpr int exit_engine = 2;
inline constexpr int exit_not_applicable = 3;
inline constexpr int exit_too_large = 4;
inline constexpr int exit_verify_failed = 5;

inline const char* rules_dir_env = "SPECREWRITER_RULES_DIR";

struct CommonOptions {
    std::vector<std::string> rule_paths;
    long long fuel = gp2::default_fuel;
    long long max_ground = eval::default_max_ground;
    bool emit_host = false;
    bool directed = false;
    std::optional<std::uint64_t> seed;
};

namespace detail {

inline std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << text;
    return bool(out);
}

inline std::string stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

inline std::string strip_order_prefix(const std::string& name) {
    std::size_t i = 0;
    while (i < name.size() && std::isdigit(static_cast<unsigned char>(name[i]))) ++i;
    if (i > 0 && i < name.size() && (name[i] == '_' || name[i] == '-')) return name.substr(i + 1);
    return name;
}

inline double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

/// Rule sources, in priority order: --rules paths, then $SPECREWRITER_RULES_DIR
/// (*.gp2r in filename order, numeric prefixes stripped from stage names),
/// then the builtin library.
inline Result<std::vector<rules::StageFile>, std::string>
resolve_stages(const std::vector<std::string>& rule_paths) {
    std::vector<rules::StageFile> stages;
    if (!rule_paths.empty()) {
        for (const auto& p : rule_paths) {
            auto text = read_file(p);
            if (!text) return std::string("cannot read rule file: ") + p;
            stages.push_back({strip_order_prefix(stem(p)), *text});
        }
        return stages;
    }
    if (const char* dir = std::getenv(rules_dir_env)) {
        std::vector<std::string> files;
        std::error_code ec;
        for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
            if (entry.path().extension() == ".gp2r") files.push_back(entry.path().string());
        if (ec) return std::string("cannot read rules directory: ") + dir;
        if (files.empty()) return std::string("no .gp2r files in ") + dir;
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            auto text = read_file(f);
            if (!text) return std::string("cannot read rule file: ") + f;
            stages.push_back({strip_order_prefix(stem(f)), *text});
        }
        return stages;
    }
    return rules::builtin_rule_files();
}

inline Result<essence::Specification, std::string> load_spec(const std::string& path) {
    auto text = read_file(path);
    if (!text) return std::string("cannot read ") + path;
    auto spec = essence::parse_spec(*text, stem(path));
    if (!spec.ok()) return path + ": " + spec.error().to_string();
    return *spec;
}

inline Result<eval::Instance, std::string> load_instance(const std::string& path) {
    auto text = read_file(path);
    if (!text) return std::string("cannot read ") + path;
    auto params = essence::parse_param_file(*text);
    if (!params.ok()) return path + ": " + params.error().to_string();
    eval::Instance inst;
    inst.id = stem(path);
    inst.bindings = params->bindings;
    return inst;
}

inline std::string replace_extension(const std::string& path, const std::string& ext) {
    std::filesystem::path p(path);
    p.replace_extension(ext);
    return p.string();
}

} // namespace detail

/// Verifies the rule pipeline parses and runs it on the input specification.
/// Exit 0 on success, 3 when the reformulation does not apply (the input is
/// copied through), 1 on parse/scope errors, 2 on engine failures.
inline int cmd_rewrite(const std::string& input_path, const std::string& out_path,
                       const CommonOptions& opts, std::ostream& out, std::ostream& err) {
    auto text = detail::read_file(input_path);
    if (!text) {
        err << "cannot read " << input_path << "\n";
        return exit_parse;
    }
    auto spec = essence::parse_spec(*text, detail::stem(input_path));
    if (!spec.ok()) {
        err << input_path << ": " << spec.error().to_string() << "\n";
        return exit_parse;
    }
    auto stages = detail::resolve_stages(opts.rule_paths);
    if (!stages.ok()) {
        err << stages.error() << "\n";
        return exit_parse;
    }
    for (const auto& st : *stages) {
        auto parsed = gp2::parse_rule_file(st.text);
        if (!parsed.ok()) {
            err << "rule file '" << st.name << "': " << parsed.error().to_string() << "\n";
            return exit_parse;
        }
    }
    rules::ReformulateOptions ropts;
    ropts.fuel = static_cast<int>(opts.fuel);
    ropts.stages = *stages;
    auto result = rules::reformulate(*spec, ropts);
    if (!result.ok()) {
        err << "engine failure in " << result.error().to_string() << "\n";
        return exit_engine;
    }
    if (opts.emit_host) {
        std::string base = detail::replace_extension(out_path, "");
        detail::write_file(base + ".before.host", graph::write_host_graph(graph::encode(*spec)));
        if (result->applicable)
            detail::write_file(base + ".after.host",
                               graph::write_host_graph(result->rewritten_graph));
    }
    if (!result->applicable) {
        if (!detail::write_file(out_path, *text)) {
            err << "cannot write " << out_path << "\n";
            return exit_parse;
        }
        out << "not applicable: no reformulation pattern matched; input copied to " << out_path
            << "\n";
        return exit_not_applicable;
    }
    if (!detail::write_file(out_path, essence::print_spec(result->rewritten))) {
        err << "cannot write " << out_path << "\n";
        return exit_parse;
    }
    out << "rewrote " << input_path << " -> " << out_path << " ("
        << result->rule_applications << " rule applications, aux domain '"
        << result->aux_domain_name << "')\n";
    return exit_ok;
}

/// Solves a specification against an instance by brute-force enumeration and
/// writes numbered .solution files. Exit 4 when the candidate space exceeds
/// --max-ground.
inline int cmd_solve(const std::string& spec_path, const std::string& param_path,
                     const std::string& out_prefix, long long limit, const CommonOptions& opts,
                     std::ostream& out, std::ostream& err) {
    auto spec = detail::load_spec(spec_path);
    if (!spec.ok()) {
        err << spec.error() << "\n";
        return exit_parse;
    }
    auto inst = detail::load_instance(param_path);
    if (!inst.ok()) {
        err << inst.error() << "\n";
        return exit_parse;
    }
    eval::SolveOptions sopts;
    sopts.limit = limit;
    sopts.max_ground = opts.max_ground;
    auto solutions = eval::solve(*spec, *inst, sopts);
    if (!solutions.ok()) {
        err << "solve: " << solutions.error().message << "\n";
        return solutions.error().too_large ? exit_too_large : exit_parse;
    }
    std::string prefix = out_prefix.empty() ? detail::stem(param_path) : out_prefix;
    for (std::size_t i = 0; i < solutions->size(); ++i) {
        essence::ParamFile file;
        for (const auto& [name, value] : (*solutions)[i]) file.bindings.emplace_back(name, value);
        std::ostringstream path;
        path << prefix << "." << std::setw(6) << std::setfill('0') << (i + 1) << ".solution";
        if (!detail::write_file(path.str(), essence::print_param_file(file))) {
            err << "cannot write " << path.str() << "\n";
            return exit_parse;
        }
    }
    out << solutions->size() << " solutions\n";
    return exit_ok;
}

/// Emits the solution-converter specification for an (original, rewritten)
/// pair. Exit 3 when the find domains are identical (no conversion needed).
inline int cmd_gen_converter(const std::string& original_path, const std::string& rewritten_path,
                             const std::string& out_path, std::ostream& out, std::ostream& err) {
    auto original = detail::load_spec(original_path);
    if (!original.ok()) {
        err << original.error() << "\n";
        return exit_parse;
    }
    auto rewritten = detail::load_spec(rewritten_path);
    if (!rewritten.ok()) {
        err << rewritten.error() << "\n";
        return exit_parse;
    }
    auto conv = conv::generate_converter(*original, *rewritten);
    if (!conv.ok()) {
        if (conv.error().kind == conv::ConvError::Kind::NoConversionNeeded) {
            out << conv.error().message << "\n";
            return exit_not_applicable;
        }
        err << "unsupported: " << conv.error().message << "\n";
        return exit_parse;
    }
    if (!detail::write_file(out_path, essence::print_spec(conv->spec))) {
        err << "cannot write " << out_path << "\n";
        return exit_parse;
    }
    out << "wrote converter specification to " << out_path << "\n";
    return exit_ok;
}

/// Converts a rewritten-type solution back to the original type in-process.
inline int cmd_convert(const std::string& original_path, const std::string& param_path,
                       const std::string& solution_path, const std::string& out_path,
                       const CommonOptions& opts, std::ostream& out, std::ostream& err) {
    auto original = detail::load_spec(original_path);
    if (!original.ok()) {
        err << original.error() << "\n";
        return exit_parse;
    }
    auto inst = detail::load_instance(param_path);
    if (!inst.ok()) {
        err << inst.error() << "\n";
        return exit_parse;
    }
    auto solution_text = detail::read_file(solution_path);
    if (!solution_text) {
        err << "cannot read " << solution_path << "\n";
        return exit_parse;
    }
    auto solution = essence::parse_param_file(*solution_text);
    if (!solution.ok()) {
        err << solution_path << ": " << solution.error().to_string() << "\n";
        return exit_parse;
    }
    const essence::Declaration* find = nullptr;
    for (const auto& d : original->declarations)
        if (d.kind == essence::Declaration::Kind::Find) find = &d;
    if (!find) {
        err << original_path << ": no find declaration\n";
        return exit_parse;
    }
    const eval::Value* f = solution->find(find->name);
    if (!f) {
        err << solution_path << ": does not bind '" << find->name << "'\n";
        return exit_parse;
    }
    try {
        eval::Env env = eval::build_env(*original, *inst, opts.max_ground);
        auto converted = conv::convert_solution(*f, *find->domain, env);
        if (!converted.ok()) {
            err << "conversion failed: " << converted.error().message << "\n";
            return converted.error().kind == eval::EvalError::Kind::DomainMismatch
                       ? exit_verify_failed
                       : exit_parse;
        }
        essence::ParamFile file;
        file.bindings.emplace_back(find->name, *converted);
        if (!detail::write_file(out_path, essence::print_param_file(file))) {
            err << "cannot write " << out_path << "\n";
            return exit_parse;
        }
        out << "wrote converted solution to " << out_path << "\n";
        return exit_ok;
    } catch (eval::EvalError& e) {
        err << "conversion failed: " << e.message << "\n";
        return e.kind == eval::EvalError::Kind::TooLarge ? exit_too_large : exit_parse;
    }
}

/// Checks a candidate solution against the original specification's
/// constraints. Exit 5 when any constraint fails.
inline int cmd_validate(const std::string& original_path, const std::string& param_path,
                        const std::string& solution_path, const CommonOptions& opts,
                        std::ostream& out, std::ostream& err) {
    auto original = detail::load_spec(original_path);
    if (!original.ok()) {
        err << original.error() << "\n";
        return exit_parse;
    }
    auto inst = detail::load_instance(param_path);
    if (!inst.ok()) {
        err << inst.error() << "\n";
        return exit_parse;
    }
    auto solution_text = detail::read_file(solution_path);
    if (!solution_text) {
        err << "cannot read " << solution_path << "\n";
        return exit_parse;
    }
    auto solution = essence::parse_param_file(*solution_text);
    if (!solution.ok()) {
        err << solution_path << ": " << solution.error().to_string() << "\n";
        return exit_parse;
    }
    const essence::Declaration* find = nullptr;
    for (const auto& d : original->declarations)
        if (d.kind == essence::Declaration::Kind::Find) find = &d;
    if (!find || !solution->find(find->name)) {
        err << "solution does not bind the find declaration\n";
        return exit_parse;
    }
    auto result = conv::validate(*original, *inst, *solution->find(find->name), opts.max_ground);
    if (!result.ok()) {
        err << result.error() << "\n";
        return exit_parse;
    }
    if (result->valid) {
        out << "valid\n";
        return exit_ok;
    }
    out << "invalid; failing constraints:\n";
    for (const auto& c : result->failing) out << "  " << c << "\n";
    return exit_verify_failed;
}

/// Grid configuration file: `key = v1, v2, ...` lines with keys
/// n, density, cpn, multiplier, seed.
inline Result<inst::GridConfig, std::string> parse_grid_config(const std::string& text) {
    inst::GridConfig cfg;
    std::istringstream lines(text);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
            if (blank) continue;
            return "grid config line " + std::to_string(line_no) + ": expected key = values";
        }
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t\r");
            std::size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::vector<long long> values;
        std::istringstream vs(line.substr(eq + 1));
        std::string item;
        while (std::getline(vs, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                values.push_back(std::stoll(item));
            } catch (...) {
                return "grid config line " + std::to_string(line_no) + ": bad integer '" + item +
                       "'";
            }
        }
        if (key == "n") cfg.n_values = values;
        else if (key == "density") cfg.edge_density_percents = values;
        else if (key == "cpn") cfg.cpn_values = values;
        else if (key == "multiplier") cfg.colours_multipliers = values;
        else if (key == "seed" && values.size() == 1) cfg.seed = static_cast<std::uint64_t>(values[0]);
        else return "grid config line " + std::to_string(line_no) + ": unknown key '" + key + "'";
    }
    return cfg;
}

namespace detail {

inline int write_instances(const std::vector<eval::Instance>& instances,
                           const std::string& out_dir, std::ostream& out, std::ostream& err) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    for (const auto& i : instances) {
        essence::ParamFile file;
        file.bindings = i.bindings;
        std::string path = (std::filesystem::path(out_dir) / (i.id + ".param")).string();
        if (!write_file(path, essence::print_param_file(file))) {
            err << "cannot write " << path << "\n";
            return exit_parse;
        }
    }
    out << instances.size() << " instance" << (instances.size() == 1 ? "" : "s") << " written to "
        << out_dir << "\n";
    return exit_ok;
}

} // namespace detail

/// Generates a .param file per grid point into out_dir.
inline int cmd_gen_instances(const std::string& grid_path, const std::string& out_dir,
                             const CommonOptions& opts, std::ostream& out, std::ostream& err) {
    auto text = detail::read_file(grid_path);
    if (!text) {
        err << "cannot read " << grid_path << "\n";
        return exit_parse;
    }
    auto cfg = parse_grid_config(*text);
    if (!cfg.ok()) {
        err << cfg.error() << "\n";
        return exit_parse;
    }
    if (opts.seed) cfg->seed = *opts.seed;
    auto instances = inst::generate_grid(*cfg, opts.directed);
    if (!instances.ok()) {
        err << instances.error().message << "\n";
        return exit_parse;
    }
    return detail::write_instances(*instances, out_dir, out, err);
}

/// Turns an .edges file into a single .param instance (symmetric closure
/// unless --directed).
inline int cmd_gen_instance_from_edges(const std::string& edges_path, long long number_colours,
                                       long long colours_per_node, const std::string& out_dir,
                                       const CommonOptions& opts, std::ostream& out,
                                       std::ostream& err) {
    auto text = detail::read_file(edges_path);
    if (!text) {
        err << "cannot read " << edges_path << "\n";
        return exit_parse;
    }
    auto g = inst::read_edge_list(*text, opts.directed);
    if (!g.ok()) {
        err << edges_path << ":" << g.error().line << ": " << g.error().message << "\n";
        return exit_parse;
    }
    if (number_colours < 1 || colours_per_node < 1) {
        err << "--number-colours and --colours-per-node must be >= 1\n";
        return exit_parse;
    }
    std::ostringstream id;
    id << detail::stem(edges_path) << "_nc" << number_colours << "_cpn" << colours_per_node;
    eval::Instance instance =
        inst::edge_list_to_param(*g, number_colours, colours_per_node, id.str());
    return detail::write_instances({instance}, out_dir, out, err);
}

struct InstanceRecord {
    std::string id;
    std::string bijection = "skipped(TooLarge)";  // pass | fail | skipped(TooLarge)
    std::string validation = "skipped(TooLarge)"; // pass | fail | skipped(TooLarge)
    long long orig_count = -1;
    long long rew_count = -1;
    double t_solve_orig_ms = 0;
    double t_solve_rew_ms = 0;
    double t_convert_ms = 0;
    double t_validate_ms = 0;
    int rule_apps = 0;

    bool failed() const { return bijection == "fail" || validation == "fail"; }

    std::string machine_line() const {
        std::ostringstream os;
        os << "instance=" << id << " orig_count=" << orig_count << " rew_count=" << rew_count
           << " bijection=" << bijection << " validation=" << validation << std::fixed
           << std::setprecision(3) << " t_solve_orig_ms=" << t_solve_orig_ms
           << " t_solve_rew_ms=" << t_solve_rew_ms << " t_convert_ms=" << t_convert_ms
           << " t_validate_ms=" << t_validate_ms << " rule_apps=" << rule_apps;
        return os.str();
    }
};

struct RunReport {
    std::vector<InstanceRecord> records;

    bool all_passed() const {
        for (const auto& r : records)
            if (r.failed()) return false;
        return true;
    }
};

/// Reformulates the specification once, then checks, per instance, that the
/// original and rewritten specifications have the same number of solutions
/// and that direct conversion maps the rewritten solutions bijectively onto
/// the original ones, each converted solution validating against the original
/// constraints. Exit 5 on any fail; TooLarge instances are recorded as
/// skipped.
inline int cmd_verify(const std::string& original_path, const std::string& inst_path,
                      const std::string& grid_path, const CommonOptions& opts, std::ostream& out,
                      std::ostream& err, RunReport* report_out = nullptr) {
    auto original = detail::load_spec(original_path);
    if (!original.ok()) {
        err << original.error() << "\n";
        return exit_parse;
    }
    auto stages = detail::resolve_stages(opts.rule_paths);
    if (!stages.ok()) {
        err << stages.error() << "\n";
        return exit_parse;
    }
    rules::ReformulateOptions ropts;
    ropts.fuel = static_cast<int>(opts.fuel);
    ropts.stages = *stages;
    auto reformulated = rules::reformulate(*original, ropts);
    if (!reformulated.ok()) {
        err << "engine failure in " << reformulated.error().to_string() << "\n";
        return exit_engine;
    }
    if (!reformulated->applicable) {
        err << "reformulation is not applicable to " << original_path << "\n";
        return exit_not_applicable;
    }

    std::vector<eval::Instance> instances;
    if (!inst_path.empty()) {
        auto inst = detail::load_instance(inst_path);
        if (!inst.ok()) {
            err << inst.error() << "\n";
            return exit_parse;
        }
        instances.push_back(*inst);
    } else {
        auto text = detail::read_file(grid_path);
        if (!text) {
            err << "cannot read " << grid_path << "\n";
            return exit_parse;
        }
        auto cfg = parse_grid_config(*text);
        if (!cfg.ok()) {
            err << cfg.error() << "\n";
            return exit_parse;
        }
        if (opts.seed) cfg->seed = *opts.seed;
        auto generated = inst::generate_grid(*cfg, opts.directed);
        if (!generated.ok()) {
            err << generated.error().message << "\n";
            return exit_parse;
        }
        instances = *generated;
    }

    RunReport report;
    bool any_fail = false;
    eval::SolveOptions sopts;
    sopts.max_ground = opts.max_ground;
    const essence::Declaration* orig_find = nullptr;
    for (const auto& d : original->declarations)
        if (d.kind == essence::Declaration::Kind::Find) orig_find = &d;

    for (const auto& instance : instances) {
        InstanceRecord rec;
        rec.id = instance.id;
        rec.rule_apps = reformulated->rule_applications;

        auto t0 = std::chrono::steady_clock::now();
        auto orig_sols = eval::solve(*original, instance, sopts);
        rec.t_solve_orig_ms = detail::ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        auto rew_sols = eval::solve(reformulated->rewritten, instance, sopts);
        rec.t_solve_rew_ms = detail::ms_since(t0);

        if (!orig_sols.ok() || !rew_sols.ok()) {
            bool too_large = (!orig_sols.ok() && orig_sols.error().too_large) ||
                             (!rew_sols.ok() && rew_sols.error().too_large);
            if (!too_large) {
                err << "instance " << instance.id << ": "
                    << (!orig_sols.ok() ? orig_sols.error().message : rew_sols.error().message)
                    << "\n";
                return exit_parse;
            }
            report.records.push_back(rec); // skipped
            continue;
        }
        rec.orig_count = static_cast<long long>(orig_sols->size());
        rec.rew_count = static_cast<long long>(rew_sols->size());

        try {
            eval::Env env = eval::build_env(*original, instance, opts.max_ground);
            t0 = std::chrono::steady_clock::now();
            std::vector<eval::Value> converted;
            for (const auto& s : *rew_sols) {
                auto c = conv::convert_solution(s.at(orig_find->name), *orig_find->domain, env);
                if (!c.ok()) throw eval::EvalError{c.error().kind, c.error().message};
                converted.push_back(*c);
            }
            rec.t_convert_ms = detail::ms_since(t0);

            std::vector<eval::Value> originals;
            for (const auto& s : *orig_sols) originals.push_back(s.at(orig_find->name));
            std::vector<eval::Value> converted_sorted = converted;
            std::sort(converted_sorted.begin(), converted_sorted.end());
            std::sort(originals.begin(), originals.end());
            bool injective = std::adjacent_find(converted_sorted.begin(), converted_sorted.end()) ==
                             converted_sorted.end();
            bool bijective = injective && converted_sorted == originals &&
                             rec.orig_count == rec.rew_count;
            rec.bijection = bijective ? "pass" : "fail";
            if (!bijective && !any_fail) {
                any_fail = true;
                err << "instance " << instance.id << ": solution sets do not correspond ("
                    << rec.orig_count << " original vs " << rec.rew_count << " rewritten)\n";
                // smallest witness on either side
                for (const auto& v : converted_sorted)
                    if (!std::binary_search(originals.begin(), originals.end(), v)) {
                        err << "  converted solution not valid for the original: "
                            << eval::print_value(v) << "\n";
                        break;
                    }
                for (const auto& v : originals)
                    if (!std::binary_search(converted_sorted.begin(), converted_sorted.end(), v)) {
                        err << "  original solution missed by conversion: " << eval::print_value(v)
                            << "\n";
                        break;
                    }
            }

            t0 = std::chrono::steady_clock::now();
            bool all_valid = true;
            for (const auto& c : converted) {
                auto v = conv::validate(*original, instance, c, opts.max_ground);
                if (!v.ok()) throw eval::EvalError{eval::EvalError::Kind::TypeMismatch, v.error()};
                if (!v->valid) {
                    all_valid = false;
                    if (rec.bijection == "pass" && !any_fail) {
                        any_fail = true;
                        err << "instance " << instance.id
                            << ": converted solution fails validation: " << eval::print_value(c)
                            << "\n";
                    }
                    break;
                }
            }
            rec.t_validate_ms = detail::ms_since(t0);
            rec.validation = all_valid ? "pass" : "fail";
            if (!all_valid) any_fail = true;
        } catch (eval::EvalError& e) {
            if (e.kind == eval::EvalError::Kind::TooLarge) {
                report.records.push_back(rec);
                continue;
            }
            err << "instance " << instance.id << ": " << e.message << "\n";
            return exit_parse;
        }
        if (rec.failed()) any_fail = true;
        report.records.push_back(rec);
    }

    // table
    out << std::left << std::setw(24) << "instance" << std::right << std::setw(8) << "orig"
        << std::setw(8) << "rew" << "  " << std::left << std::setw(18) << "bijection"
        << std::setw(18) << "validation" << std::right << std::setw(12) << "t_orig_ms"
        << std::setw(12) << "t_rew_ms" << std::setw(12) << "t_conv_ms" << std::setw(8) << "apps"
        << "\n";
    for (const auto& r : report.records) {
        out << std::left << std::setw(24) << r.id << std::right << std::setw(8) << r.orig_count
            << std::setw(8) << r.rew_count << "  " << std::left << std::setw(18) << r.bijection
            << std::setw(18) << r.validation << std::right << std::fixed << std::setprecision(2)
            << std::setw(12) << r.t_solve_orig_ms << std::setw(12) << r.t_solve_rew_ms
            << std::setw(12) << r.t_convert_ms << std::setw(8) << r.rule_apps << "\n";
    }
    for (const auto& r : report.records) out << r.machine_line() << "\n";

    if (report_out) *report_out = report;
    return any_fail ? exit_verify_failed : exit_ok;
}

} // namespace specrw::cli
