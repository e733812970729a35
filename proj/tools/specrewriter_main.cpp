#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specrw/cli/commands.hpp"

using namespace specrw;

int main(int argc, char** argv) {
    CLI::App app{"Essence-subset reformulation toolkit: graph-rewrite specifications, "
                 "brute-force solve them, and convert/validate solutions"};
    app.require_subcommand(1);

    cli::CommonOptions opts;
    long long seed_value = -1;

    auto add_common = [&](CLI::App* cmd, bool rules = false, bool engine = false) {
        cmd->add_option("--max-ground", opts.max_ground,
                        "candidate-count cap before enumeration (default 10^7)");
        if (rules) {
            cmd->add_option("--rules", opts.rule_paths,
                            "rule files replacing the builtin pipeline (in order)");
        }
        if (engine) {
            cmd->add_option("--fuel", opts.fuel, "rule-application budget (default 10000)");
        }
    };

    // rewrite
    std::string input, output = "out.essence";
    auto* rewrite = app.add_subcommand("rewrite", "reformulate a specification");
    rewrite->add_option("input", input, "input .essence file")->required();
    rewrite->add_option("-o,--out", output, "output .essence file")->required();
    rewrite->add_flag("--emit-host", opts.emit_host, "also write before/after .host graphs");
    add_common(rewrite, /*rules=*/true, /*engine=*/true);

    // solve
    std::string spec_path, param_path, out_prefix;
    long long limit = -1;
    auto* solve = app.add_subcommand("solve", "enumerate solutions by brute force");
    solve->add_option("spec", spec_path, "specification .essence file")->required();
    solve->add_option("param", param_path, "instance .param file")->required();
    solve->add_option("-o,--out", out_prefix, "solution file prefix (default: param stem)");
    solve->add_option("--limit", limit, "stop after N solutions");
    add_common(solve);

    // gen-converter
    std::string rewritten_path, conv_out = "converter.essence";
    auto* genconv = app.add_subcommand("gen-converter", "emit the solution-converter spec");
    genconv->add_option("original", spec_path, "original .essence file")->required();
    genconv->add_option("rewritten", rewritten_path, "rewritten .essence file")->required();
    genconv->add_option("-o,--out", conv_out, "output .essence file")->required();

    // convert
    std::string solution_path, converted_out = "converted.solution";
    auto* convert = app.add_subcommand("convert", "convert a rewritten solution back");
    convert->add_option("original", spec_path, "original .essence file")->required();
    convert->add_option("param", param_path, "instance .param file")->required();
    convert->add_option("solution", solution_path, "rewritten .solution file")->required();
    convert->add_option("-o,--out", converted_out, "output .solution file")->required();
    add_common(convert);

    // validate
    auto* validate = app.add_subcommand("validate", "check a solution against a specification");
    validate->add_option("original", spec_path, "original .essence file")->required();
    validate->add_option("param", param_path, "instance .param file")->required();
    validate->add_option("solution", solution_path, "candidate .solution file")->required();
    add_common(validate);

    // gen-instances
    std::string grid_path, edges_path, out_dir = ".";
    long long number_colours = 0, colours_per_node = 0;
    auto* geninst = app.add_subcommand("gen-instances",
                                       "generate .param instances from a grid or an edge list");
    geninst->add_option("--grid", grid_path, "grid configuration file");
    geninst->add_option("--edges", edges_path, "edge-list file (one instance)");
    geninst->add_option("--number-colours", number_colours, "numberColours for --edges");
    geninst->add_option("--colours-per-node", colours_per_node, "coloursPerNode for --edges");
    geninst->add_option("-o,--out", out_dir, "output directory");
    geninst->add_option("--seed", seed_value, "override the grid seed");
    geninst->add_flag("--directed", opts.directed, "store edges exactly as given/sampled");

    // verify
    std::string inst_path;
    auto* verify = app.add_subcommand("verify", "solution-set equivalence report");
    verify->add_option("original", spec_path, "original .essence file")->required();
    verify->add_option("--inst", inst_path, "single instance .param file");
    verify->add_option("--grid", grid_path, "grid configuration file");
    verify->add_option("--seed", seed_value, "override the grid seed");
    verify->add_flag("--directed", opts.directed, "generate directed edge sets");
    add_common(verify, /*rules=*/true, /*engine=*/true);

    CLI11_PARSE(app, argc, argv);
    if (seed_value >= 0) opts.seed = static_cast<std::uint64_t>(seed_value);

    if (rewrite->parsed())
        return cli::cmd_rewrite(input, output, opts, std::cout, std::cerr);
    if (solve->parsed())
        return cli::cmd_solve(spec_path, param_path, out_prefix, limit, opts, std::cout, std::cerr);
    if (genconv->parsed())
        return cli::cmd_gen_converter(spec_path, rewritten_path, conv_out, std::cout, std::cerr);
    if (convert->parsed())
        return cli::cmd_convert(spec_path, param_path, solution_path, converted_out, opts,
                                std::cout, std::cerr);
    if (validate->parsed())
        return cli::cmd_validate(spec_path, param_path, solution_path, opts, std::cout, std::cerr);
    if (geninst->parsed()) {
        if (grid_path.empty() == edges_path.empty()) {
            std::cerr << "gen-instances needs exactly one of --grid or --edges\n";
            return cli::exit_parse;
        }
        if (!edges_path.empty())
            return cli::cmd_gen_instance_from_edges(edges_path, number_colours, colours_per_node,
                                                    out_dir, opts, std::cout, std::cerr);
        return cli::cmd_gen_instances(grid_path, out_dir, opts, std::cout, std::cerr);
    }
    if (verify->parsed()) {
        if (inst_path.empty() == grid_path.empty()) {
            std::cerr << "verify needs exactly one of --inst or --grid\n";
            return cli::exit_parse;
        }
        return cli::cmd_verify(spec_path, inst_path, grid_path, opts, std::cout, std::cerr);
    }
    return cli::exit_parse;
}
