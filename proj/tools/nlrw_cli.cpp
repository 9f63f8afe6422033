#include <CLI11.hpp>

#include "nlrw/cli.hpp"

using namespace nlrw;

int main(int argc, char** argv)
{
    CLI::App app{"Non-linear SqPO/DPO graph rewriting"};
    app.require_subcommand(1);

    cli::Options o;
    std::string semantics = "sqpo";
    std::string category;
    std::string format = "text";

    auto common = [&](CLI::App* sub, const std::string& files_help)
    {
        sub->add_option("files", o.files, files_help);
        sub->add_option("--semantics", semantics, "sqpo or dpo")->check(CLI::IsMember({"sqpo", "dpo"}));
        sub->add_option("--category", category, "multigraph or simplegraph; documents must agree");
        sub->add_option("--format", format, "text or dot")->check(CLI::IsMember({"text", "dot"}));
        sub->add_option("--index", o.index, "select one match / element");
        sub->add_option("--match-index", o.index, "alias of --index");
        sub->add_option("--jobs", o.jobs, "worker threads");
        sub->add_option("--seed", o.seed, "seed for random corpora");
        sub->add_option("--max-size", o.max_size, "vertex and edge bound for generated graphs");
        sub->add_option("--samples", o.samples, "random instances for oracle runs");
    };

    struct Verb
    {
        const char* name;
        const char* help;
        const char* files;
        cli::Command cmd;
    };
    const std::vector<Verb> verbs = {
        {"matches", "list matches of a rule in a host", "RULE HOST", cli::cmd_matches},
        {"apply", "apply a rule along the match chosen by --index", "RULE HOST", cli::cmd_apply},
        {"compose", "composite rules of RULE2 after RULE1", "RULE1 RULE2", cli::cmd_compose},
        {"synthesize", "composite derivations from two-step derivations", "RULE1 RULE2 HOST", cli::cmd_synthesize},
        {"analyze", "two-step derivations from composite derivations", "RULE1 RULE2 HOST", cli::cmd_analyze},
        {"check-compat", "synthesis/analysis bijection on hosts (default: all up to --max-size)", "RULE1 RULE2 [HOST...]", cli::cmd_check_compat},
        {"multisum", "multi-sum of two graphs", "GRAPH_A GRAPH_B", cli::cmd_multisum},
        {"mpoc", "pushout complements of f, b", "DIAGRAM", cli::cmd_mpoc},
        {"fpa", "FPC-pushout augmentations of alpha, a", "DIAGRAM", cli::cmd_fpa},
        {"fpc", "final pullback complement of f, m", "DIAGRAM", cli::cmd_fpc},
    };
    std::vector<std::pair<CLI::App*, cli::Command>> subs;
    for (const auto& v : verbs)
    {
        auto* sub = app.add_subcommand(v.name, v.help);
        common(sub, v.files);
        subs.emplace_back(sub, v.cmd);
    }
    auto* oracle = app.add_subcommand("oracle", "check a construction against its universal property");
    oracle->add_option("check", o.oracle, "verify-pushout, verify-pullback or verify-fpc")
        ->required()
        ->check(CLI::IsMember({"verify-pushout", "verify-pullback", "verify-fpc"}));
    common(oracle, "[DIAGRAM]");
    subs.emplace_back(oracle, cli::cmd_oracle);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        int code = app.exit(e);
        return code == 0 ? 0 : cli::parse;
    }

    o.semantics = parse_semantics(semantics);
    o.format = format == "dot" ? cli::Format::dot : cli::Format::text;
    if (!category.empty())
    {
        try
        {
            o.category = parse_category(category);
        }
        catch (const error& e)
        {
            std::cerr << "parse error: " << e.what() << "\n";
            return cli::parse;
        }
    }
    for (const auto& [sub, cmd] : subs)
    {
        if (sub->parsed()) return cli::run(cmd, o, std::cout, std::cerr);
    }
    return cli::other;
}
