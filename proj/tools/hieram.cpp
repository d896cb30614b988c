#include <iostream>

#include "CLI11.hpp"

#include "hieram/cli/config.hpp"
#include "hieram/cli/pool.hpp"
#include "hieram/cli/run.hpp"

int main(int argc, char** argv)
{
    using namespace hieram::cli;

    CLI::App app{"Hierarchical Anderson model toolkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir = "hieram-out";
    std::string format;
    std::size_t threads = default_threads();

    for (const auto& name : subcommands()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config or manifest")->required();
        sub->add_option("--seed", seed, "master seed (overrides the config)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << ErrorReport{2, "usage", e.what()}.to_json() << '\n';
        return 2;
    }

    const auto* sub = app.get_subcommands().front();
    try {
        Overrides ov;
        if (sub->count("--seed"))
            ov.seed = seed;
        if (!format.empty())
            ov.format = parse_format(format);
        const auto cfg = load_config(config_path, ov);
        const auto res = run(sub->get_name(), cfg, {out_dir, threads});
        for (const auto& f : res.files)
            std::cout << f.string() << '\n';
        return 0;
    } catch (...) {
        const auto rep = classify_error(std::current_exception());
        std::cerr << rep.to_json() << '\n';
        return rep.exit_code;
    }
}
