#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "udnjt/commands.hpp"

using namespace udnjt;

int main(int argc, char** argv) {
    CLI::App app{"Aggregate power, SINR and spectral efficiency of joint-transmission schemes in PPP networks"};
    app.require_subcommand(1);

    std::string config_path, out_dir, scheme, channel, kind;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "experiment config file")->required();
        sub->add_option("-o,--out", out_dir, "output directory (overrides out_dir)");
    };
    auto* sweep = app.add_subcommand("sweep", "analytic and Monte Carlo curves over the lambda_b grid");
    add_common(sweep);
    auto* pdf = app.add_subcommand("pdf", "PDF by inverse Laplace transform plus a Monte Carlo histogram");
    add_common(pdf);
    pdf->add_option("--scheme", scheme, "nojt | 2ns | cd[:r0] | fpd[:eta_db]");
    pdf->add_option("--channel", channel, "constant[:h] | rayleigh | nakagami[:m[:omega]]");
    pdf->add_option("--kind", kind, "desired | interference | total");
    auto* validate = app.add_subcommand("validate", "invariant suite and analytic-vs-Monte-Carlo checks");
    add_common(validate);
    auto* recipes = app.add_subcommand("recipes", "print the figure recipes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitUsage;
    }

    if (recipes->parsed()) {
        for (const auto& r : cli::figure_recipes()) std::cout << "# recipe = " << r.id << '\n' << r.text << '\n';
        return cli::kExitOk;
    }

    cli::ExperimentConfig cfg;
    cli::PdfSelection sel;
    try {
        cfg = cli::load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!scheme.empty()) sel.scheme = cli::parse_scheme(scheme);
        if (!channel.empty()) sel.channel = cli::parse_channel(channel);
        if (!kind.empty()) sel.kind = cli::parse_kind(kind);
    } catch (...) {
        return cli::exit_code_for_current_exception(std::cerr);
    }

    if (sweep->parsed()) return cli::cmd_sweep(cfg, std::cout, std::cerr);
    if (pdf->parsed()) return cli::cmd_pdf(cfg, sel, std::cout, std::cerr);
    return cli::cmd_validate(cfg, std::cout, std::cerr);
}
