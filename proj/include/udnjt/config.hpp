#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "udnjt/core_model.hpp"

namespace udnjt::cli {

/// Bad configuration or command line (exit code 2). line is 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0) : std::runtime_error(what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct ExperimentConfig {
    NetworkParams params;
    std::vector<Scheme> schemes;
    std::vector<ChannelModel> channels;
    std::vector<double> lambda_grid;
    std::size_t n_trials = 100000;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    std::filesystem::path out_dir = ".";
    std::string recipe;
    AggregateKind pdf_kind = AggregateKind::Interference;
    double check_fpd_eta_db = 0.0;  // eta used by the FPD -> NoJT reduction check
};

/// Metric names accepted in `outputs`.
const std::vector<std::string>& known_metrics();

/// Figure recipe ids and their config text.
struct FigureRecipe {
    std::string id;
    std::string text;
};
const std::vector<FigureRecipe>& figure_recipes();

/// Grammar: `key = value` lines, `#` comments, `[schemes]` / `[channels]`
/// sections. Throws ConfigError naming the offending line.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Scheme/channel names used on the command line: nojt, 2ns, cd[:r0], fpd[:eta_db];
/// constant[:h], rayleigh, nakagami[:m[:omega]].
Scheme parse_scheme(const std::string& spec);
ChannelModel parse_channel(const std::string& spec);
AggregateKind parse_kind(const std::string& name);

/// File-name labels, e.g. cd-3, fpd-10, const-2, nakagami-2-1.
std::string scheme_label(const Scheme& s);
std::string channel_label(const ChannelModel& c);

}  // namespace udnjt::cli
