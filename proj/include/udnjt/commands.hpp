#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "udnjt/config.hpp"
#include "udnjt/csv.hpp"
#include "udnjt/laplace_inv.hpp"
#include "udnjt/montecarlo.hpp"

namespace udnjt::cli {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitUsage = 2, kExitNumeric = 3 };

struct NamedTable {
    std::string file_name;
    csv::Table table;
};

/// One table per (metric, scheme, channel) in config order, columns
/// lambda_b,analytic,mc_mean,mc_stderr.
std::vector<NamedTable> compute_sweep(const ExperimentConfig& cfg);

/// Writes every table into out_dir; removes what it wrote if any write fails.
void write_tables(const std::filesystem::path& dir, const std::vector<NamedTable>& tables);

struct PdfOutput {
    NamedTable pdf;        // power,density
    NamedTable histogram;  // bin_lo,bin_hi,mass
    laplace_inv::PdfCurve curve;
    double l1 = 0.0;  // histogram distance, including the mass outside the bins
};

/// 50 log-spaced edges over [lo, hi].
std::vector<double> log_edges(double lo, double hi, int bins = 50);

/// Sum over bins of |analytic - MC| mass plus the difference of the mass outside the bins.
double histogram_l1(const laplace_inv::PdfCurve& curve, const std::vector<double>& edges,
                    const montecarlo::EmpiricalStats& mc);

/// PDF by inverse Laplace transform and the matching MC histogram, at the
/// config's single lambda_b.
PdfOutput compute_pdf(const ExperimentConfig& cfg, const Scheme& s, const ChannelModel& c, AggregateKind kind);

struct Check {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

/// Invariant suite plus analytic-vs-MC comparisons over the config's grid.
std::vector<Check> run_validation(const ExperimentConfig& cfg, std::ostream* progress = nullptr);

struct PdfSelection {
    std::optional<Scheme> scheme;
    std::optional<ChannelModel> channel;
    std::optional<AggregateKind> kind;
};

/// Commands return an exit code and report errors on `err`.
int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_pdf(const ExperimentConfig& cfg, const PdfSelection& sel, std::ostream& out, std::ostream& err);
int cmd_validate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// Maps the library's exception types to exit codes.
int exit_code_for_current_exception(std::ostream& err);

}  // namespace udnjt::cli
