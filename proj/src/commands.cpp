#include "udnjt/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <fmt/format.h>

#include "udnjt/mgf.hpp"
#include "udnjt/moments.hpp"
#include "udnjt/parallel.hpp"
#include "udnjt/sysperf.hpp"

namespace udnjt::cli {

namespace {

bool has(const std::vector<std::string>& v, const std::string& x) { return std::find(v.begin(), v.end(), x) != v.end(); }

NetworkParams at_lambda(const ExperimentConfig& cfg, double lambda) {
    auto p = cfg.params;
    p.lambda_b = lambda;
    return p;
}

struct Analytic {
    double desired = 0, interference = 0, total = 0, var_desired = 0, var_interference = 0, sinr = 0, se = 0,
           ase = 0;
};

Analytic analytic_cell(const NetworkParams& p, const Scheme& s, const ChannelModel& c,
                       const std::vector<std::string>& outputs) {
    Analytic a;
    using K = AggregateKind;
    if (has(outputs, "desired")) a.desired = moments::mean_power(p, s, c, K::Desired);
    if (has(outputs, "interference")) a.interference = moments::mean_power(p, s, c, K::Interference);
    if (has(outputs, "total")) a.total = moments::mean_power(p, s, c, K::Total);
    if (has(outputs, "var_desired")) a.var_desired = moments::variance_power(p, s, c, K::Desired);
    if (has(outputs, "var_interference")) a.var_interference = moments::variance_power(p, s, c, K::Interference);
    if (has(outputs, "sinr")) a.sinr = sysperf::mean_sinr(p, s, c);
    if (has(outputs, "se") || has(outputs, "ase")) {
        a.se = sysperf::spectral_efficiency(p, s, c);
        a.ase = sysperf::area_spectral_efficiency(p, a.se).ase;
    }
    return a;
}

std::vector<double> sweep_row(const std::string& metric, double lambda, const Analytic& a,
                              const montecarlo::SchemeStats& mc) {
    if (metric == "desired") return {lambda, a.desired, mc.desired.mean, mc.desired.standard_error};
    if (metric == "interference")
        return {lambda, a.interference, mc.interference.mean, mc.interference.standard_error};
    if (metric == "total") return {lambda, a.total, mc.total.mean, mc.total.standard_error};
    if (metric == "var_desired") return {lambda, a.var_desired, mc.desired.variance, mc.desired.variance_se};
    if (metric == "var_interference")
        return {lambda, a.var_interference, mc.interference.variance, mc.interference.variance_se};
    if (metric == "sinr") return {lambda, a.sinr, mc.sinr.mean, mc.sinr.standard_error};
    if (metric == "se") return {lambda, a.se, mc.spectral_efficiency.mean, mc.spectral_efficiency.standard_error};
    // ase: the MC estimate of lambda_b * S.
    return {lambda, a.ase, lambda * mc.spectral_efficiency.mean, lambda * mc.spectral_efficiency.standard_error};
}

}  // namespace

std::vector<NamedTable> compute_sweep(const ExperimentConfig& cfg) {
    const auto& outputs = cfg.outputs;
    if (outputs.empty()) throw ConfigError("sweep: no outputs requested");
    montecarlo::Collectors col;
    col.variance = has(outputs, "var_desired") || has(outputs, "var_interference");
    col.sinr = has(outputs, "sinr") || has(outputs, "se") || has(outputs, "ase");

    const auto nl = cfg.lambda_grid.size(), ns = cfg.schemes.size(), nc = cfg.channels.size();
    // MC: one run per (channel, lambda) covering every scheme with shared realizations.
    std::vector<montecarlo::ExperimentResult> mc;
    for (std::size_t c = 0; c < nc; ++c)
        for (std::size_t l = 0; l < nl; ++l)
            mc.push_back(montecarlo::run_experiment(at_lambda(cfg, cfg.lambda_grid[l]), cfg.schemes, cfg.channels[c],
                                                    cfg.n_trials, cfg.seed, col));
    std::vector<Analytic> an(nc * nl * ns);
    parallel_for(an.size(), [&](std::size_t i) {
        const auto c = i / (nl * ns), l = (i / ns) % nl, s = i % ns;
        an[i] = analytic_cell(at_lambda(cfg, cfg.lambda_grid[l]), cfg.schemes[s], cfg.channels[c], outputs);
    });

    std::vector<NamedTable> tables;
    for (const auto& metric : outputs) {
        for (std::size_t s = 0; s < ns; ++s) {
            for (std::size_t c = 0; c < nc; ++c) {
                NamedTable t;
                t.file_name = fmt::format("{}_{}_{}.csv", metric, scheme_label(cfg.schemes[s]),
                                          channel_label(cfg.channels[c]));
                t.table.header = {"lambda_b", "analytic", "mc_mean", "mc_stderr"};
                for (std::size_t l = 0; l < nl; ++l)
                    t.table.add_row(sweep_row(metric, cfg.lambda_grid[l], an[(c * nl + l) * ns + s],
                                              mc[c * nl + l].schemes[s]));
                tables.push_back(std::move(t));
            }
        }
    }
    return tables;
}

void write_tables(const std::filesystem::path& dir, const std::vector<NamedTable>& tables) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    try {
        for (const auto& t : tables) {
            const auto path = dir / t.file_name;
            csv::write(path, t.table);
            written.push_back(path);
        }
    } catch (...) {
        std::error_code ec;
        for (const auto& p : written) std::filesystem::remove(p, ec);
        throw;
    }
}

std::vector<double> log_edges(double lo, double hi, int bins) {
    if (!(lo > 0.0) || !(hi > lo) || bins < 1) throw DomainError("log_edges: need 0 < lo < hi and bins >= 1");
    std::vector<double> e(bins + 1);
    for (int i = 0; i <= bins; ++i) e[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / bins);
    e.front() = lo;
    e.back() = hi;
    return e;
}

double histogram_l1(const laplace_inv::PdfCurve& curve, const std::vector<double>& edges,
                    const montecarlo::EmpiricalStats& mc) {
    const auto p = laplace_inv::bin_masses(curve, edges);
    if (p.size() != mc.histogram.size()) throw DomainError("histogram_l1: bin count mismatch");
    double l1 = 0.0, inside = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        l1 += std::abs(p[i] - mc.histogram[i]);
        inside += p[i];
    }
    const double outside_mc = mc.histogram_below + mc.histogram_above;
    return l1 + std::abs((1.0 - inside) - outside_mc);
}

PdfOutput compute_pdf(const ExperimentConfig& cfg, const Scheme& s, const ChannelModel& c, AggregateKind kind) {
    if (cfg.lambda_grid.size() != 1)
        throw ConfigError(fmt::format("pdf: needs exactly one lambda_b, config has {}", cfg.lambda_grid.size()));
    const auto p = at_lambda(cfg, cfg.lambda_grid.front());
    validate(s, p);
    validate(c);
    const double mean = moments::mean_power(p, s, c, kind);
    if (!(mean > 0.0))
        throw DomainError(fmt::format("pdf: {} {} power is identically zero", to_string(s), to_string(kind)));
    const auto m = mgf::mgf(p, s, c, kind);
    PdfOutput out;
    out.curve = laplace_inv::invert_auto(m, mean);
    const auto edges = log_edges(out.curve.grid.front(), out.curve.grid.back());
    montecarlo::Collectors col;
    col.histogram_edges = edges;
    const auto r = montecarlo::run_experiment(p, {s}, c, cfg.n_trials, cfg.seed, col);
    const auto& stats = kind == AggregateKind::Desired        ? r.schemes[0].desired
                        : kind == AggregateKind::Interference ? r.schemes[0].interference
                                                              : r.schemes[0].total;
    out.l1 = histogram_l1(out.curve, edges, stats);
    const auto stem = fmt::format("{}_{}_{}", to_string(kind), scheme_label(s), channel_label(c));
    out.pdf.file_name = "pdf_" + stem + ".csv";
    out.pdf.table.header = {"power", "density"};
    for (std::size_t i = 0; i < out.curve.grid.size(); ++i)
        out.pdf.table.add_row({out.curve.grid[i], out.curve.density[i]});
    out.histogram.file_name = "hist_" + stem + ".csv";
    out.histogram.table.header = {"bin_lo", "bin_hi", "mass"};
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        out.histogram.table.add_row({edges[i], edges[i + 1], stats.histogram[i]});
    return out;
}

namespace {

class Suite {
public:
    explicit Suite(std::ostream* progress) : progress_(progress) {}

    // Passes when observed <= tolerance.
    void at_most(const std::string& name, double observed, double tolerance, std::string detail = {}) {
        add({name, observed <= tolerance, observed, tolerance, std::move(detail)});
    }
    void fail(const std::string& name, std::string detail) {
        add({name, false, std::numeric_limits<double>::quiet_NaN(), 0.0, std::move(detail)});
    }
    template <class F>
    void guarded(const std::string& name, F&& f) {
        try {
            f();
        } catch (const std::exception& e) {
            fail(name, e.what());
        }
    }
    std::vector<Check> take() { return std::move(checks_); }

private:
    void add(Check c) {
        if (progress_) {
            *progress_ << fmt::format("{} {} observed={:.6g} tolerance={:.6g}{}{}\n", c.pass ? "PASS" : "FAIL", c.name,
                                      c.observed, c.tolerance, c.detail.empty() ? "" : " ", c.detail);
            progress_->flush();
        }
        checks_.push_back(std::move(c));
    }
    std::ostream* progress_;
    std::vector<Check> checks_;
};

double rel(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// Strict decreasing order check over the analytic values of named schemes.
void ordering(Suite& suite, const std::string& name, const std::vector<std::pair<std::string, double>>& v) {
    int violations = 0;
    std::string detail;
    for (std::size_t i = 0; i < v.size(); ++i) {
        detail += fmt::format("{}{}={:.6g}", i ? " > " : "", v[i].first, v[i].second);
        if (i > 0 && !(v[i - 1].second > v[i].second)) ++violations;
    }
    suite.at_most(name, violations, 0.0, detail);
}

}  // namespace

std::vector<Check> run_validation(const ExperimentConfig& cfg, std::ostream* progress) {
    using K = AggregateKind;
    Suite suite(progress);
    const std::vector<double> zs{0.01, 0.1, 1.0};
    const std::vector<double> zgrid{1e-3, 1e-2, 0.1, 1.0, 10.0};
    montecarlo::Collectors col;
    col.variance = true;
    col.mgf_z = zs;
    col.sinr = true;

    auto find_scheme = [&](auto tag) -> std::optional<Scheme> {
        for (const auto& s : cfg.schemes)
            if (std::holds_alternative<decltype(tag)>(s)) return s;
        return std::nullopt;
    };
    const auto nojt = find_scheme(scheme::NoJT{}), two = find_scheme(scheme::TwoNS{}),
               cd = find_scheme(scheme::CD{}), fpd = find_scheme(scheme::FPD{});

    for (double lambda : cfg.lambda_grid) {
        const auto p = at_lambda(cfg, lambda);
        const auto lam = fmt::format("lambda={:g}", lambda);

        for (const auto& c : cfg.channels) {
            const auto cl = channel_label(c);
            const auto mc = montecarlo::run_experiment(p, cfg.schemes, c, cfg.n_trials, cfg.seed, col);
            std::map<std::string, double> se_of, ep_of, sinr_of;
            for (std::size_t si = 0; si < cfg.schemes.size(); ++si) {
                const auto& s = cfg.schemes[si];
                const auto tag = fmt::format("{}/{}/{}", scheme_label(s), cl, lam);
                const auto& st = mc.schemes[si];
                for (K k : {K::Desired, K::Interference}) {
                    const auto kn = to_string(k);
                    const auto& e = k == K::Desired ? st.desired : st.interference;
                    suite.guarded("analytic/" + kn + "/" + tag, [&] {
                        const double mean = moments::mean_power(p, s, c, k);
                        const double var = moments::variance_power(p, s, c, k);
                        suite.at_most("mean_vs_mc/" + kn + "/" + tag, std::abs(mean - e.mean) / e.standard_error, 3.0,
                                      fmt::format("analytic={:.8g} mc={:.8g}", mean, e.mean));
                        suite.at_most("variance_vs_mc/" + kn + "/" + tag, std::abs(var - e.variance) / e.variance_se,
                                      3.0, fmt::format("analytic={:.8g} mc={:.8g}", var, e.variance));
                        const auto m = mgf::mgf(p, s, c, k);
                        suite.at_most("mgf_at_zero/" + kn + "/" + tag, std::abs(m(0.0) - 1.0), 0.0);
                        if (mean > 0.0)
                            suite.at_most("mgf_derivative_mean/" + kn + "/" + tag,
                                          rel(mgf::finite_difference_mean(m, mean), mean), 1e-4);
                        for (std::size_t z = 0; z < zs.size(); ++z) {
                            const double se = std::max(e.mgf_se[z], 1e-300);
                            suite.at_most(fmt::format("mgf_vs_mc/{}/z={:g}/{}", kn, zs[z], tag),
                                          std::abs(m(zs[z]) - e.mgf_at[z]) / se, 3.0);
                        }
                        if (k == K::Desired) ep_of[scheme_tag(s)] = mean;
                    });
                }
                suite.guarded("conservation/" + tag, [&] {
                    const double sum = moments::mean_power(p, s, c, K::Desired) +
                                       moments::mean_power(p, s, c, K::Interference);
                    suite.at_most("conservation/" + tag, rel(sum, moments::campbell_mean(p, c, p.r_l, p.r_m)), 1e-8);
                });
                suite.guarded("se_vs_mc/" + tag, [&] {
                    const double se = sysperf::spectral_efficiency(p, s, c);
                    se_of[scheme_tag(s)] = se;
                    sinr_of[scheme_tag(s)] = sysperf::mean_sinr(p, s, c);
                    suite.at_most("se_vs_mc/" + tag, rel(se, st.spectral_efficiency.mean), 0.05,
                                  fmt::format("analytic={:.8g} mc={:.8g}", se, st.spectral_efficiency.mean));
                });
            }

            // Reductions.
            suite.guarded("reduction_fpd/" + cl + "/" + lam, [&] {
                const Scheme f = scheme::FPD{cfg.check_fpd_eta_db};
                double worst = 0.0;
                for (K k : {K::Desired, K::Interference}) {
                    worst = std::max(worst, rel(moments::mean_power(p, f, c, k),
                                                moments::mean_power(p, scheme::NoJT{}, c, k)));
                    worst = std::max(worst, rel(moments::variance_power(p, f, c, k),
                                                moments::variance_power(p, scheme::NoJT{}, c, k)));
                    const auto a = mgf::mgf(p, f, c, k), b = mgf::mgf(p, scheme::NoJT{}, c, k);
                    for (double z : zgrid) worst = std::max(worst, rel(a(z), b(z)));
                }
                suite.at_most(fmt::format("reduction_fpd_eta{:g}_is_nojt/{}/{}", cfg.check_fpd_eta_db, cl, lam), worst,
                              1e-9);
            });
            suite.guarded("reduction_cd_full/" + cl + "/" + lam, [&] {
                const Scheme full = scheme::CD{p.r_m};
                const double ei = moments::mean_power(p, full, c, K::Interference);
                const double mi = mgf::mgf(p, full, c, K::Interference)(1.0);
                suite.at_most("reduction_cd_rm_no_interference/" + cl + "/" + lam,
                              std::max(std::abs(ei), std::abs(mi - 1.0)), 1e-12);
            });

            // Orderings and JT gain on the analytic curves.
            if (nojt && two && cd && fpd) {
                const auto nm = [&](const Scheme& s) { return scheme_tag(s); };
                if (ep_of.size() == 4)
                    ordering(suite, fmt::format("ordering_desired_cd>fpd>2ns>nojt/{}/{}", cl, lam),
                             {{"cd", ep_of[nm(*cd)]}, {"fpd", ep_of[nm(*fpd)]}, {"2ns", ep_of[nm(*two)]},
                              {"nojt", ep_of[nm(*nojt)]}});
                if (sinr_of.size() == 4)
                    ordering(suite, fmt::format("ordering_sinr_cd>2ns>fpd>nojt/{}/{}", cl, lam),
                             {{"cd", sinr_of["cd"]}, {"2ns", sinr_of["2ns"]}, {"fpd", sinr_of["fpd"]},
                              {"nojt", sinr_of["nojt"]}});
                if (se_of.size() == 4)
                    ordering(suite, fmt::format("ordering_se_fpd>2ns>cd>nojt/{}/{}", cl, lam),
                             {{"fpd", se_of["fpd"]}, {"2ns", se_of["2ns"]}, {"cd", se_of["cd"]},
                              {"nojt", se_of["nojt"]}});
            }
            if (se_of.count("nojt")) {
                for (const auto& [name, se] : se_of) {
                    if (name == "nojt") continue;
                    suite.at_most(fmt::format("jt_gain_se_{}>=nojt/{}/{}", name, cl, lam), se_of["nojt"] - se, 0.0,
                                  fmt::format("{}={:.6g} nojt={:.6g}", name, se, se_of["nojt"]));
                }
            }
        }

        // Channel-level identities (independent of the configured channels).
        for (const auto& s : cfg.schemes) {
            const auto tag = fmt::format("{}/{}", scheme_label(s), lam);
            suite.guarded("sinr_const_vs_rayleigh/" + tag, [&] {
                suite.at_most("sinr_const1_equals_rayleigh/" + tag,
                              rel(sysperf::mean_sinr(p, s, channel::Constant{1.0}),
                                  sysperf::mean_sinr(p, s, channel::Rayleigh{})),
                              1e-12);
            });
            suite.guarded("reduction_nakagami/" + tag, [&] {
                double worst = 0.0;
                const ChannelModel n = channel::Nakagami{1.0, 1.0}, r = channel::Rayleigh{};
                for (K k : {K::Desired, K::Interference}) {
                    worst = std::max(worst, rel(moments::mean_power(p, s, n, k), moments::mean_power(p, s, r, k)));
                    worst = std::max(worst,
                                     rel(moments::variance_power(p, s, n, k), moments::variance_power(p, s, r, k)));
                    const auto a = mgf::mgf(p, s, n, k), b = mgf::mgf(p, s, r, k);
                    for (double z : zgrid) worst = std::max(worst, rel(a(z), b(z)));
                }
                suite.at_most("reduction_nakagami11_is_rayleigh/" + tag, worst, 1e-9);
            });
        }
    }
    return suite.take();
}

int exit_code_for_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const auto tables = compute_sweep(cfg);
        write_tables(cfg.out_dir, tables);
        for (const auto& t : tables) out << (cfg.out_dir / t.file_name).string() << '\n';
        return kExitOk;
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
}

int cmd_pdf(const ExperimentConfig& cfg, const PdfSelection& sel, std::ostream& out, std::ostream& err) {
    try {
        if (!sel.scheme && cfg.schemes.size() != 1)
            throw ConfigError("pdf: choose a scheme with --scheme (the config lists several)");
        if (!sel.channel && cfg.channels.size() != 1)
            throw ConfigError("pdf: choose a channel with --channel (the config lists several)");
        const auto s = sel.scheme.value_or(cfg.schemes.front());
        const auto c = sel.channel.value_or(cfg.channels.front());
        const auto r = compute_pdf(cfg, s, c, sel.kind.value_or(cfg.pdf_kind));
        write_tables(cfg.out_dir, {r.pdf, r.histogram});
        out << (cfg.out_dir / r.pdf.file_name).string() << '\n' << (cfg.out_dir / r.histogram.file_name).string() << '\n';
        out << fmt::format("mass={:.6f} l1={:.6f}\n", r.curve.mass_check, r.l1);
        return kExitOk;
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
}

int cmd_validate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const auto checks = run_validation(cfg, &out);
        csv::Table t;
        t.header = {"check", "status", "observed", "tolerance"};
        std::size_t failed = 0;
        for (const auto& c : checks) {
            failed += !c.pass;
            t.rows.push_back({c.name, c.pass ? "PASS" : "FAIL", csv::format_double(c.observed),
                              csv::format_double(c.tolerance)});
        }
        write_tables(cfg.out_dir, {{"validate.csv", t}});
        out << fmt::format("{} checks, {} passed, {} failed\n", checks.size(), checks.size() - failed, failed);
        return failed ? kExitValidation : kExitOk;
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
}

}  // namespace udnjt::cli
