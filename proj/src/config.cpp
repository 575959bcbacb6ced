#include "udnjt/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace udnjt::cli {

const std::vector<std::string>& known_metrics() {
    static const std::vector<std::string> m{"desired", "interference", "total", "var_desired",
                                            "var_interference", "sinr", "se", "ase"};
    return m;
}

const std::vector<FigureRecipe>& figure_recipes() {
    static const std::string schemes = "[schemes]\nnojt = yes\n2ns = yes\ncd = 3\nfpd_db = 10\n";
    static const std::vector<FigureRecipe> r{
        {"fig2a", "alpha_s = 3.5\nn_trials = 100000\noutputs = desired\n" + schemes +
                      "[channels]\nconstant = 2\nrayleigh = yes\n"},
        {"fig2b", "alpha_s = 3.5\nn_trials = 100000\noutputs = interference\n" + schemes +
                      "[channels]\nconstant = 2\nrayleigh = yes\n"},
        {"fig3a", "alpha_s = 2\nlambda_b = 0.01\nn_trials = 100000\npdf_kind = interference\n" + schemes +
                      "[channels]\nconstant = 1\n"},
        {"fig3b", "alpha_s = 2\nlambda_b = 0.01\nn_trials = 100000\npdf_kind = interference\n" + schemes +
                      "[channels]\nrayleigh = yes\n"},
        {"fig4a", "alpha_s = 3.5\nn_trials = 400000\noutputs = var_desired\n" + schemes +
                      "[channels]\nconstant = 1\nrayleigh = yes\n"},
        {"fig4b", "alpha_s = 3.5\nn_trials = 400000\noutputs = var_interference\n" + schemes +
                      "[channels]\nconstant = 1\nrayleigh = yes\n"},
        {"fig5a", "alpha_s = 3.5\nn_trials = 100000\nn0_dbm = -104\noutputs = sinr\n" + schemes +
                      "[channels]\nconstant = 1\nrayleigh = yes\n"},
        {"fig5b", "alpha_s = 3.5\nn_trials = 100000\nn0_dbm = -104\noutputs = se\n" + schemes +
                      "[channels]\nconstant = 1\nrayleigh = yes\n"},
    };
    return r;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct Entry {
    std::string section;  // "", "schemes" or "channels"
    std::string key;
    std::string value;
    int line = 0;
    std::string source;
};

std::string where(const Entry& e) { return fmt::format("{}:{}", e.source, e.line); }

double number(const Entry& e, const std::string& text) {
    double v = 0.0;
    const auto t = trim(text);
    const auto* end = t.data() + t.size();
    const auto r = std::from_chars(t.data(), end, v);
    if (t.empty() || r.ec != std::errc() || r.ptr != end)
        throw ConfigError(fmt::format("{}: '{}' expects a number, got '{}'", where(e), e.key, text), e.line);
    return v;
}

double number(const Entry& e) { return number(e, e.value); }

std::uint64_t integer(const Entry& e) {
    std::uint64_t v = 0;
    const auto t = trim(e.value);
    const auto* end = t.data() + t.size();
    const auto r = std::from_chars(t.data(), end, v);
    if (t.empty() || r.ec != std::errc() || r.ptr != end) {
        // Allow integral values in exponent notation such as 1e5.
        const double d = number(e);
        if (d < 0.0 || d != std::floor(d) || d > 1.8e19)
            throw ConfigError(fmt::format("{}: '{}' expects a nonnegative integer, got '{}'", where(e), e.key, e.value),
                              e.line);
        return static_cast<std::uint64_t>(d);
    }
    return v;
}

void require_yes(const Entry& e) {
    if (e.value != "yes" && e.value != "true" && e.value != "1")
        throw ConfigError(fmt::format("{}: '{}' takes 'yes', got '{}'", where(e), e.key, e.value), e.line);
}

std::vector<Entry> lex(std::istream& in, const std::string& source) {
    std::vector<Entry> out;
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const auto text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']')
                throw ConfigError(fmt::format("{}:{}: malformed section header '{}'", source, line, text), line);
            section = trim(text.substr(1, text.size() - 2));
            if (section != "schemes" && section != "channels")
                throw ConfigError(fmt::format("{}:{}: unknown section [{}]", source, line, section), line);
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(fmt::format("{}:{}: expected 'key = value', got '{}'", source, line, text), line);
        Entry e{section, trim(text.substr(0, eq)), trim(text.substr(eq + 1)), line, source};
        if (e.key.empty()) throw ConfigError(fmt::format("{}:{}: missing key", source, line), line);
        out.push_back(std::move(e));
    }
    return out;
}

const std::vector<std::string> kGlobalKeys{"seed",   "recipe",  "lambda_b", "r_l",      "r_m",
                                           "k_s",    "alpha_s", "p_s_dbm",  "p_s",      "n0_dbm",
                                           "n_0",    "n_trials", "outputs", "out_dir",  "pdf_kind",
                                           "check_fpd_eta_db"};

std::vector<Entry> apply_recipe(const std::vector<Entry>& user) {
    std::string id;
    for (const auto& e : user)
        if (e.section.empty() && e.key == "recipe") id = e.value;
    if (id.empty()) return user;
    const auto& all = figure_recipes();
    const auto it = std::find_if(all.begin(), all.end(), [&](const FigureRecipe& r) { return r.id == id; });
    if (it == all.end()) {
        const auto& e = *std::find_if(user.begin(), user.end(), [](const Entry& x) { return x.key == "recipe"; });
        throw ConfigError(fmt::format("{}: unknown recipe '{}'", where(e), id), e.line);
    }
    std::istringstream in(it->text);
    auto recipe = lex(in, "recipe " + id);
    std::map<std::string, std::string> fixed;
    bool fixes_schemes = false, fixes_channels = false;
    for (const auto& r : recipe) {
        if (r.section.empty()) fixed[r.key] = r.value;
        fixes_schemes |= r.section == "schemes";
        fixes_channels |= r.section == "channels";
    }
    std::vector<Entry> merged = recipe;
    for (const auto& e : user) {
        if (e.section == "schemes" && fixes_schemes)
            throw ConfigError(fmt::format("{}: recipe {} fixes [schemes]; remove the override", where(e), id), e.line);
        if (e.section == "channels" && fixes_channels)
            throw ConfigError(fmt::format("{}: recipe {} fixes [channels]; remove the override", where(e), id), e.line);
        if (e.section.empty()) {
            const auto f = fixed.find(e.key);
            if (f != fixed.end()) {
                if (f->second == e.value) continue;
                throw ConfigError(fmt::format("{}: '{} = {}' conflicts with recipe {} ({} = {})", where(e), e.key,
                                              e.value, id, e.key, f->second),
                                  e.line);
            }
        }
        merged.push_back(e);
    }
    return merged;
}

}  // namespace

Scheme parse_scheme(const std::string& spec) {
    const auto parts = [&] {
        std::vector<std::string> p;
        std::string item;
        std::istringstream in(spec);
        while (std::getline(in, item, ':')) p.push_back(trim(item));
        return p;
    }();
    auto num = [&](std::size_t i, double def) {
        if (parts.size() <= i) return def;
        try {
            std::size_t used = 0;
            const double v = std::stod(parts[i], &used);
            if (used == parts[i].size()) return v;
        } catch (const std::exception&) {
        }
        throw ConfigError(fmt::format("bad scheme parameter in '{}'", spec));
    };
    if (parts.empty()) throw ConfigError("empty scheme name");
    const auto& n = parts[0];
    if (n == "nojt" && parts.size() == 1) return scheme::NoJT{};
    if (n == "2ns" && parts.size() == 1) return scheme::TwoNS{};
    if (n == "cd" && parts.size() <= 2) return scheme::CD{num(1, 3.0)};
    if (n == "fpd" && parts.size() <= 2) return scheme::FPD{num(1, 10.0)};
    throw ConfigError(fmt::format("unknown scheme '{}' (nojt, 2ns, cd[:r0], fpd[:eta_db])", spec));
}

ChannelModel parse_channel(const std::string& spec) {
    std::vector<std::string> parts;
    {
        std::string item;
        std::istringstream in(spec);
        while (std::getline(in, item, ':')) parts.push_back(trim(item));
    }
    auto num = [&](std::size_t i, double def) {
        if (parts.size() <= i) return def;
        try {
            std::size_t used = 0;
            const double v = std::stod(parts[i], &used);
            if (used == parts[i].size()) return v;
        } catch (const std::exception&) {
        }
        throw ConfigError(fmt::format("bad channel parameter in '{}'", spec));
    };
    if (parts.empty()) throw ConfigError("empty channel name");
    const auto& n = parts[0];
    if ((n == "constant" || n == "const") && parts.size() <= 2) return channel::Constant{num(1, 1.0)};
    if (n == "rayleigh" && parts.size() == 1) return channel::Rayleigh{};
    if (n == "nakagami" && parts.size() <= 3) return channel::Nakagami{num(1, 1.0), num(2, 1.0)};
    throw ConfigError(fmt::format("unknown channel '{}' (constant[:h], rayleigh, nakagami[:m[:omega]])", spec));
}

AggregateKind parse_kind(const std::string& name) {
    if (name == "desired") return AggregateKind::Desired;
    if (name == "interference") return AggregateKind::Interference;
    if (name == "total") return AggregateKind::Total;
    throw ConfigError(fmt::format("unknown aggregate '{}' (desired, interference, total)", name));
}

std::string scheme_label(const Scheme& s) {
    if (const auto* cd = std::get_if<scheme::CD>(&s)) return fmt::format("cd-{:g}", cd->r_0);
    if (const auto* f = std::get_if<scheme::FPD>(&s)) return fmt::format("fpd-{:g}", f->eta_db);
    return scheme_tag(s);
}

std::string channel_label(const ChannelModel& c) {
    if (const auto* k = std::get_if<channel::Constant>(&c)) return fmt::format("const-{:g}", k->h);
    if (const auto* n = std::get_if<channel::Nakagami>(&c)) return fmt::format("nakagami-{:g}-{:g}", n->m, n->omega);
    return channel_tag(c);
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
    const auto entries = apply_recipe(lex(in, source));
    ExperimentConfig cfg;
    bool have_seed = false, have_lambda = false, have_outputs = false;
    std::map<std::string, int> seen;
    const Entry* p_s_linear = nullptr;
    const Entry* p_s_db = nullptr;
    const Entry* n0_linear = nullptr;
    const Entry* n0_db = nullptr;

    for (const auto& e : entries) {
        if (e.section == "schemes") {
            if (e.key == "nojt") {
                require_yes(e);
                cfg.schemes.push_back(scheme::NoJT{});
            } else if (e.key == "2ns") {
                require_yes(e);
                cfg.schemes.push_back(scheme::TwoNS{});
            } else if (e.key == "cd") {
                cfg.schemes.push_back(scheme::CD{number(e)});
            } else if (e.key == "fpd_db") {
                cfg.schemes.push_back(scheme::FPD{number(e)});
            } else {
                throw ConfigError(fmt::format("{}: unknown scheme key '{}' (nojt, 2ns, cd, fpd_db)", where(e), e.key),
                                  e.line);
            }
            continue;
        }
        if (e.section == "channels") {
            if (e.key == "constant") {
                cfg.channels.push_back(channel::Constant{number(e)});
            } else if (e.key == "rayleigh") {
                require_yes(e);
                cfg.channels.push_back(channel::Rayleigh{});
            } else if (e.key == "nakagami") {
                const auto v = split_list(e.value);
                if (v.size() != 2)
                    throw ConfigError(fmt::format("{}: nakagami expects 'm, omega'", where(e)), e.line);
                cfg.channels.push_back(channel::Nakagami{number(e, v[0]), number(e, v[1])});
            } else {
                throw ConfigError(
                    fmt::format("{}: unknown channel key '{}' (constant, rayleigh, nakagami)", where(e), e.key), e.line);
            }
            continue;
        }
        if (std::find(kGlobalKeys.begin(), kGlobalKeys.end(), e.key) == kGlobalKeys.end())
            throw ConfigError(fmt::format("{}: unknown key '{}'", where(e), e.key), e.line);
        if (seen.count(e.key))
            throw ConfigError(fmt::format("{}: '{}' already set on line {}", where(e), e.key, seen[e.key]), e.line);
        seen[e.key] = e.line;

        auto& p = cfg.params;
        if (e.key == "seed") {
            cfg.seed = integer(e);
            have_seed = true;
        } else if (e.key == "recipe") {
            cfg.recipe = e.value;
        } else if (e.key == "lambda_b") {
            for (const auto& item : split_list(e.value)) cfg.lambda_grid.push_back(number(e, item));
            have_lambda = true;
        } else if (e.key == "r_l") {
            p.r_l = number(e);
        } else if (e.key == "r_m") {
            p.r_m = number(e);
        } else if (e.key == "k_s") {
            p.k_s = number(e);
        } else if (e.key == "alpha_s") {
            p.alpha_s = number(e);
        } else if (e.key == "p_s_dbm") {
            p.p_s = dbm_to_mw(number(e));
            p_s_db = &e;
        } else if (e.key == "p_s") {
            p.p_s = number(e);
            p_s_linear = &e;
        } else if (e.key == "n0_dbm") {
            p.n_0 = dbm_to_mw(number(e));
            n0_db = &e;
        } else if (e.key == "n_0") {
            p.n_0 = number(e);
            n0_linear = &e;
        } else if (e.key == "n_trials") {
            cfg.n_trials = integer(e);
        } else if (e.key == "outputs") {
            cfg.outputs = split_list(e.value);
            for (const auto& m : cfg.outputs)
                if (std::find(known_metrics().begin(), known_metrics().end(), m) == known_metrics().end())
                    throw ConfigError(fmt::format("{}: unknown metric '{}'", where(e), m), e.line);
            have_outputs = true;
        } else if (e.key == "out_dir") {
            cfg.out_dir = e.value;
        } else if (e.key == "pdf_kind") {
            try {
                cfg.pdf_kind = parse_kind(e.value);
            } catch (const ConfigError& err) {
                throw ConfigError(fmt::format("{}: {}", where(e), err.what()), e.line);
            }
        } else if (e.key == "check_fpd_eta_db") {
            cfg.check_fpd_eta_db = number(e);
        }
    }
    if (p_s_db && p_s_linear)
        throw ConfigError(fmt::format("{}: p_s and p_s_dbm both given", where(*p_s_linear)), p_s_linear->line);
    if (n0_db && n0_linear)
        throw ConfigError(fmt::format("{}: n_0 and n0_dbm both given", where(*n0_linear)), n0_linear->line);
    if (!have_seed) throw ConfigError(fmt::format("{}: 'seed' is required", source));
    if (!have_lambda) cfg.lambda_grid = {1e-3, 2.5e-3, 5e-3, 7.5e-3, 1e-2};
    if (!have_outputs) cfg.outputs = {"desired", "interference"};
    if (cfg.lambda_grid.empty()) throw ConfigError(fmt::format("{}: lambda_b grid is empty", source));
    for (std::size_t i = 1; i < cfg.lambda_grid.size(); ++i)
        if (!(cfg.lambda_grid[i] > cfg.lambda_grid[i - 1]))
            throw ConfigError(fmt::format("{}: lambda_b grid must be strictly ascending", source));
    if (cfg.schemes.empty()) throw ConfigError(fmt::format("{}: the scheme list is empty", source));
    if (cfg.channels.empty()) throw ConfigError(fmt::format("{}: the channel list is empty", source));
    if (cfg.n_trials < 100) throw ConfigError(fmt::format("{}: n_trials must be >= 100", source));
    try {
        for (double l : cfg.lambda_grid) {
            auto p = cfg.params;
            p.lambda_b = l;
            p.validate();
            for (const auto& s : cfg.schemes) validate(s, p);
        }
        for (const auto& c : cfg.channels) validate(c);
        if (cfg.check_fpd_eta_db < 0.0) throw DomainError("check_fpd_eta_db must be >= 0");
    } catch (const DomainError& err) {
        throw ConfigError(fmt::format("{}: {}", source, err.what()));
    }
    cfg.params.lambda_b = cfg.lambda_grid.front();
    return cfg;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    return parse_config(in, source);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
    return parse_config(in, path.string());
}

}  // namespace udnjt::cli
