#pragma once

#include <stdexcept>
#include <string>
#include <variant>

namespace udnjt {

/// Rejected argument or parameter combination.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical routine could not reach its accuracy target.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double estimate = 0.0, double error_bound = 0.0)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}
    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

/// Physical scenario. All values are linear (m, mW, 1/m^2).
struct NetworkParams {
    double lambda_b = 1e-3;
    double r_l = 0.1;
    double r_m = 60.0;
    double k_s = 1.0;
    double alpha_s = 3.5;
    double p_s = 50.118723362727229;  // 17 dBm
    double n_0 = 0.0;

    void validate() const;
};

namespace scheme {
struct NoJT {};
struct TwoNS {};
struct CD {
    double r_0 = 3.0;
};
struct FPD {
    double eta_db = 10.0;
};
}  // namespace scheme

using Scheme = std::variant<scheme::NoJT, scheme::TwoNS, scheme::CD, scheme::FPD>;

namespace channel {
struct Constant {
    double h = 1.0;
};
struct Rayleigh {};
struct Nakagami {
    double m = 1.0;
    double omega = 1.0;
};
}  // namespace channel

using ChannelModel = std::variant<channel::Constant, channel::Rayleigh, channel::Nakagami>;

enum class AggregateKind { Desired, Interference, Total };

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

/// Ratio r_1 / r_eta for the fractional-power-difference rule.
double eta_t(double eta_db, double alpha_s);

void validate(const Scheme& s, const NetworkParams& p);
void validate(const ChannelModel& c);

/// E[h] and E[h^2] of the power fade.
double fade_mean(const ChannelModel& c);
double fade_second_moment(const ChannelModel& c);

/// Minimum number of points a realization needs for the scheme's radius to exist.
int min_points(const Scheme& s);

std::string to_string(const Scheme& s);
std::string to_string(const ChannelModel& c);
std::string to_string(AggregateKind k);

/// Short identifiers used in file names: nojt, 2ns, cd, fpd / const, rayleigh, nakagami.
std::string scheme_tag(const Scheme& s);
std::string channel_tag(const ChannelModel& c);

}  // namespace udnjt
