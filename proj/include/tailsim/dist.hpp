#pragma once

#include <stdexcept>

namespace tailsim::dist {

// Pareto chunk-size law: Pr(L > x) = (x_m/x)^alpha for x >= x_m.
// alpha <= 1 (infinite mean) is always rejected. The closed forms in this
// toolkit assume alpha > 2 (finite variance); 1 < alpha <= 2 is allowed
// only with an explicit override for exploratory runs.
struct ParetoParams {
    double x_m;    // scale, Mb; minimum chunk size
    double alpha;  // shape

    ParetoParams(double x_m, double alpha, bool allow_heavy_variance = false)
        : x_m(x_m), alpha(alpha) {
        if (!(x_m > 0.0)) throw std::invalid_argument("ParetoParams: x_m must be > 0");
        if (!(alpha > 1.0)) throw std::invalid_argument("ParetoParams: alpha must be > 1");
        if (alpha <= 2.0 && !allow_heavy_variance)
            throw std::invalid_argument(
                "ParetoParams: alpha <= 2 has infinite variance; pass allow_heavy_variance to permit");
    }
};

struct ServerRate {
    double mu;  // service rate per Mb, 1/(s*Mb)

    explicit ServerRate(double mu) : mu(mu) {
        if (!(mu > 0.0)) throw std::invalid_argument("ServerRate: mu must be > 0");
    }
};

// Per-chunk service time B = X * L: exponential per-Mb time X (rate mu)
// scaled by a Pareto chunk size L.
struct ServiceLawB {
    ParetoParams pareto;
    ServerRate rate;
};

// Parameters of the heavy-traffic waiting-time tail at one server.
struct WaitingTailParams {
    double lambda_total;  // aggregate chunk arrival rate at the server, 1/s
    double rho;           // utilization = lambda_total * E[B]
    ServiceLawB law;

    WaitingTailParams(double lambda_total, double rho, ServiceLawB law)
        : lambda_total(lambda_total), rho(rho), law(law) {
        if (!(lambda_total > 0.0))
            throw std::invalid_argument("WaitingTailParams: lambda_total must be > 0");
        if (!(rho > 0.0 && rho < 1.0))
            throw std::invalid_argument("WaitingTailParams: rho must be in (0,1)");
    }
};

// Inverse-CDF Pareto draw: x_m * u^(-1/alpha). Requires u in (0,1).
double sample_pareto(const ParetoParams &p, double u);

// E[L] = alpha * x_m / (alpha - 1).
double pareto_mean(const ParetoParams &p);

// E[L^2] = alpha * x_m^2 / (alpha - 2); requires alpha > 2.
double pareto_second_moment(const ParetoParams &p);

// gamma(a, x) = int_0^x u^(a-1) e^(-u) du. Power series for x < a+1,
// Lentz continued fraction otherwise; throws on non-convergence.
double lower_incomplete_gamma(double a, double x);

// Pr(B > y) = alpha (x_m/mu)^alpha gamma(alpha, mu y / x_m) / y^alpha,
// clamped to [0,1].
double service_ccdf(const ServiceLawB &law, double y);

// B = chunk_size * (-ln u) / mu for an explicit uniform variate u.
double sample_service_time(const ServiceLawB &law, double chunk_size, double u);

// E[B] = E[L] / mu.
double service_mean(const ServiceLawB &law);

// E[B^2] = (2/mu^2) * alpha x_m^2 / (alpha - 2); requires alpha > 2.
double service_second_moment(const ServiceLawB &law);

// Heavy-traffic tail approximation
//   Pr(W > x) ~ Lambda/(1-rho) * x^(1-alpha)/(alpha-1) * L(x),
//   L(x) = alpha (x_m/mu)^alpha gamma(alpha, mu x / x_m).
// Valid for large x only; may exceed 1 for small x and is returned
// unclamped so slope checks see the raw asymptote.
double waiting_tail_asymptote(const WaitingTailParams &p, double x);

// Pollaczek-Khinchine mean waiting time lambda E[B^2] / (2 (1 - rho));
// rejects rho >= 1 and alpha <= 2.
double pk_mean_waiting(double lambda_total, const ServiceLawB &law);

}  // namespace tailsim::dist
