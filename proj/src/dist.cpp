#include "tailsim/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tailsim::dist {

namespace {

constexpr int kMaxIter = 500;
constexpr double kTol = 1e-12;

// Regularized P(a,x) by power series; converges fast for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw std::runtime_error("lower_incomplete_gamma: series did not converge");
}

// Regularized Q(a,x) by modified Lentz continued fraction; for x >= a+1.
double gamma_q_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / kTol;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) {
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw std::runtime_error("lower_incomplete_gamma: continued fraction did not converge");
}

}  // namespace

double sample_pareto(const ParetoParams &p, double u) {
    if (!(u > 0.0 && u < 1.0))
        throw std::invalid_argument("sample_pareto: u must be in (0,1)");
    return p.x_m * std::pow(u, -1.0 / p.alpha);
}

double pareto_mean(const ParetoParams &p) {
    return p.alpha * p.x_m / (p.alpha - 1.0);
}

double pareto_second_moment(const ParetoParams &p) {
    if (!(p.alpha > 2.0))
        throw std::domain_error("pareto_second_moment: requires alpha > 2");
    return p.alpha * p.x_m * p.x_m / (p.alpha - 2.0);
}

double lower_incomplete_gamma(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("lower_incomplete_gamma: a must be > 0");
    if (x < 0.0) throw std::invalid_argument("lower_incomplete_gamma: x must be >= 0");
    if (x == 0.0) return 0.0;
    const double gamma_a = std::tgamma(a);
    if (x < a + 1.0) return gamma_p_series(a, x) * gamma_a;
    return (1.0 - gamma_q_cf(a, x)) * gamma_a;
}

double service_ccdf(const ServiceLawB &law, double y) {
    if (!(y > 0.0)) throw std::invalid_argument("service_ccdf: y must be > 0");
    const double alpha = law.pareto.alpha;
    const double ratio = law.pareto.x_m / law.rate.mu;
    const double g = lower_incomplete_gamma(alpha, law.rate.mu * y / law.pareto.x_m);
    const double v = alpha * std::pow(ratio, alpha) * g / std::pow(y, alpha);
    return std::clamp(v, 0.0, 1.0);
}

double sample_service_time(const ServiceLawB &law, double chunk_size, double u) {
    if (!(chunk_size >= law.pareto.x_m))
        throw std::invalid_argument("sample_service_time: chunk_size below x_m");
    if (!(u > 0.0 && u < 1.0))
        throw std::invalid_argument("sample_service_time: u must be in (0,1)");
    return chunk_size * (-std::log(u)) / law.rate.mu;
}

double service_mean(const ServiceLawB &law) {
    return pareto_mean(law.pareto) / law.rate.mu;
}

double service_second_moment(const ServiceLawB &law) {
    return 2.0 / (law.rate.mu * law.rate.mu) * pareto_second_moment(law.pareto);
}

double waiting_tail_asymptote(const WaitingTailParams &p, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("waiting_tail_asymptote: x must be > 0");
    const double alpha = p.law.pareto.alpha;
    const double mu = p.law.rate.mu;
    const double x_m = p.law.pareto.x_m;
    const double slowly_varying =
        alpha * std::pow(x_m / mu, alpha) * lower_incomplete_gamma(alpha, mu * x / x_m);
    return p.lambda_total / (1.0 - p.rho) * std::pow(x, 1.0 - alpha) / (alpha - 1.0) *
           slowly_varying;
}

double pk_mean_waiting(double lambda_total, const ServiceLawB &law) {
    if (!(law.pareto.alpha > 2.0))
        throw std::domain_error("pk_mean_waiting: requires alpha > 2 (finite E[B^2])");
    if (lambda_total < 0.0)
        throw std::invalid_argument("pk_mean_waiting: lambda_total must be >= 0");
    const double rho = lambda_total * service_mean(law);
    if (rho >= 1.0) throw std::domain_error("pk_mean_waiting: unstable queue (rho >= 1)");
    return lambda_total * service_second_moment(law) / (2.0 * (1.0 - rho));
}

}  // namespace tailsim::dist
