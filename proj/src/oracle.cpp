#include "oracle.hpp"

#include "errors.hpp"
#include "numerics.hpp"
#include "rng.hpp"

#include <cmath>
#include <functional>

namespace mhtc::oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, errc code, const char* msg) {
    if (!ok) throw error(code, msg);
}

// Composite Simpson over [a,b] with n intervals (n forced even).
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// 2-D polar tensor quadrature around the S-D midpoint; `weight` maps the two
// hop distances (r1 to source, r2 to destination) to the per-set success.
double polar_integral(const analytics::NetworkConfig& cfg, double rho_max, int res,
                      const std::function<double(double, double)>& weight) {
    const double hx = cfg.R / 2.0;
    auto ring = [&](double rho) {
        auto fth = [&](double th) {
            const double x = rho * std::cos(th);
            const double y = rho * std::sin(th);
            const double r1 = std::hypot(x + hx, y);
            const double r2 = std::hypot(x - hx, y);
            return weight(r1, r2);
        };
        return rho * simpson(fth, 0.0, 2.0 * kPi, res);
    };
    return simpson(ring, 0.0, rho_max, res);
}

double rho_max_for(const analytics::NetworkConfig& cfg, double extra_log_margin,
                   double truncation_exponent) {
    const double lo = cfg.R * cfg.R / 2.0; // d_1 at the midpoint
    double dmax;
    if (cfg.unbounded()) {
        require(cfg.Lambda() > 0.0, errc::domain, "quadrature: unbounded domain needs Lambda > 0");
        dmax = (truncation_exponent + extra_log_margin) / cfg.Lambda() + lo;
    } else {
        dmax = cfg.Dm;
    }
    // d_1(z) = 2 rho^2 + R^2/2 exactly, so the budget is a disk.
    return std::sqrt(std::max(0.0, (dmax - lo) / 2.0));
}

} // namespace

QuadratureResult quadrature_expected_relay_sets(const analytics::NetworkConfig& cfg,
                                                const QuadratureSpec& spec) {
    QuadratureResult out;
    const double dens = cfg.relay_density();
    if (dens == 0.0) return out;

    if (spec.scheme == QuadratureSpec::Scheme::tensor_grid) {
        require(cfg.m == 1, errc::domain, "tensor_grid quadrature implemented for m = 1");
        const double L = cfg.Lambda();
        const double G = cfg.hop.G;
        const double rho_max = rho_max_for(cfg, 0.0, spec.truncation_exponent);
        auto w = [&](double r1, double r2) {
            return G * G * std::exp(-L * (r1 * r1 + r2 * r2));
        };
        auto run = [&](int res) { return dens * polar_integral(cfg, rho_max, res, w); };
        out.value = run(spec.resolution);
        out.refinement_delta = std::fabs(out.value - run(spec.resolution / 2));
        return out;
    }

    require(cfg.m >= 1 && cfg.m <= 4, errc::domain, "monte_carlo quadrature supports m in 1..4");
    const int m = cfg.m;
    const double L = cfg.Lambda();
    require(L > 0.0, errc::domain, "monte_carlo quadrature needs Lambda > 0");

    // Cholesky of the tridiagonal form A_m = L L^T is bidiagonal in closed
    // form; sampling solves L^T x = u / sqrt(2 Lambda).
    std::vector<double> diag(m), off(std::max(0, m - 1));
    for (int i = 1; i <= m; ++i) diag[i - 1] = std::sqrt((i + 1.0) / i);
    for (int i = 1; i + 1 <= m; ++i) off[i - 1] = -std::sqrt(i / (i + 1.0));
    const double scale = 1.0 / std::sqrt(2.0 * L);
    rng::Xoshiro256pp gen(spec.seed);
    std::vector<double> u(m), xi(m), eta(m);
    geom::RelayChain chain;
    chain.R = cfg.R;
    chain.relays.resize(m);

    auto draw_block = [&](std::vector<double>& outv) {
        for (int i = 0; i < m; ++i) u[i] = gen.normal();
        outv[m - 1] = scale * u[m - 1] / diag[m - 1];
        for (int i = m - 2; i >= 0; --i)
            outv[i] = (scale * u[i] - off[i] * outv[i + 1]) / diag[i];
    };

    uint64_t hits = 0;
    for (uint64_t n = 0; n < spec.samples; ++n) {
        draw_block(xi);
        draw_block(eta);
        for (int i = 1; i <= m; ++i) {
            chain.relays[i - 1][0] = -cfg.R / 2.0 + cfg.R * i / (m + 1.0) + xi[i - 1];
            chain.relays[i - 1][1] = eta[i - 1];
        }
        if (geom::sum_squared_distance(chain) <= cfg.Dm) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(spec.samples);
    const double det = static_cast<double>(geom::tridiag_det_uniform(m));
    const double lo = cfg.R * cfg.R / (m + 1.0);
    const double prefactor = std::pow(dens, m) * std::pow(cfg.hop.G, m + 1) *
                             std::exp(-L * lo) * std::pow(kPi / L, m) / det;
    out.value = prefactor * p;
    out.std_error =
        prefactor * std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(spec.samples)));
    return out;
}

QuadratureResult mc_integration_expected_relay_sets(const analytics::NetworkConfig& cfg,
                                                    const analytics::RetransPolicy& policy,
                                                    const QuadratureSpec& spec) {
    require(cfg.m == 1, errc::domain, "retransmission quadrature implemented for m = 1");
    const double L = cfg.Lambda();
    const double G = cfg.hop.G;
    // Attempts only scale the integrand by poly factors; a little extra
    // truncation margin covers them.
    const double rho_max = rho_max_for(cfg, 10.0, spec.truncation_exponent);
    std::vector<double> p(2);
    auto w = [&](double r1, double r2) {
        p[0] = G * std::exp(-L * r1 * r1);
        p[1] = G * std::exp(-L * r2 * r2);
        return success_prob_retrans_bruteforce(p, policy);
    };
    QuadratureResult out;
    auto run = [&](int res) { return cfg.relay_density() * polar_integral(cfg, rho_max, res, w); };
    out.value = run(spec.resolution);
    out.refinement_delta = std::fabs(out.value - run(spec.resolution / 2));
    return out;
}

double success_prob_retrans_bruteforce(const std::vector<double>& p,
                                       const analytics::RetransPolicy& policy) {
    for (double v : p)
        require(v >= 0.0 && v <= 1.0, errc::domain, "success_prob: probabilities in [0,1]");
    const int hops = static_cast<int>(p.size());
    require(hops >= 1, errc::domain, "success_prob: at least one hop");

    if (policy.kind == analytics::RetransPolicy::Kind::best_effort) {
        require(static_cast<int>(policy.k.size()) == hops, errc::domain,
                "success_prob: attempt vector size mismatch");
        double prod = 1.0;
        for (int i = 0; i < hops; ++i)
            prod *= 1.0 - std::pow(1.0 - p[static_cast<size_t>(i)], policy.k[static_cast<size_t>(i)]);
        return prod;
    }
    if (policy.kind == analytics::RetransPolicy::Kind::total_budget) {
        require(policy.M >= hops, errc::domain, "success_prob: M must cover every hop");
        // f[h] = P(h hops completed so far); a slot advances hop h w.p. p[h].
        std::vector<double> f(static_cast<size_t>(hops) + 1, 0.0);
        f[0] = 1.0;
        for (int slot = 0; slot < policy.M; ++slot) {
            f[static_cast<size_t>(hops)] +=
                f[static_cast<size_t>(hops - 1)] * p[static_cast<size_t>(hops - 1)];
            for (int h = hops - 1; h >= 1; --h)
                f[static_cast<size_t>(h)] = f[static_cast<size_t>(h)] * (1.0 - p[static_cast<size_t>(h)]) +
                                            f[static_cast<size_t>(h - 1)] * p[static_cast<size_t>(h - 1)];
            f[0] *= 1.0 - p[0];
        }
        return f[static_cast<size_t>(hops)];
    }
    // single attempt
    double prod = 1.0;
    for (double v : p) prod *= v;
    return prod;
}

double closed_form_laplace_derivative(int m0, double alpha, double s, int k) {
    require(s > 0.0, errc::domain, "laplace derivative: s > 0 required");
    const double d = 2.0 / alpha;
    const double omega = channel::nakagami_omega(m0, alpha);
    const double L = std::exp(-omega * std::pow(s / m0, d));
    if (k == 0) return L;
    const double y = -d * omega * std::pow(s / m0, d);
    double sum = 0.0;
    for (int j = 1; j <= k; ++j) sum += std::pow(y, j) * channel::upsilon(k, j, alpha);
    return L / std::pow(-s, k) * sum;
}

double numeric_laplace_derivative(int m0, double alpha, double s, int k) {
    require(s > 0.0, errc::domain, "laplace derivative: s > 0 required");
    require(k >= 0 && k <= 6, errc::domain, "laplace derivative: order 0..6 supported");
    const long double d = 2.0L / static_cast<long double>(alpha);
    const long double omega = channel::nakagami_omega(m0, alpha);
    const long double m0l = m0;
    auto f = [&](long double x) { return expl(-omega * powl(x / m0l, d)); };
    if (k == 0) return static_cast<double>(f(s));

    auto central = [&](long double h) {
        long double acc = 0.0L;
        for (int i = 0; i <= k; ++i) {
            const long double c = static_cast<long double>(num::binom(k, i));
            const long double node = s + (static_cast<long double>(k) / 2.0L - i) * h;
            acc += (i % 2 ? -c : c) * f(node);
        }
        return acc / powl(h, k);
    };

    constexpr int kLevels = 14;
    long double table[kLevels][kLevels];
    long double h = 0.25L * static_cast<long double>(s);
    long double prev = 0.0L;
    for (int j = 0; j < kLevels; ++j, h *= 0.5L) {
        table[j][0] = central(h);
        long double p4 = 4.0L;
        for (int i = 1; i <= j; ++i, p4 *= 4.0L)
            table[j][i] = (p4 * table[j][i - 1] - table[j - 1][i - 1]) / (p4 - 1.0L);
        if (j > 1) {
            const long double cur = table[j][j];
            const long double tol = 1e-8L * std::max(1.0L, fabsl(cur));
            if (fabsl(cur - prev) <= tol) return static_cast<double>(cur);
        }
        prev = table[j][j];
    }
    throw error(errc::numeric, "numeric_laplace_derivative: Richardson table did not settle");
}

} // namespace mhtc::oracle
