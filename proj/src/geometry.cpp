#include "geometry.hpp"

#include "errors.hpp"
#include "numerics.hpp"

#include <cmath>

namespace mhtc::geom {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_attempts(const AttemptVector& n) {
    if (n.size() < 2) throw error(errc::domain, "attempt vector needs m+1 >= 2 entries");
    for (int v : n)
        if (v < 1) throw error(errc::domain, "attempt counts must be >= 1");
}
} // namespace

double sum_squared_distance(const RelayChain& chain) {
    const double hx = chain.R / 2.0;
    double px = -hx, py = 0.0;
    double d = 0.0;
    for (const auto& z : chain.relays) {
        const double dx = z[0] - px, dy = z[1] - py;
        d += dx * dx + dy * dy;
        px = z[0];
        py = z[1];
    }
    const double dx = hx - px, dy = 0.0 - py;
    return d + dx * dx + dy * dy;
}

double min_sum_squared(double R, int m) {
    if (m < 0) throw error(errc::domain, "min_sum_squared: m must be >= 0");
    return R * R / static_cast<double>(m + 1);
}

int64_t tridiag_det_uniform(int m) {
    if (m < 1) throw error(errc::domain, "tridiag_det_uniform: m must be >= 1");
    int64_t prev = 1; // det(A_0) by convention
    int64_t cur = 2;  // det(A_1)
    for (int i = 2; i <= m; ++i) {
        const int64_t next = 2 * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

int64_t tridiag_det_weighted(const AttemptVector& n) {
    check_attempts(n);
    const int m = static_cast<int>(n.size()) - 1;
    // Laplace expansion along the last row:
    //   det(A*_i) = (n_i + n_{i+1}) det(A*_{i-1}) - n_i^2 det(A*_{i-2}),
    // integer-exact throughout.
    int64_t prev = 1;
    int64_t cur = static_cast<int64_t>(n[0]) + n[1];
    for (int i = 2; i <= m; ++i) {
        const int64_t ni = n[i - 1];
        const int64_t next = (ni + n[i]) * cur - ni * ni * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

int64_t weighted_det_closed_form(const AttemptVector& n) {
    check_attempts(n);
    int64_t total = 0;
    for (size_t i = 0; i < n.size(); ++i) {
        int64_t p = 1;
        for (size_t j = 0; j < n.size(); ++j)
            if (j != i) p *= n[j];
        total += p;
    }
    return total;
}

double ellipsoid_volume(int m, double a, double R) {
    if (m < 1) throw error(errc::domain, "ellipsoid_volume: m must be >= 1");
    const double lo = min_sum_squared(R, m);
    if (a < lo) throw error(errc::domain, "ellipsoid_volume: level below the quadratic-form minimum");
    return std::pow(kPi, m) * std::pow(a - lo, m) /
           static_cast<double>(num::factorial_u64(m + 1));
}

double ellipsoid_volume_weighted(const AttemptVector& n, double a, double R) {
    check_attempts(n);
    const int m = static_cast<int>(n.size()) - 1;
    double harm = 0.0;
    for (int v : n) harm += 1.0 / static_cast<double>(v);
    const double lo = R * R / harm;
    if (a < lo)
        throw error(errc::domain, "ellipsoid_volume_weighted: level below the Cauchy-Schwarz minimum");
    const double det = static_cast<double>(tridiag_det_weighted(n));
    return std::pow(kPi, m) * std::pow(a - lo, m) /
           (static_cast<double>(num::factorial_u64(m)) * det);
}

} // namespace mhtc::geom
