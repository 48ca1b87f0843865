#include "hrl/partition.hpp"

#include <cmath>
#include <sstream>

#include "hrl/discretize.hpp"
#include "hrl/errors.hpp"
#include "hrl/parallel.hpp"
#include "hrl/spectral.hpp"

namespace hrl {

double partition_functional(const Potential& v, double nu, double a, double t) {
    if (!(t > a)) return 0.0;
    return std::pow(t - a, 3.0 - nu) * weighted_moment(v, 1.0, nu, a, t);
}

RescaledInterval rescale_interval(const Potential& v, double a_lo, double a_hi, double nu) {
    if (!(a_lo > 0.0 && a_hi > a_lo)) throw DomainError("rescale_interval needs 0 < a_lo < a_hi");
    const double len = a_hi - a_lo;
    RescaledInterval r;
    r.a_lo = a_lo;
    r.a_hi = a_hi;
    r.b = a_lo / len;
    r.v = v.scaled(len).restricted(r.b, r.b + 1.0);
    r.budget = weighted_moment(r.v, 1.0, nu, r.b, r.b + 1.0);
    return r;
}

Partition compute_partition(const Potential& v, double nu, double D, double tol) {
    if (!(tol > 0.0)) throw DomainError("partition tolerance must be positive");
    if (!(D > 0.0)) throw DomainError("partition budget D must be positive");
    if (!(nu >= 0.0 && nu < 3.0)) throw DomainError("partition needs 0 <= nu < 3");
    if (v.is_zero()) throw DomainError("partition needs a potential that is not identically zero");

    Partition p;
    p.D_nu = D;
    p.nu = nu;
    p.tol = tol;
    p.total_moment = weighted_moment(v, 1.0, nu);
    if (!std::isfinite(p.total_moment) || !(p.total_moment > 0.0)) {
        throw NumericalFailure("potential moment is not finite and positive");
    }
    p.min_step = std::pow(D / p.total_moment, 1.0 / (3.0 - nu));
    const double x_hi = v.support().hi;
    const double power = 1.0 / (3.0 - nu);

    p.a = {0.0, v.support().lo};
    for (std::size_t guard = 0;; ++guard) {
        if (guard > 1000000) throw NumericalFailure("partition did not terminate");
        const double a = p.a.back();
        const double at_top = partition_functional(v, nu, a, x_hi);
        double next;
        bool last = false;
        if (std::abs(at_top - D) <= 1e-12 * D) {
            next = x_hi;
            last = true;
        } else if (at_top < D) {
            // Past the support the moment is frozen: solve (t - a)^(3-nu) m = D directly.
            const double m = weighted_moment(v, 1.0, nu, a, x_hi);
            if (!(m > 0.0)) break;
            next = a + std::pow(D / m, power);
            last = true;
        } else {
            double lo = a;
            double hi = x_hi;
            while (hi - lo > tol) {
                const double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                (partition_functional(v, nu, a, mid) < D ? lo : hi) = mid;
            }
            next = 0.5 * (lo + hi);
            // A root within the bisection tolerance of the top is the top.
            if (next >= x_hi - 2.0 * tol) {
                next = x_hi;
                last = true;
            }
        }
        p.a.push_back(next);
        if (last) break;
    }
    for (std::size_t j = 1; j + 1 < p.a.size(); ++j) p.rescaled.push_back(rescale_interval(v, p.a[j], p.a[j + 1], nu));
    return p;
}

double partition_defect(const Potential& v, const Partition& p) {
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < p.a.size(); ++j) {
        const double a = p.a[j];
        const double t = p.a[j + 1];
        const double lo = partition_functional(v, p.nu, a, t - 2.0 * p.tol);
        const double hi = partition_functional(v, p.nu, a, t + 2.0 * p.tol);
        const double slack = 1e-12 * p.D_nu;
        if (lo <= p.D_nu + slack && p.D_nu - slack <= hi) continue;
        worst = std::max(worst, std::abs(partition_functional(v, p.nu, a, t) - p.D_nu) / p.D_nu);
    }
    return worst;
}

ChainCheck chain_check(const Partition& p, const IntervalConstants& k, std::size_t cells, std::size_t threads) {
    if (std::abs(k.nu - p.nu) > 1e-15) throw DomainError("partition and interval constants use different nu");
    const double gc = (3.0 - p.nu) / 4.0;
    const FormSpec spec = FormSpec::general(k.alpha, k.beta);
    struct Row {
        double trace;
        std::size_t count;
    };
    const auto rows = parallel_map(
        p.rescaled.size(),
        [&](std::size_t j) {
            const auto& r = p.rescaled[j];
            const auto sys = assemble(spec, interval_mesh(r.b, cells), BoundaryCondition::free, r.v);
            const auto s = negative_eigenvalues(sys.K, sys.M_V, sys.M, 1e-12);
            const double len = r.a_hi - r.a_lo;
            return Row{riesz_mean(s.negatives, gc) * std::pow(len, -(3.0 - p.nu)), s.count};
        },
        threads);
    ChainCheck c;
    c.intervals = rows.size();
    for (const Row& r : rows) {
        c.lhs += r.trace;
        c.max_count = std::max(c.max_count, r.count);
    }
    c.rhs = 2.0 * std::pow(k.E_nu, gc) / k.D_nu * p.total_moment;
    c.pass = c.lhs <= c.rhs;
    return c;
}

}  // namespace hrl
