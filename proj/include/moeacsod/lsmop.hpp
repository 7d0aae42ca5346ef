#pragma once

// The LSMOP1-LSMOP9 large-scale benchmark problems.
//
// Every instance follows the generic form f_k = h_k(x^f) * (1 + g_k(x^s)):
// the first M-1 variables (x^f) control the position on the front through
// the shape functions h_k, the remaining D-M+1 variables (x^s) feed the
// landscape functions g_k after a variable-linkage transform. LSMOP1-4 use
// a linear linkage and a linear (simplex) front, LSMOP5-8 a nonlinear
// linkage and a spherical front, LSMOP9 a nonlinear linkage and a
// disconnected front.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "core.hpp"

namespace moeacsod {

enum class Linkage { Linear, Nonlinear };
enum class PfShape { LinearSimplex, Sphere, Disconnected };
enum class LandscapeFn { Sphere, Schwefel, Rosenbrock, Rastrigin, Griewank, Ackley };

struct LsmopInstance {
    int id = 0;               // 1..9
    int num_objectives = 0;   // M
    int dimension = 0;        // D
    int position_len = 0;     // |x^f| = M-1
    int distance_len = 0;     // |x^s| = D-M+1
    Bounds bounds;            // x^f in [0,1], x^s in [0,10]
    Linkage linkage = Linkage::Linear;
    PfShape pf_shape = PfShape::LinearSimplex;
    std::vector<LandscapeFn> landscape;            // one per objective
    std::vector<std::pair<int, int>> groups;       // per objective [begin,end) into x^s
};

namespace detail {

// Landscape pool. All functions are nonnegative with minimum value zero
// (at y = 0, except Rosenbrock whose minimum sits at y = 1).
inline double landscape_value(LandscapeFn fn, const double* y, int n) {
    if (n == 0) return 0.0;
    switch (fn) {
        case LandscapeFn::Sphere: {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += y[i] * y[i];
            return s;
        }
        case LandscapeFn::Schwefel: {
            double m = 0.0;
            for (int i = 0; i < n; ++i) m = std::max(m, std::fabs(y[i]));
            return m;
        }
        case LandscapeFn::Rosenbrock: {
            if (n == 1) return (y[0] - 1.0) * (y[0] - 1.0);
            double s = 0.0;
            for (int i = 0; i + 1 < n; ++i) {
                const double a = y[i] * y[i] - y[i + 1];
                const double b = y[i] - 1.0;
                s += 100.0 * a * a + b * b;
            }
            return s;
        }
        case LandscapeFn::Rastrigin: {
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                s += y[i] * y[i] - 10.0 * std::cos(2.0 * 3.141592653589793 * y[i]) + 10.0;
            }
            return s;
        }
        case LandscapeFn::Griewank: {
            double s = 0.0, p = 1.0;
            for (int i = 0; i < n; ++i) {
                s += y[i] * y[i] / 4000.0;
                p *= std::cos(y[i] / std::sqrt(static_cast<double>(i + 1)));
            }
            return 1.0 + s - p;
        }
        case LandscapeFn::Ackley: {
            double sq = 0.0, cs = 0.0;
            for (int i = 0; i < n; ++i) {
                sq += y[i] * y[i];
                cs += std::cos(2.0 * 3.141592653589793 * y[i]);
            }
            const double inv = 1.0 / n;
            return 20.0 + 2.718281828459045 - 20.0 * std::exp(-0.2 * std::sqrt(sq * inv)) -
                   std::exp(cs * inv);
        }
    }
    return 0.0;
}

/// y value at which the landscape attains its zero minimum.
inline double landscape_minimizer(LandscapeFn fn) {
    return fn == LandscapeFn::Rosenbrock ? 1.0 : 0.0;
}

inline std::pair<LandscapeFn, LandscapeFn> landscape_pair(int id) {
    switch (id) {
        case 1: return {LandscapeFn::Sphere, LandscapeFn::Sphere};
        case 2: return {LandscapeFn::Griewank, LandscapeFn::Schwefel};
        case 3: return {LandscapeFn::Rastrigin, LandscapeFn::Rosenbrock};
        case 4: return {LandscapeFn::Ackley, LandscapeFn::Griewank};
        case 5: return {LandscapeFn::Sphere, LandscapeFn::Sphere};
        case 6: return {LandscapeFn::Rosenbrock, LandscapeFn::Schwefel};
        case 7: return {LandscapeFn::Ackley, LandscapeFn::Rosenbrock};
        case 8: return {LandscapeFn::Griewank, LandscapeFn::Sphere};
        default: return {LandscapeFn::Sphere, LandscapeFn::Ackley};  // id 9
    }
}

// Shape functions. For the simplex shape sum_k h_k = 1, for the sphere
// shape sum_k h_k^2 = 1; the disconnected shape keeps the first M-1
// coordinates and folds the trade-off surface into the last objective.
inline std::vector<double> shape_values(PfShape shape, const std::vector<double>& xf, int m) {
    std::vector<double> h(static_cast<std::size_t>(m));
    constexpr double half_pi = 1.5707963267948966;
    switch (shape) {
        case PfShape::LinearSimplex: {
            for (int k = 0; k < m; ++k) {
                double value = 1.0;
                for (int i = 0; i < m - 1 - k; ++i) value *= xf[static_cast<std::size_t>(i)];
                if (k > 0) value *= 1.0 - xf[static_cast<std::size_t>(m - 1 - k)];
                h[static_cast<std::size_t>(k)] = value;
            }
            break;
        }
        case PfShape::Sphere: {
            for (int k = 0; k < m; ++k) {
                double value = 1.0;
                for (int i = 0; i < m - 1 - k; ++i) {
                    value *= std::cos(half_pi * xf[static_cast<std::size_t>(i)]);
                }
                if (k > 0) value *= std::sin(half_pi * xf[static_cast<std::size_t>(m - 1 - k)]);
                h[static_cast<std::size_t>(k)] = value;
            }
            break;
        }
        case PfShape::Disconnected: {
            double trade = 0.0;
            for (int i = 0; i < m - 1; ++i) {
                const double xi = xf[static_cast<std::size_t>(i)];
                trade += 0.5 * xi * (1.0 + std::sin(3.0 * 3.141592653589793 * xi));
                h[static_cast<std::size_t>(i)] = xi;
            }
            h[static_cast<std::size_t>(m - 1)] = 2.0 * (m - trade);
            break;
        }
    }
    return h;
}

}  // namespace detail

inline LsmopInstance make_instance(int id, int m, int d) {
    if (id < 1 || id > 9) throw std::invalid_argument("make_instance: id must be in 1..9");
    if (m < 2) throw std::invalid_argument("make_instance: need at least 2 objectives");
    if (d <= m - 1) throw std::invalid_argument("make_instance: D must exceed M-1");

    LsmopInstance inst;
    inst.id = id;
    inst.num_objectives = m;
    inst.dimension = d;
    inst.position_len = m - 1;
    inst.distance_len = d - (m - 1);
    inst.linkage = id <= 4 ? Linkage::Linear : Linkage::Nonlinear;
    inst.pf_shape = id <= 4 ? PfShape::LinearSimplex
                            : (id <= 8 ? PfShape::Sphere : PfShape::Disconnected);

    std::vector<double> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    for (int i = 0; i < inst.position_len; ++i) {
        lo[static_cast<std::size_t>(i)] = 0.0;
        hi[static_cast<std::size_t>(i)] = 1.0;
    }
    for (int i = inst.position_len; i < d; ++i) {
        lo[static_cast<std::size_t>(i)] = 0.0;
        hi[static_cast<std::size_t>(i)] = 10.0;
    }
    inst.bounds = Bounds(std::move(lo), std::move(hi));

    const auto [odd_fn, even_fn] = detail::landscape_pair(id);
    inst.landscape.resize(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        inst.landscape[static_cast<std::size_t>(k)] = (k % 2 == 0) ? odd_fn : even_fn;
    }

    // Contiguous, equal-as-possible split of x^s into M groups.
    inst.groups.resize(static_cast<std::size_t>(m));
    const int base = inst.distance_len / m;
    const int extra = inst.distance_len % m;
    int begin = 0;
    for (int k = 0; k < m; ++k) {
        const int len = base + (k < extra ? 1 : 0);
        inst.groups[static_cast<std::size_t>(k)] = {begin, begin + len};
        begin += len;
    }
    return inst;
}

/// Variable-linkage transform of the distance part x^s (1-based index i):
///   linear:    (1 + i/|x^s|) * (x_i - l_i) - x1f * (u_i - l_i)
///   nonlinear: (1 + cos(0.5*pi*i/|x^s|)) * (x_i - l_i) - x1f * (u_i - l_i)
inline std::vector<double> apply_linkage(const LsmopInstance& inst, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != inst.dimension) {
        throw std::invalid_argument("apply_linkage: decision vector length mismatch");
    }
    const double x1f = x[0];
    const int offset = inst.position_len;
    const int n = inst.distance_len;
    std::vector<double> y(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const std::size_t gi = static_cast<std::size_t>(offset + i - 1);
        const double lo = inst.bounds.lower[gi];
        const double hi = inst.bounds.upper[gi];
        const double frac = static_cast<double>(i) / n;
        const double coef = inst.linkage == Linkage::Linear
                                ? 1.0 + frac
                                : 1.0 + std::cos(0.5 * 3.141592653589793 * frac);
        y[static_cast<std::size_t>(i - 1)] = coef * (x[gi] - lo) - x1f * (hi - lo);
    }
    return y;
}

inline std::vector<double> evaluate(const LsmopInstance& inst, const std::vector<double>& x) {
    const int m = inst.num_objectives;
    const std::vector<double> linked = apply_linkage(inst, x);
    const std::vector<double> xf(x.begin(), x.begin() + inst.position_len);
    const std::vector<double> h = detail::shape_values(inst.pf_shape, xf, m);

    std::vector<double> f(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const auto [gb, ge] = inst.groups[static_cast<std::size_t>(k)];
        const int len = ge - gb;
        double g = detail::landscape_value(inst.landscape[static_cast<std::size_t>(k)],
                                           linked.data() + gb, len);
        if (len > 0) g /= len;
        f[static_cast<std::size_t>(k)] = h[static_cast<std::size_t>(k)] * (1.0 + g);
        if (!std::isfinite(f[static_cast<std::size_t>(k)])) {
            throw EvaluationError("evaluate: objective " + std::to_string(k + 1) + " is not finite", k);
        }
    }
    return f;
}

namespace detail {

inline void compositions(int m, int h, std::vector<int>& current,
                         std::vector<std::vector<int>>& out) {
    if (static_cast<int>(current.size()) == m - 1) {
        current.push_back(h);
        out.push_back(current);
        current.pop_back();
        return;
    }
    for (int c = h; c >= 0; --c) {
        current.push_back(c);
        compositions(m, h - c, current, out);
        current.pop_back();
    }
}

/// All nonnegative integer M-tuples summing to H, first coordinate descending.
inline std::vector<std::vector<int>> enumerate_compositions(int m, int h) {
    std::vector<std::vector<int>> out;
    std::vector<int> current;
    compositions(m, h, current, out);
    return out;
}

/// Values of t in [0,1] whose trade-off term is a strict running maximum;
/// the Cartesian product of this set gives the disconnected front.
inline std::vector<double> disconnected_front_support(int grid) {
    std::vector<double> kept;
    double best = -1.0;
    for (int i = 0; i <= grid; ++i) {
        const double t = static_cast<double>(i) / grid;
        const double psi = t * (1.0 + std::sin(3.0 * 3.141592653589793 * t));
        if (psi > best) {
            best = psi;
            kept.push_back(t);
        }
    }
    return kept;
}

}  // namespace detail

/// Deterministic sample of the instance's true Pareto front: a simplex
/// lattice for LSMOP1-4, the same lattice pushed onto the unit sphere for
/// LSMOP5-8, and the product structure of the disconnected front for
/// LSMOP9. Returns at least `count` points.
inline std::vector<std::vector<double>> sample_pf(const LsmopInstance& inst, int count) {
    if (count < 1) throw std::invalid_argument("sample_pf: count must be >= 1");
    const int m = inst.num_objectives;
    std::vector<std::vector<double>> points;

    if (inst.pf_shape == PfShape::Disconnected) {
        const std::vector<double> support = detail::disconnected_front_support(100000);
        int side = 1;
        while (std::pow(static_cast<double>(side), m - 1) < static_cast<double>(count)) ++side;
        side = std::min<int>(side, static_cast<int>(support.size()));
        std::vector<double> axis(static_cast<std::size_t>(side));
        for (int i = 0; i < side; ++i) {
            const std::size_t idx =
                side == 1 ? 0 : (i * (support.size() - 1)) / static_cast<std::size_t>(side - 1);
            axis[static_cast<std::size_t>(i)] = support[idx];
        }
        std::vector<int> digit(static_cast<std::size_t>(m - 1), 0);
        for (;;) {
            std::vector<double> xf(static_cast<std::size_t>(m - 1));
            for (int i = 0; i < m - 1; ++i) xf[static_cast<std::size_t>(i)] = axis[static_cast<std::size_t>(digit[static_cast<std::size_t>(i)])];
            points.push_back(detail::shape_values(PfShape::Disconnected, xf, m));
            int pos = m - 2;
            while (pos >= 0 && ++digit[static_cast<std::size_t>(pos)] == side) {
                digit[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
        return points;
    }

    // Smallest lattice resolution whose size covers the request.
    int h = 1;
    for (;;) {
        double size = 1.0;
        for (int i = 1; i <= m - 1; ++i) size = size * (h + i) / i;  // C(h+m-1, m-1)
        if (size >= static_cast<double>(count)) break;
        ++h;
    }
    const auto combos = detail::enumerate_compositions(m, h);
    points.reserve(combos.size());
    for (const auto& c : combos) {
        std::vector<double> p(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) p[static_cast<std::size_t>(k)] = static_cast<double>(c[static_cast<std::size_t>(k)]) / h;
        if (inst.pf_shape == PfShape::Sphere) {
            double norm = 0.0;
            for (double v : p) norm += v * v;
            norm = std::sqrt(norm);
            for (double& v : p) v /= norm;
        }
        points.push_back(std::move(p));
    }
    return points;
}

}  // namespace moeacsod
