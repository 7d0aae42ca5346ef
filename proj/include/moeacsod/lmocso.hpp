#pragma once

// Competitive-swarm offspring operator: shift-based fitness, random pairwise
// competition with a velocity/position update for the losing particle, and
// polynomial mutation.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "core.hpp"

namespace moeacsod {

struct MutationParams {
    double pm = 0.0;      // per-variable mutation probability
    double eta_m = 20.0;  // distribution index

    MutationParams() = default;
    MutationParams(double pm_, double eta) : pm(pm_), eta_m(eta) {
        if (pm < 0.0 || pm > 1.0) throw std::invalid_argument("MutationParams: pm must be in [0,1]");
        if (eta_m <= 0.0) throw std::invalid_argument("MutationParams: eta_m must be positive");
    }
};

/// Shift-based fitness: distance from p to the nearest "improvement
/// shadow" of any other member. Zero exactly when p is weakly dominated.
inline std::vector<double> shift_fitness(const Population& pop) {
    const std::size_t n = pop.size();
    if (n < 2) throw std::invalid_argument("shift_fitness: need at least 2 members");
    std::vector<double> fitness(n, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
        double best = -1.0;
        for (std::size_t q = 0; q < n; ++q) {
            if (q == p) continue;
            double sq = 0.0;
            for (std::size_t k = 0; k < pop.members[p].f.size(); ++k) {
                const double d = pop.members[q].f[k] - pop.members[p].f[k];
                if (d > 0.0) sq += d * d;
            }
            const double dist = std::sqrt(sq);
            if (best < 0.0 || dist < best) best = dist;
        }
        fitness[p] = best;
    }
    return fitness;
}

/// Velocity/position update of the losing particle toward the winner:
///   v' = r0*v + r1*(x_w - x), x' = x + v' + r0*(v' - v)
/// with the position clipped to bounds afterwards. Objectives are cleared
/// (the particle moved), the stored velocity is v'.
inline Individual cso_update(const Individual& loser, const Individual& winner, double r0,
                             double r1, const Bounds& bounds) {
    Individual out;
    const std::size_t d = loser.x.size();
    out.x.resize(d);
    out.v.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double v_new = r0 * loser.v[i] + r1 * (winner.x[i] - loser.x[i]);
        out.v[i] = v_new;
        out.x[i] = loser.x[i] + v_new + r0 * (v_new - loser.v[i]);
    }
    clip_to_bounds(out.x, bounds);
    return out;
}

struct CompetitionOutcome {
    std::vector<Individual> updated;             // losers after the velocity update
    std::vector<std::size_t> updated_indices;    // their positions in the input population
    std::vector<std::size_t> untouched_indices;  // winners and the unpaired leftover
};

/// Shuffles the population into random pairs and updates the lower-fitness
/// member of each pair (ties keep the first of the pair as winner; an odd
/// leftover passes through untouched). Draw order: one shuffle, then r0 and
/// r1 per pair in pair order.
inline CompetitionOutcome compete_and_update(const Population& pop, const Bounds& bounds,
                                             RngStream& rng) {
    const std::size_t n = pop.size();
    if (n < 2) throw std::invalid_argument("compete_and_update: need at least 2 members");
    const std::vector<double> fitness = shift_fitness(pop);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    CompetitionOutcome outcome;
    for (std::size_t p = 0; p + 1 < n; p += 2) {
        const std::size_t a = order[p];
        const std::size_t b = order[p + 1];
        const std::size_t winner = fitness[b] > fitness[a] ? b : a;
        const std::size_t loser = winner == a ? b : a;
        const double r0 = rng.uniform();
        const double r1 = rng.uniform();
        outcome.updated.push_back(cso_update(pop.members[loser], pop.members[winner], r0, r1, bounds));
        outcome.updated_indices.push_back(loser);
        outcome.untouched_indices.push_back(winner);
    }
    if (n % 2 == 1) outcome.untouched_indices.push_back(order[n - 1]);
    return outcome;
}

/// Standard polynomial mutation: each variable flips with probability pm
/// and is perturbed with distribution index eta_m; result clipped to
/// bounds. Draw order per variable: the gate uniform, then (only when the
/// gate fires) the perturbation uniform.
inline std::vector<double> polynomial_mutation(const std::vector<double>& x, const Bounds& bounds,
                                               const MutationParams& params, RngStream& rng) {
    std::vector<double> out = x;
    const double eta = params.eta_m;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (rng.uniform() >= params.pm) continue;
        const double lo = bounds.lower[i];
        const double hi = bounds.upper[i];
        const double span = hi - lo;
        const double u = rng.uniform();
        double delta;
        if (u < 0.5) {
            const double d1 = (out[i] - lo) / span;
            const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta + 1.0);
            delta = std::pow(val, 1.0 / (eta + 1.0)) - 1.0;
        } else {
            const double d2 = (hi - out[i]) / span;
            const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, eta + 1.0);
            delta = 1.0 - std::pow(val, 1.0 / (eta + 1.0));
        }
        out[i] += delta * span;
    }
    clip_to_bounds(out, bounds);
    return out;
}

}  // namespace moeacsod
