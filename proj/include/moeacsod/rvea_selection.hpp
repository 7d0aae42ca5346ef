#pragma once

// Reference-vector-guided environmental selection: translate objectives to
// the nonnegative orthant, partition the population by maximal cosine to a
// reference vector, score each member with the angle-penalized distance and
// keep the best member per vector.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "refvec.hpp"

namespace moeacsod {

struct TranslatedObjectives {
    std::vector<std::vector<double>> values;
    std::vector<double> zmin;
};

struct ApdParams {
    int num_objectives = 2;
    int generation = 0;       // t
    int max_generations = 1;  // t_max
    double alpha = 2.0;
};

/// Shifts all objective vectors by the componentwise minimum so every
/// objective has minimum zero; order preserved.
inline TranslatedObjectives translate(const std::vector<std::vector<double>>& objectives) {
    if (objectives.empty()) throw std::invalid_argument("translate: empty objective list");
    const std::size_t m = objectives[0].size();
    TranslatedObjectives out;
    out.zmin.assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        double lo = objectives[0][k];
        for (const auto& f : objectives) lo = std::min(lo, f[k]);
        out.zmin[k] = lo;
    }
    out.values.reserve(objectives.size());
    for (const auto& f : objectives) {
        std::vector<double> shifted(m);
        for (std::size_t k = 0; k < m; ++k) shifted[k] = f[k] - out.zmin[k];
        out.values.push_back(std::move(shifted));
    }
    return out;
}

namespace detail {

inline double l2_norm(const std::vector<double>& v) {
    double sq = 0.0;
    for (double c : v) sq += c * c;
    return std::sqrt(sq);
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

/// cos of the angle between a translated objective vector and a unit
/// reference vector; a member sitting at the ideal point counts as
/// perfectly aligned (angle zero).
inline double cosine_to_vector(const std::vector<double>& translated,
                               const std::vector<double>& unit_vector) {
    const double norm = l2_norm(translated);
    if (norm == 0.0) return 1.0;
    double c = dot(translated, unit_vector) / norm;
    return std::min(1.0, std::max(-1.0, c));
}

}  // namespace detail

/// Assigns every individual to the reference vector of maximal cosine
/// (lowest index wins ties); returns one index list per vector. A member at
/// the ideal point goes to vector 0.
inline std::vector<std::vector<std::size_t>> partition(
    const TranslatedObjectives& translated, const std::vector<std::vector<double>>& vectors) {
    if (vectors.empty()) throw std::invalid_argument("partition: empty vector set");
    std::vector<std::vector<std::size_t>> subpops(vectors.size());
    for (std::size_t i = 0; i < translated.values.size(); ++i) {
        std::size_t best = 0;
        double best_cos = -2.0;
        for (std::size_t j = 0; j < vectors.size(); ++j) {
            const double c = detail::cosine_to_vector(translated.values[i], vectors[j]);
            if (c > best_cos) {
                best_cos = c;
                best = j;
            }
        }
        subpops[best].push_back(i);
    }
    return subpops;
}

/// Angle-penalized distance (1 + P(theta)) * |f'| with
/// P = M * (t/t_max)^alpha * theta/gamma.
inline double apd(const std::vector<double>& translated, double theta, double gamma,
                  const ApdParams& params) {
    if (gamma <= 0.0) throw std::invalid_argument("apd: gamma must be positive");
    if (theta < 0.0) throw std::invalid_argument("apd: theta must be nonnegative");
    const double ratio = params.max_generations > 0
                             ? static_cast<double>(params.generation) / params.max_generations
                             : 0.0;
    const double penalty =
        params.num_objectives * std::pow(ratio, params.alpha) * (theta / gamma);
    return (1.0 + penalty) * detail::l2_norm(translated);
}

/// Full environmental selection; the survivor set holds exactly one member
/// per non-empty partition (minimal APD, lowest index on ties) and may be
/// smaller than the vector count.
inline Population elitist_select(const Population& pop, const ReferenceVectorSet& vectors,
                                 const ApdParams& params) {
    if (pop.members.empty()) throw std::invalid_argument("elitist_select: empty population");
    std::vector<std::vector<double>> objectives;
    objectives.reserve(pop.size());
    for (const auto& member : pop.members) objectives.push_back(member.f);

    const TranslatedObjectives translated = translate(objectives);
    const auto subpops = partition(translated, vectors.current);

    Population selected;
    selected.generation = pop.generation;
    for (std::size_t j = 0; j < subpops.size(); ++j) {
        if (subpops[j].empty()) continue;
        const double gamma = vectors.min_angle[j];
        std::size_t best_index = subpops[j][0];
        double best_apd = 0.0;
        bool first = true;
        for (const std::size_t i : subpops[j]) {
            const double c = detail::cosine_to_vector(translated.values[i], vectors.current[j]);
            const double theta = std::acos(c);
            const double d = apd(translated.values[i], theta, gamma, params);
            if (first || d < best_apd) {
                best_apd = d;
                best_index = i;
                first = false;
            }
        }
        selected.members.push_back(pop.members[best_index]);
    }
    return selected;
}

}  // namespace moeacsod
