#pragma once

// Uniform unit reference vectors on the nonnegative orthant (simplex
// lattice, optionally two layers) and their per-generation adaptation to
// the observed objective ranges.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lsmop.hpp"

namespace moeacsod {

namespace detail {

/// Scales v to unit Euclidean norm, iterating until the norm computes as
/// exactly 1.0 so that renormalizing an already-unit vector is a bitwise
/// no-op.
inline void normalize_unit(std::vector<double>& v) {
    for (int pass = 0; pass < 16; ++pass) {
        double sq = 0.0;
        for (double c : v) sq += c * c;
        const double norm = std::sqrt(sq);
        if (norm == 0.0) throw std::invalid_argument("normalize_unit: zero vector");
        if (norm == 1.0) return;
        bool changed = false;
        for (double& c : v) {
            const double scaled = c / norm;
            if (scaled != c) changed = true;
            c = scaled;
        }
        if (!changed) return;
    }
}

}  // namespace detail

/// Per-vector smallest angle to any other vector in the set, dot products
/// clamped into [-1, 1] before acos.
inline std::vector<double> min_angles(const std::vector<std::vector<double>>& vectors) {
    const std::size_t n = vectors.size();
    if (n < 2) throw std::invalid_argument("min_angles: need at least 2 vectors");
    std::vector<double> gamma(n, 4.0);  // > pi
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            if (i == j) continue;
            double dot = 0.0;
            for (std::size_t k = 0; k < vectors[j].size(); ++k) dot += vectors[i][k] * vectors[j][k];
            dot = std::min(1.0, std::max(-1.0, dot));
            gamma[j] = std::min(gamma[j], std::acos(dot));
        }
    }
    return gamma;
}

/// All compositions (c_1..c_M) with sum H mapped to c/H and pushed onto the
/// unit sphere. Count = C(H+M-1, M-1).
inline std::vector<std::vector<double>> simplex_lattice(int m, int h) {
    if (m < 1 || h < 1) throw std::invalid_argument("simplex_lattice: M and H must be >= 1");
    const auto combos = detail::enumerate_compositions(m, h);
    std::vector<std::vector<double>> vectors;
    vectors.reserve(combos.size());
    for (const auto& c : combos) {
        std::vector<double> v(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) v[static_cast<std::size_t>(k)] = static_cast<double>(c[static_cast<std::size_t>(k)]) / h;
        detail::normalize_unit(v);
        vectors.push_back(std::move(v));
    }
    return vectors;
}

/// Outer simplex lattice of resolution H1 plus an inner lattice of
/// resolution H2 shrunk halfway toward the centroid, duplicates removed.
inline std::vector<std::vector<double>> two_layer_vectors(int m, int h1, int h2) {
    if (m < 2) throw std::invalid_argument("two_layer_vectors: M must be >= 2");
    auto vectors = simplex_lattice(m, h1);
    const double centroid = 0.5 / m;
    for (const auto& c : detail::enumerate_compositions(m, h2)) {
        std::vector<double> v(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) {
            v[static_cast<std::size_t>(k)] = 0.5 * static_cast<double>(c[static_cast<std::size_t>(k)]) / h2 + centroid;
        }
        detail::normalize_unit(v);
        bool duplicate = false;
        for (const auto& existing : vectors) {
            double diff = 0.0;
            for (int k = 0; k < m; ++k) diff = std::max(diff, std::fabs(existing[static_cast<std::size_t>(k)] - v[static_cast<std::size_t>(k)]));
            if (diff < 1e-10) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) vectors.push_back(std::move(v));
    }
    return vectors;
}

struct ReferenceVectorSet {
    std::vector<std::vector<double>> initial;
    std::vector<std::vector<double>> current;
    std::vector<double> min_angle;

    static ReferenceVectorSet make(std::vector<std::vector<double>> vectors) {
        if (vectors.size() < 2) {
            throw std::invalid_argument("ReferenceVectorSet: need at least 2 vectors");
        }
        ReferenceVectorSet set;
        set.initial = vectors;
        set.current = std::move(vectors);
        set.min_angle = min_angles(set.current);
        return set;
    }

    std::size_t size() const { return current.size(); }
};

/// Re-aims the current vectors at the observed objective ranges:
/// current_i = normalize(initial_i * (zmax - zmin)), elementwise. Zero
/// range components are widened to 1e-12; an all-zero range is an error.
inline ReferenceVectorSet adapt(const ReferenceVectorSet& set, const std::vector<double>& zmax,
                                const std::vector<double>& zmin) {
    if (zmax.size() != zmin.size() || (set.size() > 0 && zmax.size() != set.initial[0].size())) {
        throw std::invalid_argument("adapt: range dimension mismatch");
    }
    std::vector<double> range(zmax.size());
    bool any_positive = false;
    for (std::size_t k = 0; k < zmax.size(); ++k) {
        if (zmax[k] < zmin[k]) throw std::invalid_argument("adapt: zmax must dominate zmin");
        range[k] = zmax[k] - zmin[k];
        if (range[k] > 0.0) any_positive = true;
        if (range[k] == 0.0) range[k] = 1e-12;
    }
    if (!any_positive) throw std::invalid_argument("adapt: degenerate objective range (zmax == zmin)");

    ReferenceVectorSet out;
    out.initial = set.initial;
    out.current.reserve(set.initial.size());
    for (const auto& v0 : set.initial) {
        std::vector<double> v(v0.size());
        for (std::size_t k = 0; k < v0.size(); ++k) v[k] = v0[k] * range[k];
        detail::normalize_unit(v);
        out.current.push_back(std::move(v));
    }
    out.min_angle = min_angles(out.current);
    return out;
}

}  // namespace moeacsod
