// SPDX-License-Identifier: Apache-2.0
//
// cfsound - drone virtual-array channel sounding and cell-free massive MIMO analysis
// Copyright (C) 2026 cfsound contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Independent reference computations the tests compare the library against.
// These intentionally avoid the code paths under test: plain loops instead
// of Eigen expressions, an eigen-decomposition instead of a linear solve,
// point sampling instead of slab clipping.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cfsound/geometry.hpp>
#include <cfsound/rng.hpp>

namespace oracle {

// Friis free-space power gain at distance d, evaluated in extended precision.
inline double friis_linear(double distance_m, double carrier_hz) {
    const long double c = 299792458.0L;
    const long double pi = 3.14159265358979323846264338327950288L;
    const long double amplitude =
        c / (4.0L * pi * static_cast<long double>(distance_m) *
             static_cast<long double>(carrier_hz));
    return static_cast<double>(amplitude * amplitude);
}

inline double friis_db(double distance_m, double carrier_hz) {
    return static_cast<double>(
        10.0L * std::log10(static_cast<long double>(friis_linear(distance_m, carrier_hz))));
}

// Eq.-style SINR quotient evaluated with plain scalar loops.
inline double sinr_quotient(const std::vector<std::complex<double>>& v,
                            const std::vector<std::vector<std::complex<double>>>& h,
                            std::size_t k, double p, double noise) {
    const auto inner = [](const std::vector<std::complex<double>>& a,
                          const std::vector<std::complex<double>>& b) {
        std::complex<double> s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += std::conj(a[i]) * b[i];
        return s;
    };
    const double signal = p * std::norm(inner(v, h[k]));
    double denom = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i)
        if (i != k)
            denom += p * std::norm(inner(v, h[i]));
    denom += noise * inner(v, v).real(); // sigma^2 |v|^2
    return signal / denom;
}

// Largest generalized eigenvalue of p h_k h_k^H x = lambda B_k x, i.e. the
// maximum of the SINR Rayleigh quotient, via a full eigen-decomposition.
inline double generalized_max_sinr(const std::vector<Eigen::VectorXcd>& h, std::size_t k,
                                   double p, double noise) {
    const Eigen::Index m = h.front().size();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m, m);
    a.noalias() += p * h[k] * h[k].adjoint();
    Eigen::MatrixXcd b = noise * Eigen::MatrixXcd::Identity(m, m);
    for (std::size_t i = 0; i < h.size(); ++i)
        if (i != k)
            b.noalias() += p * h[i] * h[i].adjoint();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        a, b, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    return solver.eigenvalues().maxCoeff();
}

// Brute-force point-sampling segment/box intersection at 1 mm steps. A hit is
// conclusive; a miss can be a thin clip, so tests only use the implication
// "sampled hit => intersection".
inline bool sampled_intersection(const cfsound::Vec3& a, const cfsound::Vec3& b,
                                 const cfsound::BuildingBox& box,
                                 double step_m = 0.001) {
    const double length = distance(a, b);
    const auto n_steps = static_cast<std::size_t>(std::ceil(length / step_m));
    for (std::size_t i = 0; i <= n_steps; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n_steps);
        const cfsound::Vec3 point = {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y),
                                     a.z + t * (b.z - a.z)};
        if (box.contains(point))
            return true;
    }
    return false;
}

// Random unit-norm complex combiner for probe-based optimality checks.
inline Eigen::VectorXcd random_unit_combiner(cfsound::Rng& rng, Eigen::Index m) {
    Eigen::VectorXcd v(m);
    for (Eigen::Index i = 0; i < m; ++i)
        v[i] = rng.normal_complex();
    return v / v.norm();
}

// Random multi-user channel instance with per-user scale spread.
struct Instance {
    std::vector<Eigen::VectorXcd> h;
    double p = 1.0;
    double noise = 1.0;
};

inline Instance random_instance(std::uint64_t seed, int max_m = 32, int max_k = 8) {
    cfsound::Rng rng(seed);
    Instance instance;
    const auto m = static_cast<Eigen::Index>(1 + rng.below(static_cast<std::uint64_t>(max_m)));
    const auto k = 1 + rng.below(static_cast<std::uint64_t>(max_k));
    for (std::uint64_t u = 0; u < k; ++u) {
        const double scale = std::pow(10.0, rng.uniform(-2.0, 0.0));
        Eigen::VectorXcd h(m);
        for (Eigen::Index i = 0; i < m; ++i)
            h[i] = scale * rng.normal_complex();
        instance.h.push_back(std::move(h));
    }
    instance.p = std::pow(10.0, rng.uniform(-1.0, 1.0));
    instance.noise = std::pow(10.0, rng.uniform(-3.0, 0.0));
    return instance;
}

} // namespace oracle
