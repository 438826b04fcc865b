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

#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace cfsound {

// Uplink power budget in linear units (only the ratio p / noise enters the
// SNR and SINR expressions, so any consistent unit works).
struct UplinkPower {
    double p_tx = 1.0;
    double noise = 1e-9;

    void validate() const {
        if (!(p_tx > 0.0) || !(noise > 0.0))
            throw std::invalid_argument("UplinkPower: transmit and noise power must be positive.");
    }
};

namespace detail {

inline void check_channels(const std::vector<Eigen::VectorXcd>& h, std::size_t k) {
    if (h.empty())
        throw std::invalid_argument("combining: need at least one user channel.");
    if (k >= h.size())
        throw std::invalid_argument("combining: user index out of range.");
    const Eigen::Index m = h.front().size();
    if (m < 1)
        throw std::invalid_argument("combining: empty channel vector.");
    for (const auto& v : h)
        if (v.size() != m)
            throw std::invalid_argument("combining: inconsistent channel dimensions.");
}

} // namespace detail

// Maximum-ratio combined uplink SNR of one user over the selected access
// points, with the per-frequency channel energy averaged over the F
// realizations in `channels` (columns = frequency points, rows = APs):
// SNR = p / sigma^2 * sum_m sum_i |h_mi|^2 / F.
inline double mr_snr(const Eigen::MatrixXcd& channels, const UplinkPower& power) {
    power.validate();
    if (channels.size() == 0)
        throw std::invalid_argument("mr_snr: empty channel matrix.");
    const double mean_energy =
        channels.squaredNorm() / static_cast<double>(channels.cols());
    return power.p_tx / power.noise * mean_energy;
}

// SINR of user k under an arbitrary combining vector v (one frequency):
// p |v^H h_k|^2 / (p sum_{i != k} |v^H h_i|^2 + sigma^2 |v|^2).
// A zero combiner captures no signal; its SINR is 0 by convention.
inline double sinr_for_combiner(const Eigen::VectorXcd& v,
                                const std::vector<Eigen::VectorXcd>& h, std::size_t k,
                                const UplinkPower& power) {
    power.validate();
    detail::check_channels(h, k);
    if (v.size() != h.front().size())
        throw std::invalid_argument("sinr_for_combiner: combiner dimension mismatch.");
    const double v_norm2 = v.squaredNorm();
    if (v_norm2 == 0.0)
        return 0.0;
    const double signal = power.p_tx * std::norm(v.dot(h[k]));
    double interference = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i)
        if (i != k)
            interference += power.p_tx * std::norm(v.dot(h[i]));
    return signal / (interference + power.noise * v_norm2);
}

// Maximum-ratio combiner: v_k = h_k.
inline Eigen::VectorXcd mr_combiner(const std::vector<Eigen::VectorXcd>& h, std::size_t k) {
    detail::check_channels(h, k);
    return h[k];
}

// Interference-plus-noise covariance of user k:
// B_k = p sum_{i != k} h_i h_i^H + sigma^2 I. Hermitian positive definite for
// sigma^2 > 0.
inline Eigen::MatrixXcd interference_covariance(const std::vector<Eigen::VectorXcd>& h,
                                                std::size_t k, const UplinkPower& power) {
    power.validate();
    detail::check_channels(h, k);
    const Eigen::Index m = h.front().size();
    Eigen::MatrixXcd b = power.noise * Eigen::MatrixXcd::Identity(m, m);
    for (std::size_t i = 0; i < h.size(); ++i)
        if (i != k)
            b.noalias() += power.p_tx * h[i] * h[i].adjoint();
    return b;
}

// Optimum combiner v_k = B_k^{-1} h_k, the maximizer of the generalized
// Rayleigh quotient behind the SINR expression. Solved with a Cholesky
// factorization of the Hermitian positive definite covariance.
inline Eigen::VectorXcd optimum_combiner(const std::vector<Eigen::VectorXcd>& h, std::size_t k,
                                         const UplinkPower& power) {
    const Eigen::MatrixXcd b = interference_covariance(h, k, power);
    Eigen::LLT<Eigen::MatrixXcd> llt(b);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("optimum_combiner: covariance factorization failed.");
    return llt.solve(h[k]);
}

// The SINR the optimum combiner attains: p h_k^H B_k^{-1} h_k.
inline double optimum_sinr(const std::vector<Eigen::VectorXcd>& h, std::size_t k,
                           const UplinkPower& power) {
    const Eigen::MatrixXcd b = interference_covariance(h, k, power);
    Eigen::LLT<Eigen::MatrixXcd> llt(b);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("optimum_sinr: covariance factorization failed.");
    return power.p_tx * h[k].dot(llt.solve(h[k])).real();
}

} // namespace cfsound
