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

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cfsound/channel_metrics.hpp"
#include "cfsound/geometry.hpp"
#include "cfsound/records.hpp"
#include "cfsound/rng.hpp"

namespace cfsound {

inline constexpr double kSpeedOfLight = 299792458.0;

// Synthetic ground-truth field parameters. The model family is log-distance
// path loss + spatially correlated log-normal shadowing + Rician multipath
// taps; every parameter is configurable and the whole field is a
// deterministic function of `seed`.
struct EnvironmentModel {
    double x_extent_m = 400.0;
    double y_extent_m = 200.0;
    std::vector<BuildingBox> buildings;

    double carrier_hz = 3.5e9;
    double bandwidth_hz = 46e6;
    int f_points = 64; // frequency realizations per record (F)

    double pathloss_exponent_los = 2.0;
    double pathloss_exponent_nlos = 3.5;
    double building_penetration_db = 20.0;

    double shadowing_sigma_db = 6.0;
    double shadowing_decorrelation_m = 25.0;

    double rician_k_los_db = 10.0;
    double rician_k_nlos_db = -std::numeric_limits<double>::infinity(); // pure Rayleigh
    int n_multipath_taps = 8;
    double max_excess_delay_s = 500e-9;

    std::uint64_t seed = 1;

    void validate() const {
        if (x_extent_m <= 0.0 || y_extent_m <= 0.0)
            throw std::invalid_argument("EnvironmentModel: area extents must be positive.");
        if (f_points < 1)
            throw std::invalid_argument("EnvironmentModel: F must be >= 1.");
        if (carrier_hz <= 0.0 || bandwidth_hz <= 0.0)
            throw std::invalid_argument("EnvironmentModel: carrier and bandwidth must be positive.");
        if (shadowing_sigma_db < 0.0)
            throw std::invalid_argument("EnvironmentModel: shadowing sigma must be >= 0.");
        if (shadowing_decorrelation_m <= 0.0)
            throw std::invalid_argument("EnvironmentModel: decorrelation distance must be positive.");
        if (n_multipath_taps < 1)
            throw std::invalid_argument("EnvironmentModel: need at least one multipath tap.");
        if (max_excess_delay_s < 0.0)
            throw std::invalid_argument("EnvironmentModel: max excess delay must be >= 0.");
        if (building_penetration_db < 0.0)
            throw std::invalid_argument("EnvironmentModel: penetration loss must be >= 0.");
        if (std::isnan(rician_k_los_db) || std::isnan(rician_k_nlos_db))
            throw std::invalid_argument("EnvironmentModel: Rician K must not be NaN.");
        for (const auto& b : buildings)
            if (b.x_max < b.x_min || b.y_max < b.y_min || b.height_m < 0.0)
                throw std::invalid_argument("EnvironmentModel: malformed building box.");
    }

    bool contains(const Vec3& p) const {
        return p.x >= 0.0 && p.x <= x_extent_m && p.y >= 0.0 && p.y <= y_extent_m;
    }
};

// Friis free-space power gain at distance d, i.e. (c / (4 pi d f))^2.
inline double friis_reference_db(double carrier_hz, double distance_m = 1.0) {
    return 20.0 * std::log10(kSpeedOfLight /
                             (4.0 * std::numbers::pi * distance_m * carrier_hz));
}

// Spatially correlated log-normal shadowing, evaluated on demand.
//
// The field is a fixed sum of N random-phase sinusoids over the joint 6-D
// (AP, UE) coordinate. Wave vectors are drawn from the spectral measure of
// the isotropic exponential covariance (a 6-D Cauchy law: the characteristic
// function of a standard multivariate Cauchy is exp(-|t|)), so the ensemble
// covariance between two links at joint distance r is
// sigma^2 * exp(-r / decorrelation). No grid is stored: re-flights querying
// the same coordinates always see the same value.
class ShadowingField {
  public:
    ShadowingField(std::uint64_t seed, double sigma_db, double decorrelation_m,
                   int n_terms = 768)
        : sigma_db_(sigma_db) {
        if (sigma_db_ == 0.0)
            return;
        terms_.resize(static_cast<std::size_t>(n_terms));
        for (std::size_t j = 0; j < terms_.size(); ++j) {
            Rng rng(seed_from(seed, RandomStream::kShadowing, j));
            std::array<double, 6> g;
            for (auto& v : g)
                v = rng.normal();
            const double chi = std::max(std::abs(rng.normal()), 1e-12);
            for (std::size_t d = 0; d < 6; ++d)
                terms_[j].wave[d] = g[d] / (chi * decorrelation_m);
            terms_[j].phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        }
        amplitude_ = sigma_db_ * std::sqrt(2.0 / static_cast<double>(terms_.size()));
    }

    double operator()(const Vec3& ap, const Vec3& ue) const {
        if (sigma_db_ == 0.0)
            return 0.0;
        const std::array<double, 6> p = {ap.x, ap.y, ap.z, ue.x, ue.y, ue.z};
        double sum = 0.0;
        for (const auto& t : terms_) {
            double arg = t.phase;
            for (std::size_t d = 0; d < 6; ++d)
                arg += t.wave[d] * p[d];
            sum += std::cos(arg);
        }
        return amplitude_ * sum;
    }

  private:
    struct Term {
        std::array<double, 6> wave;
        double phase;
    };
    std::vector<Term> terms_;
    double sigma_db_ = 0.0;
    double amplitude_ = 0.0;
};

// One propagation path: absolute delay and complex amplitude.
struct Tap {
    double delay_s = 0.0;
    std::complex<double> amplitude;
};

// Transfer function of a tapped delay line at F frequencies spaced evenly
// across `bandwidth_hz` around the carrier (offsets -B/2 .. +B/2; a single
// point sits at the carrier itself).
inline std::vector<std::complex<double>> evaluate_transfer(std::span<const Tap> taps,
                                                           int f_points,
                                                           double bandwidth_hz) {
    if (f_points < 1)
        throw std::invalid_argument("evaluate_transfer: F must be >= 1.");
    std::vector<std::complex<double>> h(static_cast<std::size_t>(f_points));
    for (int i = 0; i < f_points; ++i) {
        const double offset =
            f_points == 1 ? 0.0
                          : -bandwidth_hz / 2.0 +
                                static_cast<double>(i) * bandwidth_hz /
                                    static_cast<double>(f_points - 1);
        std::complex<double> sum = 0.0;
        for (const auto& tap : taps) {
            const double phi = -2.0 * std::numbers::pi * offset * tap.delay_s;
            sum += tap.amplitude * std::complex<double>(std::cos(phi), std::sin(phi));
        }
        h[static_cast<std::size_t>(i)] = sum;
    }
    return h;
}

// Immutable evaluator bound to one environment. Construction draws the
// shadowing basis once; all queries afterwards are pure functions of the
// inputs and safe to call concurrently.
class SyntheticField {
  public:
    explicit SyntheticField(EnvironmentModel env)
        : env_((env.validate(), std::move(env))),
          shadowing_(env_.seed, env_.shadowing_sigma_db, env_.shadowing_decorrelation_m) {}

    const EnvironmentModel& env() const { return env_; }

    LinkGeometry link(const Vec3& ap, const Vec3& ue) const {
        return make_link_geometry(ap, ue, env_.buildings);
    }

    double shadowing_db(const Vec3& ap, const Vec3& ue) const {
        return shadowing_(ap, ue);
    }

    // Large-scale mean gain: Friis 1 m reference, log-distance decay with the
    // LOS/NLOS exponent, penetration loss when blocked, plus the correlated
    // shadowing draw. Deterministic in (seed, positions).
    double mean_gain_db(const LinkGeometry& link) const {
        if (link.distance_m <= 0.0)
            throw std::invalid_argument("mean_gain_db: nonpositive link distance.");
        const double exponent =
            link.is_los ? env_.pathloss_exponent_los : env_.pathloss_exponent_nlos;
        double gain = friis_reference_db(env_.carrier_hz) -
                      10.0 * exponent * std::log10(link.distance_m);
        if (!link.is_los)
            gain -= env_.building_penetration_db;
        return gain + shadowing_(link.ap_position, link.ue_position);
    }

    // Draws the multipath taps of one link and evaluates the transfer
    // function at F frequencies. LOS links get one deterministic tap at the
    // geometric delay carrying the Rician LOS fraction K/(K+1); the remaining
    // power goes to diffuse complex-Gaussian taps at uniform excess delays.
    // Fading is keyed to the true sampling positions (static environment):
    // revisiting the exact same coordinates reproduces the channel
    // bit-identically, which is what makes re-flight jitter the sole source
    // of reproducibility error. `trial` stamps the record only.
    ChannelRecord sample_channel(const LinkGeometry& link, int ue_id, int trial) const {
        const double mean_db = mean_gain_db(link);
        const double omega = linear_from_db(mean_db);
        const double k_db = link.is_los ? env_.rician_k_los_db : env_.rician_k_nlos_db;

        double los_fraction = 0.0;
        if (std::isinf(k_db) && k_db > 0.0) {
            los_fraction = 1.0;
        } else if (!std::isinf(k_db)) {
            const double k = linear_from_db(k_db);
            los_fraction = k / (k + 1.0);
        }

        Rng rng(seed_from(env_.seed, RandomStream::kFading,
                          double_bits(link.ap_position.x), double_bits(link.ap_position.y),
                          double_bits(link.ap_position.z), double_bits(link.ue_position.x),
                          double_bits(link.ue_position.y), double_bits(link.ue_position.z),
                          static_cast<std::uint64_t>(ue_id)));

        const double tau0 = link.distance_m / kSpeedOfLight;
        const double diffuse_power = omega * (1.0 - los_fraction);
        int n_diffuse = env_.n_multipath_taps - (los_fraction > 0.0 ? 1 : 0);

        std::vector<Tap> taps;
        taps.reserve(static_cast<std::size_t>(env_.n_multipath_taps));
        if (los_fraction > 0.0) {
            const double phi = -2.0 * std::numbers::pi * env_.carrier_hz * tau0;
            std::complex<double> amp =
                std::sqrt(omega * los_fraction) *
                std::complex<double>(std::cos(phi), std::sin(phi));
            if (n_diffuse == 0 && diffuse_power > 0.0) {
                // Single-tap Rician: deterministic and diffuse parts share the delay.
                amp += std::sqrt(diffuse_power) * rng.normal_complex();
                taps.push_back({tau0, amp});
            } else {
                taps.push_back({tau0, amp});
            }
        } else {
            n_diffuse = env_.n_multipath_taps;
        }
        if (n_diffuse > 0 && diffuse_power > 0.0) {
            const double per_tap = diffuse_power / static_cast<double>(n_diffuse);
            for (int j = 0; j < n_diffuse; ++j) {
                const double delay = tau0 + rng.uniform(0.0, env_.max_excess_delay_s);
                taps.push_back({delay, std::sqrt(per_tap) * rng.normal_complex()});
            }
        }

        ChannelRecord record;
        record.ap_index = 0; // caller assigns the schedule order
        record.ap_position = link.ap_position;
        record.ue_id = ue_id;
        record.trial = trial;
        record.samples = evaluate_transfer(taps, env_.f_points, env_.bandwidth_hz);
        return record;
    }

  private:
    EnvironmentModel env_;
    ShadowingField shadowing_;
};

} // namespace cfsound
