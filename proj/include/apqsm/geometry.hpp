// SPDX-License-Identifier: Apache-2.0
//
// apqsm — link-level simulation and power-allocation optimization for
// superposed-PAM spatial modulation in indoor visible-light MIMO links
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

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace apqsm {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline double squared_norm(const Vec3& v) { return v.x * v.x + v.y * v.y + v.z * v.z; }

/// Transmitter/receiver optics constants. Angles are radians.
struct SystemParams {
    double pd_area_m2 = 1e-4;            // photodetector area A
    double fov_rad = 15.0 * std::numbers::pi / 180.0;        // receiver field of view
    double semi_angle_rad = 15.0 * std::numbers::pi / 180.0; // LED half-power semi-angle
    double refractive_index = 1.5;       // concentrator refractive index n
    double filter_gain = 1.0;            // optical filter gain T_s
    double conv_factor_a_per_w = 1.0;    // optical-to-electrical conversion factor
    double p_opt_w = 1.0;                // mean optical power per LED

    void validate() const
    {
        constexpr double half_pi = std::numbers::pi / 2.0;
        if (!(pd_area_m2 > 0.0)) throw std::invalid_argument("pd_area_m2 must be positive");
        if (!(fov_rad > 0.0 && fov_rad < half_pi)) throw std::invalid_argument("fov_rad must be in (0, pi/2)");
        if (!(semi_angle_rad > 0.0 && semi_angle_rad < half_pi))
            throw std::invalid_argument("semi_angle_rad must be in (0, pi/2)");
        if (!(refractive_index > 0.0)) throw std::invalid_argument("refractive_index must be positive");
        if (!(filter_gain > 0.0)) throw std::invalid_argument("filter_gain must be positive");
        if (!(conv_factor_a_per_w > 0.0)) throw std::invalid_argument("conv_factor_a_per_w must be positive");
        if (!(p_opt_w > 0.0)) throw std::invalid_argument("p_opt_w must be positive");
    }
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Room layout. LEDs face straight down from the ceiling plane, photodetectors
/// face straight up from the desk plane.
struct Geometry {
    std::vector<Vec3> led_positions;
    std::vector<Vec3> pd_positions;
    Vec3 room_dims{3.0, 3.0, 3.0};

    void validate() const
    {
        if (led_positions.empty() || pd_positions.empty())
            throw std::invalid_argument("geometry needs at least one LED and one PD");
        if (!is_power_of_two(led_positions.size()))
            throw std::invalid_argument("LED count must be a power of 2");
        auto inside = [&](const Vec3& p) {
            return p.x >= 0.0 && p.x <= room_dims.x && p.y >= 0.0 && p.y <= room_dims.y && p.z >= 0.0 &&
                   p.z <= room_dims.z;
        };
        for (const Vec3& p : led_positions)
            if (!inside(p)) throw std::invalid_argument("LED position outside room");
        for (const Vec3& p : pd_positions)
            if (!inside(p)) throw std::invalid_argument("PD position outside room");
        double min_led_z = led_positions.front().z;
        double max_pd_z = pd_positions.front().z;
        for (const Vec3& p : led_positions) min_led_z = std::min(min_led_z, p.z);
        for (const Vec3& p : pd_positions) max_pd_z = std::max(max_pd_z, p.z);
        if (!(min_led_z > max_pd_z)) throw std::invalid_argument("LEDs must sit above the PDs");
    }
};

/// Line-of-sight gain matrix, one row per PD and one column per LED.
/// Immutable after construction and safe to share across workers.
class ChannelMatrix {
  public:
    ChannelMatrix() = default;
    ChannelMatrix(std::size_t n_rx, std::size_t n_tx) : n_rx_(n_rx), n_tx_(n_tx), g_(n_rx * n_tx, 0.0) {}

    std::size_t n_rx() const { return n_rx_; }
    std::size_t n_tx() const { return n_tx_; }

    double operator()(std::size_t r, std::size_t l) const { return g_[r * n_tx_ + l]; }
    double& operator()(std::size_t r, std::size_t l) { return g_[r * n_tx_ + l]; }

  private:
    std::size_t n_rx_ = 0, n_tx_ = 0;
    std::vector<double> g_;
};

/// Lambertian emission order from the half-power semi-angle.
inline double lambertian_order(double semi_angle_rad)
{
    if (!(semi_angle_rad > 0.0 && semi_angle_rad < std::numbers::pi / 2.0))
        throw std::domain_error("semi-angle must lie in (0, pi/2)");
    return -std::numbers::ln2 / std::log(std::cos(semi_angle_rad));
}

/// Lambertian radiant intensity (nu+1)/(2*pi) * cos(angle)^nu.
inline double radiant_intensity(double angle_rad, double order)
{
    if (!(angle_rad >= 0.0 && angle_rad <= std::numbers::pi / 2.0))
        throw std::domain_error("emission angle must lie in [0, pi/2]");
    return (order + 1.0) / (2.0 * std::numbers::pi) * std::pow(std::cos(angle_rad), order);
}

/// Optical concentrator gain n^2 / sin^2(fov) inside the field of view, 0 outside.
inline double concentrator_gain(double incidence_rad, const SystemParams& params)
{
    if (!(incidence_rad >= 0.0)) throw std::domain_error("incidence angle must be non-negative");
    if (incidence_rad > params.fov_rad) return 0.0;
    const double s = std::sin(params.fov_rad);
    return params.refractive_index * params.refractive_index / (s * s);
}

/// LoS gain of one LED->PD link. With the LED facing down and the PD facing
/// up, the emission and incidence angles coincide and cos = dz/d.
inline double channel_gain(const Vec3& led, const Vec3& pd, const SystemParams& params)
{
    const Vec3 diff = led - pd;
    const double d2 = squared_norm(diff);
    if (d2 == 0.0) throw std::invalid_argument("LED and PD positions coincide");
    const double d = std::sqrt(d2);
    double cosang = diff.z / d;
    cosang = std::min(1.0, std::max(-1.0, cosang));
    const double angle = std::acos(cosang);
    if (angle > params.fov_rad) return 0.0;
    const double nu = lambertian_order(params.semi_angle_rad);
    return params.pd_area_m2 / d2 * radiant_intensity(angle, nu) * params.filter_gain *
           concentrator_gain(angle, params) * cosang;
}

inline ChannelMatrix build_channel_matrix(const Geometry& geometry, const SystemParams& params)
{
    geometry.validate();
    params.validate();
    ChannelMatrix h(geometry.pd_positions.size(), geometry.led_positions.size());
    for (std::size_t r = 0; r < geometry.pd_positions.size(); ++r)
        for (std::size_t l = 0; l < geometry.led_positions.size(); ++l)
            h(r, l) = channel_gain(geometry.led_positions[l], geometry.pd_positions[r], params);
    return h;
}

/// Reference desk-scale layout: a 2x2 LED grid centred over the receiver,
/// separated by d_tx in both horizontal axes.
inline Geometry reference_geometry(double d_tx = 0.2)
{
    Geometry g;
    const double cx = 1.5, cy = 1.5, led_z = 2.5;
    const double h = d_tx / 2.0;
    g.led_positions = {{cx + h, cy + h, led_z}, {cx - h, cy + h, led_z}, {cx + h, cy - h, led_z},
                       {cx - h, cy - h, led_z}};
    g.pd_positions = {{1.55, 1.55, 0.75}, {1.45, 1.55, 0.75}, {1.55, 1.45, 0.75}, {1.45, 1.45, 0.75}};
    g.room_dims = {3.0, 3.0, 3.0};
    return g;
}

} // namespace apqsm
