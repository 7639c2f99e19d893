// SPDX-License-Identifier: Apache-2.0

#ifndef VENDI_SAMPLER_HPP
#define VENDI_SAMPLER_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "vendi/grad.hpp"
#include "vendi/kernels.hpp"
#include "vendi/scores.hpp"

namespace vendi {

/// 2D double well u(x, y) = (a/4) x^4 + (b/2) x^2 + c x + y^2 / 2.
/// a > 0 confines, b < 0 opens two x-wells, c != 0 imbalances them.
struct Potential {
    double a = 1.0;
    double b = -4.0;
    double c = 0.5;

    [[nodiscard]] double energy(double x, double y) const;
    [[nodiscard]] Eigen::Vector2d gradient(double x, double y) const;
};

struct SamplerConfig {
    Eigen::Index replicas = 16;
    double step_size = 1e-2;
    std::int64_t total_steps = 200000;
    double nu0 = 0.0;         // initial Vendi-force coefficient
    double anneal_rate = 0.0; // linear decrease per step
    Order q = Order::of(1.0);
    Kernel kernel = Kernel::ratio1d();
    Potential potential;
    double init_box = 2.5;   // initial positions uniform in [-box, box]^2
    std::uint64_t seed = 0;
    std::int64_t record_stride = 100;
    double bias_clip = 0.5;  // max per-coordinate bias displacement per step
    double support_tol = kDefaultSupportTol;

    /// nu(t) = max(0, nu0 - anneal_rate * t).
    [[nodiscard]] double nu_at(std::int64_t step) const;

    /// First step index with nu = 0 (0 when unbiased from the start).
    [[nodiscard]] std::int64_t anneal_end_step() const;
};

struct Trajectory {
    SamplerConfig config;
    std::vector<Eigen::MatrixXd> positions; // one R x 2 snapshot per record
    std::vector<double> nu_history;         // nu at each recorded step
    std::vector<std::int64_t> record_steps; // step index of each record
};

struct FreeEnergyEstimate {
    double free_energy = 0.0; // -log(n_right / n_left), units of kB T
    std::int64_t n_right = 0; // samples with x > 0
    std::int64_t n_left = 0;  // samples with x <= 0
    std::size_t window_begin = 0; // record-index window [begin, end)
    std::size_t window_end = 0;
};

/// Deterministic standard-normal stream (Box-Muller over mt19937_64),
/// so trajectories are bit-identical across standard libraries.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}
    double operator()();
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// One Euler-Maruyama step (beta = 1, unit friction) with the supplied
/// per-replica noise matrix: x += (-grad u + nu(t) * grad log VS) dt
/// + sqrt(2 dt) * noise. The bias displacement is clamped per coordinate
/// to bias_clip (the ratio kernel's gradient is singular at the origin).
[[nodiscard]] Eigen::MatrixXd langevin_step(const Eigen::MatrixXd& state, std::int64_t step,
                                            const SamplerConfig& cfg,
                                            const Eigen::MatrixXd& noise);

/// As above, drawing noise from the rng.
[[nodiscard]] Eigen::MatrixXd langevin_step(const Eigen::MatrixXd& state, std::int64_t step,
                                            const SamplerConfig& cfg, GaussianRng& rng);

/// Full annealed run. Records the initial state and every record_stride-th
/// step thereafter. Throws Divergence on non-finite state.
[[nodiscard]] Trajectory run_vendi_sampling(const SamplerConfig& cfg);

/// Cumulative x = 0 boundary crossings per record (sign changes of each
/// replica's x between consecutive records).
[[nodiscard]] std::vector<std::int64_t> count_transitions(const Trajectory& traj);

/// Occupancy-ratio free energy over records [begin, end); requires the
/// window to lie entirely in the nu = 0 phase and both regions visited.
[[nodiscard]] FreeEnergyEstimate free_energy_difference(const Trajectory& traj,
                                                        std::size_t window_begin,
                                                        std::size_t window_end);

/// Window covering every nu = 0 record.
[[nodiscard]] std::pair<std::size_t, std::size_t> unbiased_window(const Trajectory& traj);

/// Ground truth by 2D composite quadrature of exp(-u) over
/// x in [-x_max, 0] vs [0, x_max], y in [-y_max, y_max], refined until the
/// estimate is stable to tol.
[[nodiscard]] double free_energy_oracle(const Potential& p, double x_max = 2.5,
                                        double y_max = 4.0, double tol = 1e-6);

} // namespace vendi

#endif // VENDI_SAMPLER_HPP
