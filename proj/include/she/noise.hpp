#pragma once

#include <cstdint>
#include <vector>

#include "she/rng.hpp"

namespace she {

/// Rectangular space-time lattice: time steps m = 0..n_t-1 covering
/// [m*dt, (m+1)*dt), space nodes x_j = x_min + j*dx, j = 0..n_x-1.
struct GridSpec {
    double dt = 0.0;
    double dx = 0.0;
    std::size_t n_t = 0;
    double x_min = 0.0;
    std::size_t n_x = 0;

    double extent() const { return static_cast<double>(n_x) * dx; }
    double x_at(std::size_t j) const { return x_min + static_cast<double>(j) * dx; }
    double t_at(std::size_t m) const { return static_cast<double>(m) * dt; }
    void validate() const;

    bool operator==(const GridSpec&) const = default;
};

/// Discrete space-time white noise: i.i.d. N(0, dt*dx) cell increments,
/// a deterministic function of (grid, seed, stream). `stream` separates
/// replicates drawn from the same seed.
struct NoiseGrid {
    GridSpec grid;
    std::uint64_t seed = 0;
    std::uint32_t stream = 0;
    std::vector<double> increments;  ///< row-major, increments[m * n_x + j]

    double at(std::size_t m, std::size_t j) const {
        return increments[m * grid.n_x + j];
    }
};

/// Standard-normal draw for cell (m, j) of replicate `stream`; the pure
/// per-cell form behind generate().
double cell_normal(std::uint64_t seed, std::uint32_t stream, std::uint32_t m,
                   std::uint32_t j);

NoiseGrid generate(const GridSpec& grid, std::uint64_t seed, std::uint32_t stream = 0);

/// Refill an existing grid for a new replicate stream without reallocating.
void regenerate(NoiseGrid& noise, std::uint32_t stream);

/// Spatial translation by j_offset nodes with periodic wraparound; the
/// marginal law is unchanged. Requires |j_offset| < n_x.
NoiseGrid shift(const NoiseGrid& noise, long j_offset);

}  // namespace she
