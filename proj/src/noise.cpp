#include "she/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace she {

namespace {
// 2^31 cells ~ 16 GiB of doubles; refuse anything close to that.
constexpr std::size_t kMaxCells = std::size_t(1) << 28;
}

void GridSpec::validate() const {
    if (!(dt > 0.0) || !(dx > 0.0))
        throw std::domain_error("GridSpec: dt and dx must be positive");
    if (n_t < 1 || n_x < 1)
        throw std::domain_error("GridSpec: n_t and n_x must be at least 1");
}

double cell_normal(std::uint64_t seed, std::uint32_t stream, std::uint32_t m,
                   std::uint32_t j) {
    // One Philox block yields the normals for cells (m, 2k) and (m, 2k+1).
    const auto pair = normal_pair(seed, stream, m, j >> 1);
    return pair[j & 1u];
}

void regenerate(NoiseGrid& noise, std::uint32_t stream) {
    const GridSpec& grid = noise.grid;
    noise.stream = stream;
    const double scale = std::sqrt(grid.dt * grid.dx);
    for (std::size_t m = 0; m < grid.n_t; ++m) {
        double* row = noise.increments.data() + m * grid.n_x;
        std::size_t j = 0;
        for (; j + 1 < grid.n_x; j += 2) {
            const auto pair =
                normal_pair(noise.seed, stream, static_cast<std::uint32_t>(m),
                            static_cast<std::uint32_t>(j >> 1));
            row[j] = scale * pair[0];
            row[j + 1] = scale * pair[1];
        }
        if (j < grid.n_x)
            row[j] = scale * cell_normal(noise.seed, stream,
                                         static_cast<std::uint32_t>(m),
                                         static_cast<std::uint32_t>(j));
    }
}

NoiseGrid generate(const GridSpec& grid, std::uint64_t seed, std::uint32_t stream) {
    grid.validate();
    if (grid.n_t > kMaxCells / grid.n_x)
        throw std::runtime_error("generate: lattice exceeds the memory budget");
    NoiseGrid out;
    out.grid = grid;
    out.seed = seed;
    out.stream = stream;
    out.increments.resize(grid.n_t * grid.n_x);
    regenerate(out, stream);
    return out;
}

NoiseGrid shift(const NoiseGrid& noise, long j_offset) {
    const long n = static_cast<long>(noise.grid.n_x);
    if (j_offset <= -n || j_offset >= n)
        throw std::domain_error("shift: |j_offset| must be smaller than n_x");
    NoiseGrid out;
    out.grid = noise.grid;
    out.seed = noise.seed;
    out.stream = noise.stream;
    out.increments.resize(noise.increments.size());
    for (std::size_t m = 0; m < noise.grid.n_t; ++m) {
        const double* src = noise.increments.data() + m * noise.grid.n_x;
        double* dst = out.increments.data() + m * noise.grid.n_x;
        for (long j = 0; j < n; ++j) {
            long k = (j + j_offset) % n;
            if (k < 0) k += n;
            dst[j] = src[k];
        }
    }
    return out;
}

}  // namespace she
