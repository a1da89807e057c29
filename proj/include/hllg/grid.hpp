#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "hllg/errors.hpp"

namespace hllg {

// Periodic box [0,L0) x ... with a uniform collocation grid. Unused axes
// (j >= n) carry dims[j] = 1, box[j] = 1 so that loops and volume factors
// are dimension-agnostic. Linear node/mode index is row major, axis 0 slowest.
struct SpectralGrid {
    int n = 1;
    std::array<int, 3> dims{1, 1, 1};
    std::array<double, 3> box{1.0, 1.0, 1.0};

    static SpectralGrid make(int n, std::array<int, 3> dims, std::array<double, 3> box);

    std::size_t size() const {
        return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    }
    double volume() const { return box[0] * box[1] * box[2] / pad_volume(); }
    double cell_volume() const { return volume() / static_cast<double>(size()); }

    // Signed integer wavenumber for index i along axis j; i = N/2 maps to +N/2
    // (the Nyquist mode, whose sign is ambiguous).
    int mode(int j, int i) const {
        const int N = dims[j];
        return (i <= N / 2) ? i : i - N;
    }
    bool is_nyquist(int j, int i) const { return dims[j] > 1 && 2 * i == dims[j]; }
    // Physical frequency xi_j = 2*pi*k_j / L_j.
    double freq(int j, int i) const {
        return 2.0 * 3.14159265358979323846 * mode(j, i) / box[j];
    }
    double node_coord(int j, int i) const { return box[j] * i / dims[j]; }

    bool operator==(const SpectralGrid&) const = default;

  private:
    // box[] entries for axes >= n are fixed to 1, so this is always 1; kept
    // explicit so volume() stays correct by construction.
    double pad_volume() const { return 1.0; }
};

// Per-axis frequency table, precomputed once per hot loop.
struct ModeTable {
    std::array<std::vector<double>, 3> freq;     // xi_j per index
    std::array<std::vector<unsigned char>, 3> nyq;

    explicit ModeTable(const SpectralGrid& g) {
        for (int j = 0; j < 3; ++j) {
            freq[j].resize(g.dims[j]);
            nyq[j].resize(g.dims[j]);
            for (int i = 0; i < g.dims[j]; ++i) {
                freq[j][i] = g.freq(j, i);
                nyq[j][i] = g.is_nyquist(j, i) ? 1 : 0;
            }
        }
    }
};

// Calls f(linear_index, i0, i1, i2) over the full grid in storage order.
template <class F>
inline void for_each_index(const SpectralGrid& g, F&& f) {
    std::size_t idx = 0;
    for (int i0 = 0; i0 < g.dims[0]; ++i0)
        for (int i1 = 0; i1 < g.dims[1]; ++i1)
            for (int i2 = 0; i2 < g.dims[2]; ++i2, ++idx) f(idx, i0, i1, i2);
}

}  // namespace hllg
