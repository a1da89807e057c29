#include "hllg/grid.hpp"

#include <string>

namespace hllg {

SpectralGrid SpectralGrid::make(int n, std::array<int, 3> dims, std::array<double, 3> box) {
    if (n < 1 || n > 3) throw ParameterError("spatial dimension must be 1, 2 or 3, got " + std::to_string(n));
    SpectralGrid g;
    g.n = n;
    for (int j = 0; j < 3; ++j) {
        if (j < n) {
            if (dims[j] < 4 || dims[j] % 2 != 0)
                throw ParameterError("dims[" + std::to_string(j) + "] must be even and >= 4, got " +
                                     std::to_string(dims[j]));
            if (!(box[j] > 0.0))
                throw ParameterError("box_lengths[" + std::to_string(j) + "] must be positive");
            g.dims[j] = dims[j];
            g.box[j] = box[j];
        } else {
            g.dims[j] = 1;
            g.box[j] = 1.0;
        }
    }
    return g;
}

}  // namespace hllg
