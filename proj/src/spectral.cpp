#include "hllg/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <sstream>

namespace hllg {

namespace {

// FFTW plan cache. Planning is not thread safe and is guarded; execution via
// fftw_execute_dft on distinct caller buffers is. Plans are created with
// FFTW_ESTIMATE (deterministic algorithm choice) and FFTW_UNALIGNED so they
// apply to std::vector storage of any alignment.
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    fftw_plan get(const std::array<int, 3>& dims, int rank, int sign) {
        const std::array<int, 4> key{dims[0], dims[1], dims[2], sign};
        std::lock_guard<std::mutex> lock(mu_);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        std::size_t total = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
        std::vector<std::complex<double>> in(total), out(total);
        fftw_plan p = fftw_plan_dft(rank, dims.data(),
                                    reinterpret_cast<fftw_complex*>(in.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()),
                                    sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

    ~PlanCache() {
        for (auto& [k, p] : plans_) fftw_destroy_plan(p);
    }

  private:
    std::mutex mu_;
    std::map<std::array<int, 4>, fftw_plan> plans_;
};

void execute(const SpectralGrid& g, int sign, const std::complex<double>* in,
             std::complex<double>* out) {
    fftw_plan p = PlanCache::instance().get(g.dims, g.n, sign);
    // c2c out-of-place execution preserves the input buffer.
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

int dealias_denominator(DealiasPolicy p) {
    switch (p) {
        case DealiasPolicy::none: return 0;
        case DealiasPolicy::quadratic: return 3;
        case DealiasPolicy::cubic: return 4;
    }
    return 0;
}

}  // namespace

FourierField forward_transform(const NodalField& f) {
    if (f.ncomp() == 0) throw StructuralError("forward_transform: field has no components");
    const std::size_t total = f.grid.size();
    FourierField out(f.grid, f.ncomp());
    std::vector<std::complex<double>> buf(total);
    const double scale = 1.0 / static_cast<double>(total);
    for (int c = 0; c < f.ncomp(); ++c) {
        if (f.comps[c].size() != total)
            throw StructuralError("forward_transform: component size does not match grid");
        for (std::size_t i = 0; i < total; ++i) buf[i] = f.comps[c][i];
        execute(f.grid, FFTW_FORWARD, buf.data(), out.comps[c].data());
        for (std::size_t i = 0; i < total; ++i) out.comps[c][i] *= scale;
    }
    return out;
}

NodalField inverse_transform(const FourierField& F) {
    const std::size_t total = F.grid.size();
    NodalField out(F.grid, F.ncomp());
    std::vector<std::complex<double>> buf(total);
    for (int c = 0; c < F.ncomp(); ++c) {
        if (F.comps[c].size() != total)
            throw StructuralError("inverse_transform: component size does not match grid");
        execute(F.grid, FFTW_BACKWARD, F.comps[c].data(), buf.data());
        double max_re = 0.0, max_im = 0.0;
        for (std::size_t i = 0; i < total; ++i) {
            max_re = std::max(max_re, std::abs(buf[i].real()));
            max_im = std::max(max_im, std::abs(buf[i].imag()));
        }
        if (max_im > 1e-9 * std::max(1.0, max_re)) {
            std::ostringstream os;
            os << "inverse_transform: input is not Hermitian-symmetric; imaginary residue "
               << max_im << " against real scale " << max_re;
            throw StructuralError(os.str());
        }
        for (std::size_t i = 0; i < total; ++i) out.comps[c][i] = buf[i].real();
    }
    return out;
}

double hermitian_defect(const FourierField& F) {
    const auto& g = F.grid;
    double defect = 0.0;
    for (int c = 0; c < F.ncomp(); ++c) {
        for_each_index(g, [&](std::size_t idx, int i0, int i1, int i2) {
            const int j0 = (g.dims[0] - i0) % g.dims[0];
            const int j1 = (g.dims[1] - i1) % g.dims[1];
            const int j2 = (g.dims[2] - i2) % g.dims[2];
            const std::size_t mirror =
                (static_cast<std::size_t>(j0) * g.dims[1] + j1) * g.dims[2] + j2;
            defect = std::max(defect, std::abs(F.comps[c][idx] - std::conj(F.comps[c][mirror])));
        });
    }
    return defect;
}

FourierField fractional_laplacian(const FourierField& F, double s) {
    if (!(s > 0.0)) throw ParameterError("fractional_laplacian: order s must be > 0");
    const auto& g = F.grid;
    ModeTable mt(g);
    FourierField out(g, F.ncomp());
    for (int c = 0; c < F.ncomp(); ++c) {
        for_each_index(g, [&](std::size_t idx, int i0, int i1, int i2) {
            const double f0 = mt.freq[0][i0], f1 = mt.freq[1][i1], f2 = mt.freq[2][i2];
            const double xi2 = f0 * f0 + f1 * f1 + f2 * f2;
            out.comps[c][idx] = (xi2 == 0.0) ? 0.0 : std::pow(xi2, s) * F.comps[c][idx];
        });
    }
    return out;
}

FourierField riesz_transform(const FourierField& F, int axis) {
    const auto& g = F.grid;
    if (axis < 0 || axis >= g.n)
        throw ParameterError("riesz_transform: axis " + std::to_string(axis) +
                             " out of range for n = " + std::to_string(g.n));
    ModeTable mt(g);
    FourierField out(g, F.ncomp());
    const std::complex<double> mi(0.0, -1.0);
    for (int c = 0; c < F.ncomp(); ++c) {
        for_each_index(g, [&](std::size_t idx, int i0, int i1, int i2) {
            const double f0 = mt.freq[0][i0], f1 = mt.freq[1][i1], f2 = mt.freq[2][i2];
            const double xi2 = f0 * f0 + f1 * f1 + f2 * f2;
            const bool nyq = axis == 0 ? mt.nyq[0][i0] : axis == 1 ? mt.nyq[1][i1] : mt.nyq[2][i2];
            if (xi2 == 0.0 || nyq) {
                out.comps[c][idx] = 0.0;
            } else {
                const double fj = axis == 0 ? f0 : axis == 1 ? f1 : f2;
                out.comps[c][idx] = mi * (fj / std::sqrt(xi2)) * F.comps[c][idx];
            }
        });
    }
    return out;
}

FourierField derivative(const FourierField& F, int axis) {
    const auto& g = F.grid;
    if (axis < 0 || axis >= g.n)
        throw ParameterError("derivative: axis " + std::to_string(axis) +
                             " out of range for n = " + std::to_string(g.n));
    ModeTable mt(g);
    FourierField out(g, F.ncomp());
    const std::complex<double> im(0.0, 1.0);
    for (int c = 0; c < F.ncomp(); ++c) {
        for_each_index(g, [&](std::size_t idx, int i0, int i1, int i2) {
            const bool nyq = axis == 0 ? mt.nyq[0][i0] : axis == 1 ? mt.nyq[1][i1] : mt.nyq[2][i2];
            if (nyq) {
                out.comps[c][idx] = 0.0;
            } else {
                const double fj = axis == 0 ? mt.freq[0][i0] : axis == 1 ? mt.freq[1][i1] : mt.freq[2][i2];
                out.comps[c][idx] = im * fj * F.comps[c][idx];
            }
        });
    }
    return out;
}

std::vector<FourierField> gradient(const FourierField& F) {
    std::vector<FourierField> out;
    out.reserve(F.grid.n);
    for (int j = 0; j < F.grid.n; ++j) out.push_back(derivative(F, j));
    return out;
}

bool mode_within_band(const SpectralGrid& g, int i0, int i1, int i2, DealiasPolicy policy) {
    const int den = dealias_denominator(policy);
    if (den == 0) return true;
    const int idx[3] = {i0, i1, i2};
    for (int j = 0; j < g.n; ++j) {
        const int k = std::abs(g.mode(j, idx[j]));
        if (den * k >= g.dims[j]) return false;
    }
    return true;
}

FourierField dealias(const FourierField& F, DealiasPolicy policy) {
    if (policy == DealiasPolicy::none) return F;
    FourierField out = F;
    const auto& g = F.grid;
    for (int c = 0; c < F.ncomp(); ++c) {
        for_each_index(g, [&](std::size_t idx, int i0, int i1, int i2) {
            if (!mode_within_band(g, i0, i1, i2, policy)) out.comps[c][idx] = 0.0;
        });
    }
    return out;
}

NodalField refine(const NodalField& f, int factor) {
    if (factor < 1) throw ParameterError("refine: factor must be >= 1");
    if (factor == 1) return f;
    const auto& g = f.grid;
    std::array<int, 3> dims = g.dims;
    for (int j = 0; j < g.n; ++j) dims[j] *= factor;
    SpectralGrid fine = SpectralGrid::make(g.n, dims, g.box);

    FourierField coarse = forward_transform(f);
    FourierField padded(fine, f.ncomp());
    for (int c = 0; c < f.ncomp(); ++c) {
        for_each_index(g, [&](std::size_t idx, int i0, int i1, int i2) {
            // Nyquist columns are split across +-N/2 on the fine grid; halving
            // both keeps the interpolant real and the nodal values unchanged.
            const int kk[3] = {g.mode(0, i0), g.mode(1, i1), g.mode(2, i2)};
            std::vector<std::array<int, 3>> targets{{kk[0], kk[1], kk[2]}};
            double weight = 1.0;
            for (int j = 0; j < g.n; ++j) {
                if (g.is_nyquist(j, (j == 0 ? i0 : j == 1 ? i1 : i2))) {
                    const std::size_t cnt = targets.size();
                    for (std::size_t t = 0; t < cnt; ++t) {
                        auto neg = targets[t];
                        neg[j] = -kk[j];
                        targets.push_back(neg);
                    }
                    weight *= 0.5;
                }
            }
            for (const auto& tk : targets) {
                std::size_t fidx = 0;
                for (int j = 0; j < 3; ++j) {
                    const int N = fine.dims[j];
                    const int wrapped = (tk[j] % N + N) % N;
                    fidx = fidx * N + wrapped;
                }
                padded.comps[c][fidx] += weight * coarse.comps[c][idx];
            }
        });
    }
    return inverse_transform(padded);
}

double inner_product(const NodalField& a, const NodalField& b) {
    if (!(a.grid == b.grid) || a.ncomp() != b.ncomp())
        throw StructuralError("inner_product: mismatched fields");
    double s = 0.0;
    for (int c = 0; c < a.ncomp(); ++c)
        for (std::size_t i = 0; i < a.comps[c].size(); ++i) s += a.comps[c][i] * b.comps[c][i];
    return s * a.grid.cell_volume();
}

}  // namespace hllg
