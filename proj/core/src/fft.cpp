#include "benj/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace benj {
namespace {

// fftw plans are cached per size; FFTW_ESTIMATE keeps plan selection
// deterministic (measurement-based planning picks machine-dependent
// algorithms and is not reproducible). plans are created with a scratch
// buffer and executed on per-call buffers via fftw_execute_dft, which is
// safe for plans created with the same alignment and size.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

class PlanCache {
public:
    PlanPair get(std::size_t n) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = plans_.find(n);
        if (it != plans_.end()) return it->second;
        fftw_complex* buf = fftw_alloc_complex(n);
        if (!buf) throw std::runtime_error("fft: allocation failure");
        PlanPair p;
        p.fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        p.bwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        fftw_free(buf);
        if (!p.fwd || !p.bwd) throw std::runtime_error("fft: plan creation failure");
        plans_[n] = p;
        return p;
    }

private:
    std::mutex mu_;
    std::map<std::size_t, PlanPair> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
        if (!data) throw std::runtime_error("fft: allocation failure");
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    fftw_complex* data;
};

void run_dft(std::size_t n, bool forward, fftw_complex* buf) {
    PlanPair p = cache().get(n);
    fftw_execute_dft(forward ? p.fwd : p.bwd, buf, buf);
}

} // namespace

SpectralField forward_transform(const RealField& f) {
    if (!all_finite(f)) throw std::invalid_argument("forward_transform: non-finite samples");
    const std::size_t n = f.grid.n();
    FftwBuffer buf(n);
    for (std::size_t j = 0; j < n; ++j) {
        buf.data[j][0] = f.samples[j];
        buf.data[j][1] = 0.0;
    }
    run_dft(n, true, buf.data);
    const double dx = f.grid.dx();
    std::vector<cplx> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double tw = (j & 1) ? -dx : dx;
        out[j] = cplx{tw * buf.data[j][0], tw * buf.data[j][1]};
    }
    return SpectralField(f.grid, std::move(out));
}

RealField inverse_transform(const SpectralField& F) {
    if (!all_finite(F)) throw std::invalid_argument("inverse_transform: non-finite coefficients");
    const std::size_t n = F.grid.n();
    FftwBuffer buf(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double tw = (j & 1) ? -1.0 : 1.0;
        buf.data[j][0] = tw * F.coefficients[j].real();
        buf.data[j][1] = tw * F.coefficients[j].imag();
    }
    run_dft(n, false, buf.data);
    const double inv_l = 1.0 / F.grid.length();
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = inv_l * buf.data[j][0];
    return RealField(F.grid, std::move(out));
}

std::vector<cplx> forward_transform_c(const Grid1D& grid, const std::vector<cplx>& samples) {
    const std::size_t n = grid.n();
    if (samples.size() != n)
        throw std::invalid_argument("forward_transform_c: size mismatch");
    FftwBuffer buf(n);
    for (std::size_t j = 0; j < n; ++j) {
        buf.data[j][0] = samples[j].real();
        buf.data[j][1] = samples[j].imag();
    }
    run_dft(n, true, buf.data);
    const double dx = grid.dx();
    std::vector<cplx> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double tw = (j & 1) ? -dx : dx;
        out[j] = cplx{tw * buf.data[j][0], tw * buf.data[j][1]};
    }
    return out;
}

std::vector<cplx> inverse_transform_c(const Grid1D& grid, const std::vector<cplx>& coefficients) {
    const std::size_t n = grid.n();
    if (coefficients.size() != n)
        throw std::invalid_argument("inverse_transform_c: size mismatch");
    FftwBuffer buf(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double tw = (j & 1) ? -1.0 : 1.0;
        buf.data[j][0] = tw * coefficients[j].real();
        buf.data[j][1] = tw * coefficients[j].imag();
    }
    run_dft(n, false, buf.data);
    const double inv_l = 1.0 / grid.length();
    std::vector<cplx> out(n);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = cplx{inv_l * buf.data[j][0], inv_l * buf.data[j][1]};
    return out;
}

} // namespace benj
