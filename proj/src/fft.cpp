#include "phaseless/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

namespace phaseless {

namespace {

// FFTW plans are cached per (n, sign); planning is not thread safe, execution
// on distinct buffers is. FFTW_UNALIGNED lets plans run on plain vectors.
class PlanCache {
  public:
    static fftw_plan get(std::size_t n, int sign) {
        static PlanCache cache;
        std::lock_guard<std::mutex> lock(cache.mutex_);
        const auto key = std::make_pair(n, sign);
        auto it = cache.plans_.find(key);
        if (it != cache.plans_.end()) return it->second;
        std::vector<cplx> scratch_in(n), scratch_out(n);
        fftw_plan plan = fftw_plan_dft_1d(
            static_cast<int>(n), reinterpret_cast<fftw_complex*>(scratch_in.data()),
            reinterpret_cast<fftw_complex*>(scratch_out.data()),
            sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw numeric_error("fft: planning failed");
        cache.plans_.emplace(key, plan);
        return plan;
    }

  private:
    PlanCache() = default;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
    std::mutex mutex_;
};

}

void fft(const cplx* in, cplx* out, std::size_t n, int sign) {
    if (n == 0) throw precondition_error("fft: empty input");
    if (sign != 1 && sign != -1) throw precondition_error("fft: sign must be +1 or -1");
    fftw_plan plan = PlanCache::get(n, sign);
    if (in == out) {
        std::vector<cplx> tmp(in, in + n);
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(tmp.data()),
                         reinterpret_cast<fftw_complex*>(out));
    } else {
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                         reinterpret_cast<fftw_complex*>(out));
    }
}

std::vector<cplx> fft(const std::vector<cplx>& in, int sign) {
    std::vector<cplx> out(in.size());
    fft(in.data(), out.data(), in.size(), sign);
    return out;
}

GridSpec dual_grid(const GridSpec& g) {
    if (g.count < 2 || g.step <= 0.0) throw precondition_error("dual_grid: bad grid");
    const double dstep = 1.0 / (g.step * static_cast<double>(g.count));
    const double start = -dstep * static_cast<double>(g.count / 2);
    return GridSpec{start, dstep, g.count};
}

std::vector<cplx> dft_uniform(const std::vector<cplx>& in, const GridSpec& gin,
                              const GridSpec& gout, int sign) {
    const std::size_t n = gin.count;
    if (in.size() != n) throw precondition_error("dft_uniform: size mismatch");
    if (gout.count > n) throw precondition_error("dft_uniform: output grid larger than input");
    const double duality = gout.step * gin.step * static_cast<double>(n);
    if (std::abs(duality - 1.0) > 1e-9)
        throw precondition_error("dft_uniform: grids are not FFT-dual");

    // u_j v_k = u_j v_0 + u_0 k dv + j k / n, so one pre-modulation and one
    // post-phase reduce the sum to a plain DFT.
    const double s = static_cast<double>(sign);
    std::vector<cplx> work(n);
    for (std::size_t k = 0; k < n; ++k)
        work[k] = in[k] * std::polar(1.0, s * TWO_PI * gout.start * gin.step * static_cast<double>(k));
    work = fft(work, sign);

    std::vector<cplx> out(gout.count);
    for (std::size_t j = 0; j < gout.count; ++j) {
        const double uj = gout.value(j);
        out[j] = gin.step * std::polar(1.0, s * TWO_PI * uj * gin.start) * work[j % n];
    }
    return out;
}

}
