#include "phasekrylov/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace pk::fft {

namespace {

struct PlanCache {
    std::mutex mu;
    std::map<std::tuple<int, int, int>, fftw_plan> plans;

    ~PlanCache() {
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
    }

    // planning is not thread safe in FFTW; executing with new-array execute is
    fftw_plan get(int n0, int n1, int sign) {
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_tuple(n0, n1, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        const int size = n0 * (n1 > 0 ? n1 : 1);
        fftw_complex* buf = fftw_alloc_complex(size);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        const int fsign = sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD;
        fftw_plan p = n1 > 0 ? fftw_plan_dft_2d(n0, n1, buf, buf, fsign, flags)
                             : fftw_plan_dft_1d(n0, buf, buf, fsign, flags);
        fftw_free(buf);
        plans.emplace(key, p);
        return p;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

} // namespace

void dft(cplx* data, int n, int sign) {
    fftw_plan p = cache().get(n, 0, sign);
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, d, d);
}

void dft2(cplx* data, int n0, int n1, int sign) {
    fftw_plan p = cache().get(n0, n1, sign);
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, d, d);
}

} // namespace pk::fft
