#include "dpfbmc/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace dpfbmc {

namespace {

class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t n, FftDirection dir)
    {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, dir == FftDirection::Forward);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;

        // Planning with FFTW_ESTIMATE does not touch the buffer contents.
        auto* buf = fftw_alloc_complex(n);
        const int sign = dir == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        if (!plan)
            throw std::runtime_error("fftw: failed to create plan");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, bool>, fftw_plan> plans_;
};

PlanCache& plan_cache()
{
    static PlanCache cache;
    return cache;
}

} // namespace

void fft_inplace(std::span<cdouble> data, FftDirection dir)
{
    if (data.empty())
        return;
    fftw_plan plan = plan_cache().get(data.size(), dir);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, p, p);
}

} // namespace dpfbmc
