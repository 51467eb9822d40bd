#include "ks2/level1.hpp"
#include "ks2/numerics.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace ks2 {

namespace {

std::mutex fftw_planner_mutex;

// One cached plan (with its buffers) per thread and length; FFTW's planner is
// global and not thread-safe, execution on plan-owned buffers is.
struct PlanSlot {
    uint64_t n = 0;
    double* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan plan = nullptr;

    void ensure(uint64_t want) {
        if (n == want) return;
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        if (plan) {
            fftw_destroy_plan(plan);
            fftw_free(in);
            fftw_free(out);
        }
        in = static_cast<double*>(fftw_malloc(sizeof(double) * want));
        out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (want / 2 + 1)));
        plan = fftw_plan_dft_r2c_1d(int(want), in, out, FFTW_ESTIMATE);
        n = want;
    }
};

thread_local PlanSlot plan_slot;

}

Level1Result dft_test_impl(const BitSequence& seq, const Level1Params& params) {
    uint64_t n = seq.size();
    if (params.enforce_min_n && n < 1000)
        throw std::invalid_argument("dft: n must be >= 1000");
    if (n < 2) throw std::invalid_argument("dft: n must be >= 2");

    plan_slot.ensure(n);
    for (uint64_t i = 0; i < n; i++) plan_slot.in[i] = seq.bit(i) ? 1.0 : -1.0;
    fftw_execute(plan_slot.plan);

    double threshold = std::sqrt(2.995732274 * double(n));  // sqrt(n ln(1/0.05))
    uint64_t below = 0;
    for (uint64_t j = 0; j < n / 2; j++) {
        double re = plan_slot.out[j][0], im = plan_slot.out[j][1];
        if (std::sqrt(re * re + im * im) < threshold) below++;
    }
    double n0 = 0.95 * double(n) / 2.0;
    double d = (double(below) - n0) / std::sqrt(double(n) * 0.95 * 0.05 / 4.0);
    return {TestId::dft, 1, d, erfc(std::fabs(d) / std::sqrt(2.0)), n};
}

}
