#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "ks2/campaign.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(const char* name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  outputs %s\n", name,
                serial_s, parallel_s, parallel_s > 0 ? serial_s / parallel_s : 0.0,
                identical ? "identical" : "DIFFER");
    if (!identical) failures++;
}

void bench_level1(const char* name, ks2::TestId test, uint64_t n, uint64_t m) {
    ks2::CampaignConfig config;
    config.test = test;
    config.n = n;
    config.m = m;
    config.master_seed = 42;

    config.exec = ks2::Exec::serial;
    auto t0 = Clock::now();
    std::vector<double> serial = ks2::level1_pvalues(config, 0, m);
    double serial_s = seconds_since(t0);

    config.exec = ks2::Exec::parallel;
    t0 = Clock::now();
    std::vector<double> parallel = ks2::level1_pvalues(config, 0, m);
    double parallel_s = seconds_since(t0);

    report(name, serial_s, parallel_s, serial == parallel);
}

void bench_delta(const char* name, uint64_t m, uint64_t trials) {
    ks2::GeParams g{0.1};
    ks2::SeedPolicy seeds{42};

    auto t0 = Clock::now();
    ks2::DeltaResult serial = ks2::monte_carlo_delta(g, m, trials, seeds, ks2::Exec::serial);
    double serial_s = seconds_since(t0);

    t0 = Clock::now();
    ks2::DeltaResult parallel = ks2::monte_carlo_delta(g, m, trials, seeds, ks2::Exec::parallel);
    double parallel_s = seconds_since(t0);

    bool identical = serial.df.mean == parallel.df.mean && serial.df.sd == parallel.df.sd &&
                     serial.dg.mean == parallel.dg.mean && serial.dg.sd == parallel.dg.sd &&
                     serial.delta == parallel.delta && serial.violations == parallel.violations;
    report(name, serial_s, parallel_s, identical);
}

}  // namespace

int main(int argc, char** argv) {
    bool smoke = false;
    for (int i = 1; i < argc; i++)
        if (std::strcmp(argv[i], "--smoke") == 0) smoke = true;

    if (smoke) {
        bench_level1("frequency n=1e4 m=200", ks2::TestId::frequency, 10000, 200);
        bench_level1("rank n=4e4 m=50", ks2::TestId::rank, 40960, 50);
        bench_delta("delta e=0.1 m=1e3 t=200", 1000, 200);
    } else {
        bench_level1("frequency n=1e6 m=500", ks2::TestId::frequency, 1000000, 500);
        bench_level1("rank n=1e5 m=200", ks2::TestId::rank, 100000, 200);
        bench_level1("serial n=1e5 m=100", ks2::TestId::serial, 100000, 100);
        bench_delta("delta e=0.1 m=1e4 t=2000", 10000, 2000);
    }
    return failures == 0 ? 0 : 1;
}
