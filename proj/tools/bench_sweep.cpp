// Times campaign::sweep in serial vs OpenMP-parallel execution on a dense
// infectivity grid and verifies the two paths produce identical results.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "viralsim/campaign.hpp"

namespace {

using Clock = std::chrono::steady_clock;
namespace vc = viralsim::campaign;

double run_ms(const vc::SweepSpec& spec, const viralsim::ode::StepControl& control,
              vc::ExecutionPolicy policy, std::vector<vc::SweepRun>& out) {
    const auto start = Clock::now();
    out = vc::sweep(spec, control, policy);
    const auto stop = Clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

bool identical(const std::vector<vc::SweepRun>& a,
               const std::vector<vc::SweepRun>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].value != b[k].value || a[k].error != b[k].error) return false;
        if (a[k].ok() != b[k].ok()) return false;
        if (!a[k].ok()) continue;
        const vc::Trajectory& ta = *a[k].trajectory;
        const vc::Trajectory& tb = *b[k].trajectory;
        if (ta.times != tb.times || ta.s != tb.s || ta.i != tb.i ||
            ta.r != tb.r)
            return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    int n_values = 96;
    if (argc > 1) n_values = std::atoi(argv[1]);
    if (n_values < 2) n_values = 2;

    vc::SweepSpec spec;
    spec.base.params = {0.25, 0.1};
    spec.base.initial = {900.0, 100.0, 0.0};
    spec.base.pop = {1000.0};
    spec.base.t_end = 100.0;
    spec.base.n_samples = 2001;
    spec.base.label = "bench";
    spec.parameter = vc::SweepParameter::Beta;
    spec.values.reserve(static_cast<std::size_t>(n_values));
    for (int k = 0; k < n_values; ++k)
        spec.values.push_back(0.05 +
                              0.9 * static_cast<double>(k) / (n_values - 1));

    viralsim::ode::StepControl control;
    control.rtol = 1e-9;
    control.atol = 1e-12;

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both runs are serial\n");
#endif
    std::printf("sweep: %d beta values, %d samples each\n", n_values,
                spec.base.n_samples);

    std::vector<vc::SweepRun> serial_runs, parallel_runs;
    const double serial_ms =
        run_ms(spec, control, vc::ExecutionPolicy::Serial, serial_runs);
    const double parallel_ms =
        run_ms(spec, control, vc::ExecutionPolicy::Parallel, parallel_runs);

    std::printf("serial:   %9.2f ms\n", serial_ms);
    std::printf("parallel: %9.2f ms\n", parallel_ms);
    std::printf("speedup:  %9.2fx\n", serial_ms / parallel_ms);

    if (!identical(serial_runs, parallel_runs)) {
        std::printf("MISMATCH: serial and parallel results differ\n");
        return 1;
    }
    std::printf("serial and parallel results are bitwise identical\n");
    return 0;
}
