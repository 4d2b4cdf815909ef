// One PSPSO run on a small moving-peaks landscape; prints, per environment,
// the optimum, the best value found before the change and the swarm count.

#include <pspso/pspso.hpp>

#include <cstdio>

int main() {
    pspso::LandscapeParams params;
    params.num_peaks = 10;
    params.schedule.change_frequency = 2500;
    params.schedule.num_environments = 12;

    pspso::DynamicLandscape landscape(params, 2024, pspso::Recording{true, false});
    const auto result = pspso::run_pspso(pspso::PspsoConfig{}, landscape, 7);

    const auto& log = landscape.tracker().log();
    std::printf("env  optimum  best_found  error\n");
    for (std::size_t i = 0; i < log.size(); ++i) {
        const bool last_of_env = i + 1 == log.size() || log[i + 1].environment != log[i].environment;
        if (!last_of_env) continue;
        std::printf("%3lld  %7.3f  %10.3f  %5.3f\n", static_cast<long long>(log[i].environment), log[i].optimum,
                    log[i].best_found, log[i].error());
    }
    std::printf("offline error %.4f over %lld evaluations\n", result.offline_error,
                static_cast<long long>(result.evaluations_used));
}
