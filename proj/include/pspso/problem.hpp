#pragma once

// Moving-peaks dynamic landscape with offline-error bookkeeping.
//
// The landscape is a pointwise maximum of cones. It changes every
// `change_frequency` evaluations; the optimizer never learns when. The
// offline-error tracker sits on the benchmark side and is the only component
// that sees change instants.

#include <pspso/detail/format.hpp>
#include <pspso/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace pspso {

using Vector = std::vector<double>;

inline double distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        sum += d * d;
    }
    return std::sqrt(sum);
}

/// Uniform box [lower, upper]^dims.
struct SearchSpace {
    std::size_t dims = 5;
    double lower = -100.0;
    double upper = 100.0;

    double extent() const { return upper - lower; }

    bool contains(std::span<const double> x) const {
        if (x.size() != dims) return false;
        return std::all_of(x.begin(), x.end(), [&](double v) { return v >= lower && v <= upper; });
    }

    double clamp(double v) const { return std::clamp(v, lower, upper); }

    void validate() const {
        if (dims < 1) throw ConfigError("search space needs at least one dimension");
        if (!(lower < upper)) throw ConfigError("search space requires lower < upper");
    }

    template <class Rng>
    Vector sample(Rng& rng) const {
        std::uniform_real_distribution<double> uniform(lower, upper);
        Vector x(dims);
        for (auto& v : x) v = uniform(rng);
        return x;
    }
};

struct Peak {
    Vector center;
    double height = 0.0;
    double width = 1.0;

    double value_at(std::span<const double> x) const { return height - width * distance(x, center); }

    bool operator==(const Peak&) const = default;
};

struct ChangeSchedule {
    std::int64_t change_frequency = 5000;
    double shift_severity = 1.0;
    double height_severity = 7.0;
    double width_severity = 1.0;
    std::int64_t num_environments = 100;

    std::int64_t budget() const { return change_frequency * num_environments; }

    /// Environment (1-based) that the `evals_done`-th evaluation falls into.
    std::int64_t environment_of(std::int64_t evals_done) const {
        return 1 + (evals_done - 1) / change_frequency;
    }
};

struct LandscapeParams {
    SearchSpace space;
    std::size_t num_peaks = 10;
    ChangeSchedule schedule;
    double min_height = 30.0;
    double max_height = 70.0;
    double min_width = 1.0;
    double max_width = 12.0;

    void validate() const {
        space.validate();
        if (num_peaks < 1) throw ConfigError("landscape needs at least one peak");
        if (schedule.change_frequency < 1) throw ConfigError("change frequency must be positive");
        if (schedule.num_environments < 1) throw ConfigError("number of environments must be positive");
        if (schedule.shift_severity < 0 || schedule.height_severity < 0 || schedule.width_severity < 0)
            throw ConfigError("severities must be non-negative");
        if (!(min_height <= max_height)) throw ConfigError("min_height must not exceed max_height");
        if (!(min_width > 0 && min_width <= max_width)) throw ConfigError("widths must satisfy 0 < min_width <= max_width");
    }
};

/// One row of the per-evaluation error log.
struct ErrorRecord {
    std::int64_t environment = 0;
    double optimum = 0.0;
    double best_found = 0.0;

    double error() const { return optimum - best_found; }
};

/// Running offline error: mean over evaluations of (optimum - best found since the last change).
class OfflineErrorTracker {
public:
    explicit OfflineErrorTracker(bool keep_log = false) : keep_log_(keep_log) {}

    /// Change hook: forget the best-found value and adopt the new optimum.
    void begin_environment(std::int64_t environment, double optimum_value) {
        environment_ = environment;
        optimum_ = optimum_value;
        env_best_.reset();
    }

    double record(double fitness) {
        env_best_ = env_best_ ? std::max(*env_best_, fitness) : fitness;
        const double err = optimum_ - *env_best_;
        sum_ += err;
        ++count_;
        last_error_ = err;
        if (keep_log_) log_.push_back({environment_, optimum_, *env_best_});
        return err;
    }

    double offline_error() const {
        if (count_ == 0) throw UndefinedMetric("offline error is undefined before the first evaluation");
        return sum_ / static_cast<double>(count_);
    }

    std::int64_t count() const { return count_; }
    double sum() const { return sum_; }
    double last_error() const { return last_error_; }
    std::optional<double> current_env_best() const { return env_best_; }
    double current_optimum_value() const { return optimum_; }
    const std::vector<ErrorRecord>& log() const { return log_; }

private:
    bool keep_log_;
    std::vector<ErrorRecord> log_;
    std::int64_t environment_ = 1;
    double optimum_ = 0.0;
    std::optional<double> env_best_;
    double sum_ = 0.0;
    std::int64_t count_ = 0;
    double last_error_ = 0.0;
};

struct Optimum {
    Vector position;
    double fitness = 0.0;
};

struct Recording {
    bool error_log = false;
    bool environment_history = false;
};

class DynamicLandscape {
public:
    /// Peaks are drawn uniformly from the configured ranges using the dynamics stream.
    DynamicLandscape(LandscapeParams params, std::uint64_t dynamics_seed, Recording recording = {})
        : params_(std::move(params)), rng_(dynamics_seed), recording_(recording),
          tracker_(recording.error_log) {
        params_.validate();
        std::uniform_real_distribution<double> heights(params_.min_height, params_.max_height);
        std::uniform_real_distribution<double> widths(params_.min_width, params_.max_width);
        peaks_.reserve(params_.num_peaks);
        for (std::size_t i = 0; i < params_.num_peaks; ++i) {
            Peak peak;
            peak.center = params_.space.sample(rng_);
            peak.height = heights(rng_);
            peak.width = widths(rng_);
            peaks_.push_back(std::move(peak));
        }
        start();
    }

    /// Explicit initial peaks; `params.num_peaks` is overwritten by `peaks.size()`.
    DynamicLandscape(LandscapeParams params, std::vector<Peak> peaks, std::uint64_t dynamics_seed,
                     Recording recording = {})
        : params_(std::move(params)), rng_(dynamics_seed), recording_(recording),
          tracker_(recording.error_log), peaks_(std::move(peaks)) {
        params_.num_peaks = peaks_.size();
        params_.validate();
        for (const auto& p : peaks_) {
            if (!params_.space.contains(p.center)) throw ContractViolation("peak center outside the search space");
            if (!(p.width > 0)) throw ContractViolation("peak width must be positive");
        }
        start();
    }

    /// Counted evaluation. Throws BudgetExhausted once T * change_frequency evaluations are spent.
    double evaluate(std::span<const double> x) {
        if (evals_done_ >= budget()) throw BudgetExhausted();
        if (!params_.space.contains(x)) throw ContractViolation("position outside the search space");
        const double f = value_at(x);
        ++evals_done_;
        tracker_.record(f);
        if (evals_done_ % params_.schedule.change_frequency == 0 &&
            env_index_ < params_.schedule.num_environments)
            advance_environment();
        return f;
    }

    /// Uncounted landscape value in the current environment.
    double value_at(std::span<const double> x) const {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& peak : peaks_) best = std::max(best, peak.value_at(x));
        return best;
    }

    void advance_environment() {
        if (env_index_ >= params_.schedule.num_environments)
            throw ContractViolation("no environments left to advance to");
        const auto& sched = params_.schedule;
        const auto& space = params_.space;
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (auto& peak : peaks_) {
            Vector dir(space.dims);
            double norm = 0.0;
            while (norm == 0.0) {
                for (auto& d : dir) d = gauss(rng_);
                norm = std::sqrt(std::inner_product(dir.begin(), dir.end(), dir.begin(), 0.0));
            }
            for (std::size_t k = 0; k < space.dims; ++k)
                peak.center[k] = space.clamp(peak.center[k] + sched.shift_severity * dir[k] / norm);
            peak.height = std::clamp(peak.height + sched.height_severity * gauss(rng_),
                                     params_.min_height, params_.max_height);
            peak.width = std::clamp(peak.width + sched.width_severity * gauss(rng_),
                                    params_.min_width, params_.max_width);
        }
        ++env_index_;
        on_change();
    }

    /// Apex of the highest peak (lowest index on ties).
    Optimum current_optimum() const {
        auto it = std::max_element(peaks_.begin(), peaks_.end(),
                                   [](const Peak& a, const Peak& b) { return a.height < b.height; });
        return {it->center, it->height};
    }

    std::int64_t budget() const { return params_.schedule.budget(); }
    std::int64_t evals_done() const { return evals_done_; }
    std::int64_t remaining() const { return budget() - evals_done_; }
    bool exhausted() const { return evals_done_ >= budget(); }
    std::int64_t env_index() const { return env_index_; }

    const SearchSpace& space() const { return params_.space; }
    const LandscapeParams& params() const { return params_; }
    const std::vector<Peak>& peaks() const { return peaks_; }
    const OfflineErrorTracker& tracker() const { return tracker_; }

    /// Peak sets of every environment seen so far (empty unless history recording is on).
    const std::vector<std::vector<Peak>>& history() const { return history_; }

private:
    void start() {
        env_index_ = 1;
        on_change();
    }

    void on_change() {
        tracker_.begin_environment(env_index_, current_optimum().fitness);
        if (recording_.environment_history) history_.push_back(peaks_);
    }

    LandscapeParams params_;
    std::mt19937_64 rng_;
    Recording recording_;
    OfflineErrorTracker tracker_;
    std::vector<Peak> peaks_;
    std::vector<std::vector<Peak>> history_;
    std::int64_t evals_done_ = 0;
    std::int64_t env_index_ = 1;
};

/// `env_index, peak_id, center..., height, width`, one line per peak per environment.
inline void write_environment_history(std::ostream& out, const std::vector<std::vector<Peak>>& history) {
    for (std::size_t env = 0; env < history.size(); ++env) {
        for (std::size_t id = 0; id < history[env].size(); ++id) {
            const Peak& p = history[env][id];
            out << env + 1 << ',' << id;
            for (double c : p.center) out << ',' << detail::format_double(c);
            out << ',' << detail::format_double(p.height) << ',' << detail::format_double(p.width) << '\n';
        }
    }
}

} // namespace pspso
