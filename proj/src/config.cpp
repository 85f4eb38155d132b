#include "tsclust/config.hpp"

#include <algorithm>

#include "tsclust/error.hpp"

namespace tsclust {

void PipelineConfig::validate() const {
    if (k < 1) throw ConfigError("k must be >= 1");
    if (p_max < 1 || p_ar_max < 1 || d_max < 1)
        throw ConfigError("p_max, p_ar_max and d_max must be positive");
    if (p_max > kMaxLagOrder || p_ar_max > kMaxLagOrder)
        throw ConfigError("lag orders are capped at " + std::to_string(kMaxLagOrder));
    if (l < 1) throw ConfigError("correlation horizon l must be positive");
    if (!(significance_level > 0.0 && significance_level < 1.0))
        throw ConfigError("significance_level must lie in (0,1)");
    if (c_range.lo < 2 || c_range.hi < c_range.lo)
        throw ConfigError("c_range must satisfy 2 <= lo <= hi");
    if (restarts < 1) throw ConfigError("restarts must be positive");
    if (bootstrap_reps < 100) throw ConfigError("bootstrap_reps must be >= 100");
    if (threads < 0) throw ConfigError("threads must be >= 0");
}

SetarOptions PipelineConfig::setar_options() const {
    SetarOptions opt;
    opt.p_max = p_max;
    opt.d_max = d_max;
    opt.criterion = criterion;
    opt.threads = threads;
    return opt;
}

Index PipelineConfig::max_lag() const { return std::max({l, p_max, p_ar_max, d_max}); }

}  // namespace tsclust
