#pragma once

#include <cstdint>

#include "tsclust/ar.hpp"
#include "tsclust/series.hpp"
#include "tsclust/setar.hpp"
#include "tsclust/types.hpp"

namespace tsclust {

// Candidate cluster counts, inclusive.
struct CRange {
    Index lo = 2;
    Index hi = 15;
};

// Resolved knobs for the feature-and-clustering pipeline. Defaults target
// monthly horizons; `validate` throws ConfigError on inconsistent bounds.
struct PipelineConfig {
    Index k = 3;                    // SETAR regime count
    Index p_max = 3;                // per-regime AR order cap
    Index p_ar_max = 12;            // linear AR order cap
    Index d_max = 2;                // SETAR delay search bound
    Index l = 12;                   // correlation lag horizon
    double significance_level = 0.05;
    double sigma = 0.0;             // affinity bandwidth; <= 0 selects the
                                    // median pairwise distance
    CRange c_range;
    Index restarts = 20;            // k-means restarts
    Index bootstrap_reps = 500;     // threshold-test bootstrap replications
    std::uint64_t seed = 1;
    StationarizeMode stationarize_mode = StationarizeMode::none;
    Criterion criterion = Criterion::bic;
    bool scale_rows = true;         // standardize feature rows before clustering
    Index threads = 0;              // 0 = hardware concurrency

    void validate() const;
    SetarOptions setar_options() const;

    // Longest lag the pipeline touches; series must be at least ten times
    // this long after stationarizing.
    Index max_lag() const;
    Index min_series_length() const { return 10 * max_lag(); }
};

}  // namespace tsclust
