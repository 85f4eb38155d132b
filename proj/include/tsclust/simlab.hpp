#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tsclust/config.hpp"
#include "tsclust/series.hpp"
#include "tsclust/spectral.hpp"
#include "tsclust/types.hpp"

namespace tsclust {

// Parametric data-generating mechanism: linear/seasonal/integrated ARMA
// recursions or a three-regime SETAR, all with standard normal innovations.
struct DgmSpec {
    enum class Kind { arma, seasonal_arma, integrated_arma, setar3 };

    struct Regime {
        double intercept = 0.0;
        std::map<Index, double> ar;  // lag -> coefficient
    };

    Kind kind = Kind::arma;
    std::string name;
    std::map<Index, double> ar;      // lag -> coefficient
    std::map<Index, double> ma;      // lag -> coefficient
    std::vector<Regime> regimes;     // setar3 only, ordered low to high
    Vector thresholds;               // setar3: strictly increasing
    Index delay = 1;

    Index max_lag() const;
    void validate() const;
};

// The ten benchmark mechanisms (ser01..ser10).
const std::vector<DgmSpec>& benchmark_dgms();
const DgmSpec& dgm_by_name(const std::string& name);

// Recursive generation from zero initial history with standard normal
// innovations; the first burn_in observations are discarded. Throws
// GenerationFailure if the recursion overflows.
TimeSeries simulate(const DgmSpec& spec, Index T, Index burn_in, std::uint64_t seed);

// Percentage of objects whose assigned cluster maps to their true label under
// the optimal one-to-one cluster-to-label matching.
double exact_grouping(const std::vector<Index>& true_labels, const IntVector& assignments);

double adjusted_rand_index(const std::vector<Index>& true_labels, const IntVector& assignments);

// Maximum-weight one-to-one matching on a (clusters x labels) count matrix;
// returns the matched label per cluster (-1 when unmatched).
std::vector<Index> optimal_label_matching(const Matrix& counts);

struct ScenarioConfig {
    Index n_per_dgm = 10;
    Index T = 400;
    Index replicates = 30;
    Index burn_in = 200;
    std::vector<DgmSpec> dgms;       // empty = the ten benchmarks
    PipelineConfig pipeline;
};

struct ScenarioResult {
    Index replicate_id = 0;
    std::vector<Index> true_labels;          // per clustered series
    std::vector<std::string> series_names;
    IntVector assignments;
    Index chosen_c = 0;
    std::map<Index, double> silhouette_by_c;
    double average_silhouette = 0.0;
    double exact_grouping_pct = 0.0;
    double ari = 0.0;
    std::vector<std::string> failures;       // per-series error messages
};

// One full recovery experiment: per replicate, simulate every series, run the
// feature -> clustering pipeline, and score recovery against the true DGM
// labels. Per-series failures are recorded, not fatal.
std::vector<ScenarioResult> run_scenario(const ScenarioConfig& config, std::uint64_t seed);

}  // namespace tsclust
