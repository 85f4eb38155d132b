#include "tsclust/simlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>

#include "tsclust/error.hpp"
#include "tsclust/features.hpp"
#include "tsclust/rng.hpp"

namespace tsclust {

Index DgmSpec::max_lag() const {
    Index m = kind == Kind::setar3 ? delay : Index{0};
    for (const auto& [lag, coef] : ar) m = std::max(m, lag);
    for (const auto& [lag, coef] : ma) m = std::max(m, lag);
    for (const auto& regime : regimes)
        for (const auto& [lag, coef] : regime.ar) m = std::max(m, lag);
    return std::max<Index>(m, 1);
}

void DgmSpec::validate() const {
    for (const auto& [lag, coef] : ar)
        if (lag < 1) throw InvalidArgument("dgm '" + name + "': AR lag indices must be positive");
    for (const auto& [lag, coef] : ma)
        if (lag < 1) throw InvalidArgument("dgm '" + name + "': MA lag indices must be positive");
    if (kind == Kind::setar3) {
        if (regimes.size() != static_cast<std::size_t>(thresholds.size()) + 1)
            throw InvalidArgument("dgm '" + name + "': need one more regime than thresholds");
        for (Index j = 1; j < thresholds.size(); ++j)
            if (!(thresholds[j - 1] < thresholds[j]))
                throw InvalidArgument("dgm '" + name + "': thresholds must be increasing");
        if (delay < 1) throw InvalidArgument("dgm '" + name + "': delay must be positive");
        for (const auto& regime : regimes)
            for (const auto& [lag, coef] : regime.ar)
                if (lag < 1)
                    throw InvalidArgument("dgm '" + name + "': regime lag indices must be positive");
    }
}

namespace {

DgmSpec arma_spec(std::string name, DgmSpec::Kind kind, std::map<Index, double> ar,
                  std::map<Index, double> ma) {
    DgmSpec s;
    s.kind = kind;
    s.name = std::move(name);
    s.ar = std::move(ar);
    s.ma = std::move(ma);
    return s;
}

DgmSpec setar_spec(std::string name, std::vector<DgmSpec::Regime> regimes,
                   std::initializer_list<double> thresholds) {
    DgmSpec s;
    s.kind = DgmSpec::Kind::setar3;
    s.name = std::move(name);
    s.regimes = std::move(regimes);
    s.thresholds.resize(static_cast<Index>(thresholds.size()));
    Index i = 0;
    for (double r : thresholds) s.thresholds[i++] = r;
    s.delay = 1;
    return s;
}

}  // namespace

const std::vector<DgmSpec>& benchmark_dgms() {
    static const std::vector<DgmSpec> table = {
        arma_spec("ser01", DgmSpec::Kind::seasonal_arma, {{12, 0.80}}, {{12, 0.70}}),
        arma_spec("ser02", DgmSpec::Kind::seasonal_arma, {{24, -0.70}}, {{6, 0.80}}),
        arma_spec("ser03", DgmSpec::Kind::arma, {{1, 0.80}, {2, -0.40}, {3, 0.15}},
                  {{1, -0.20}, {2, 0.25}}),
        arma_spec("ser04", DgmSpec::Kind::arma, {{1, 0.90}, {2, -0.80}, {3, 0.55}},
                  {{1, 0.80}, {2, 0.50}}),
        arma_spec("ser05", DgmSpec::Kind::arma, {{1, 1.10}, {2, -0.60}, {3, -0.20}},
                  {{1, 0.30}, {2, -0.70}}),
        arma_spec("ser06", DgmSpec::Kind::integrated_arma, {{1, 2.55}, {2, -2.30}, {3, 0.75}},
                  {{1, 0.80}, {2, 0.50}}),
        setar_spec("ser07",
                   {{2.00, {{1, -0.40}, {2, -0.10}}},
                    {-0.05, {{1, 0.20}, {2, 0.70}}},
                    {0.05, {{1, -0.45}, {2, 0.15}}}},
                   {-1.0, 1.0}),
        setar_spec("ser08",
                   {{-0.50, {{1, 0.40}, {2, -0.10}}},
                    {0.05, {{1, 0.20}, {2, 0.80}}},
                    {0.05, {{1, -0.45}, {2, 0.15}}}},
                   {0.0, 4.0}),
        setar_spec("ser09",
                   {{-0.15, {{1, 0.74}, {2, -0.15}}},
                    {1.90, {{1, 0.20}, {2, -1.30}}},
                    {1.00, {{1, 0.50}, {2, -1.15}}}},
                   {-1.2, 1.2}),
        setar_spec("ser10",
                   {{3.00, {{1, 0.50}, {2, -0.80}, {3, 0.40}}},
                    {6.00, {{1, 0.90}}},
                    {4.00, {{1, 0.70}, {2, -0.80}}}},
                   {3.0, 9.0}),
    };
    return table;
}

const DgmSpec& dgm_by_name(const std::string& name) {
    for (const DgmSpec& s : benchmark_dgms())
        if (s.name == name) return s;
    std::string known;
    for (const DgmSpec& s : benchmark_dgms()) known += (known.empty() ? "" : ", ") + s.name;
    throw ConfigError("unknown DGM '" + name + "' (known: " + known + ")");
}

TimeSeries simulate(const DgmSpec& spec, Index T, Index burn_in, std::uint64_t seed) {
    spec.validate();
    if (T < 1) throw InvalidArgument("simulate: T must be positive");
    if (burn_in < spec.max_lag())
        throw InvalidArgument("simulate: burn_in must cover the longest lag of '" + spec.name +
                              "'");
    const Index total = burn_in + T;
    Vector y(total), eps(total);
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    auto value_at = [&](Index t) { return t >= 0 ? y[t] : 0.0; };
    auto eps_at = [&](Index t) { return t >= 0 ? eps[t] : 0.0; };

    for (Index t = 0; t < total; ++t) {
        const double e = normal(rng);
        eps[t] = e;
        double v = e;
        if (spec.kind == DgmSpec::Kind::setar3) {
            const double z = value_at(t - spec.delay);
            const double* begin = spec.thresholds.data();
            const Index j =
                std::lower_bound(begin, begin + spec.thresholds.size(), z) - begin;
            const DgmSpec::Regime& regime = spec.regimes[j];
            v += regime.intercept;
            for (const auto& [lag, coef] : regime.ar) v += coef * value_at(t - lag);
        } else {
            for (const auto& [lag, coef] : spec.ar) v += coef * value_at(t - lag);
            for (const auto& [lag, coef] : spec.ma) v += coef * eps_at(t - lag);
        }
        if (!std::isfinite(v) || std::abs(v) > 1e12)
            throw GenerationFailure("simulate: recursion overflowed for '" + spec.name + "'");
        y[t] = v;
    }
    return TimeSeries(y.tail(T), spec.name);
}

namespace {

// Hungarian assignment (potentials formulation) minimizing total cost of a
// square matrix; returns the column matched to each row.
std::vector<Index> hungarian_min(const Matrix& cost) {
    const Index n = cost.rows();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<Index> p(n + 1, 0), way(n + 1, 0);
    for (Index i = 1; i <= n; ++i) {
        p[0] = i;
        Index j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            const Index i0 = p[j0];
            Index j1 = 0;
            double delta = inf;
            for (Index j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (Index j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const Index j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<Index> match(n, -1);
    for (Index j = 1; j <= n; ++j)
        if (p[j] != 0) match[p[j] - 1] = j - 1;
    return match;
}

// Contingency table of assignments (rows) against true labels (columns),
// with both id sets compacted.
Matrix contingency(const std::vector<Index>& true_labels, const IntVector& assignments,
                   std::vector<Index>* row_ids = nullptr) {
    std::vector<Index> labels = true_labels;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    std::vector<Index> clusters(assignments.data(), assignments.data() + assignments.size());
    std::sort(clusters.begin(), clusters.end());
    clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());

    Matrix counts = Matrix::Zero(static_cast<Index>(clusters.size()),
                                 static_cast<Index>(labels.size()));
    for (Index i = 0; i < assignments.size(); ++i) {
        const Index r = std::lower_bound(clusters.begin(), clusters.end(), assignments[i]) -
                        clusters.begin();
        const Index c = std::lower_bound(labels.begin(), labels.end(), true_labels[i]) -
                        labels.begin();
        counts(r, c) += 1.0;
    }
    if (row_ids) *row_ids = clusters;
    return counts;
}

}  // namespace

std::vector<Index> optimal_label_matching(const Matrix& counts) {
    const Index k = counts.rows(), l = counts.cols();
    const Index n = std::max(k, l);
    const double top = counts.size() > 0 ? counts.maxCoeff() : 0.0;
    Matrix cost = Matrix::Constant(n, n, top);
    cost.topLeftCorner(k, l) = top - counts.array();
    std::vector<Index> match = hungarian_min(cost);
    match.resize(k);
    for (Index j = 0; j < k; ++j)
        if (match[j] >= l) match[j] = -1;
    return match;
}

double exact_grouping(const std::vector<Index>& true_labels, const IntVector& assignments) {
    const Index n = assignments.size();
    if (static_cast<Index>(true_labels.size()) != n)
        throw InvalidArgument("exact_grouping: label/assignment length mismatch");
    if (n == 0) throw InvalidArgument("exact_grouping: empty input");
    const Matrix counts = contingency(true_labels, assignments);
    const std::vector<Index> match = optimal_label_matching(counts);
    double hits = 0.0;
    for (Index r = 0; r < counts.rows(); ++r)
        if (match[r] >= 0) hits += counts(r, match[r]);
    return 100.0 * hits / static_cast<double>(n);
}

double adjusted_rand_index(const std::vector<Index>& true_labels, const IntVector& assignments) {
    const Index n = assignments.size();
    if (static_cast<Index>(true_labels.size()) != n)
        throw InvalidArgument("adjusted_rand_index: length mismatch");
    const Matrix counts = contingency(true_labels, assignments);
    auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
    double sum_cells = 0.0;
    for (Index r = 0; r < counts.rows(); ++r)
        for (Index c = 0; c < counts.cols(); ++c) sum_cells += choose2(counts(r, c));
    double sum_rows = 0.0, sum_cols = 0.0;
    for (Index r = 0; r < counts.rows(); ++r) sum_rows += choose2(counts.row(r).sum());
    for (Index c = 0; c < counts.cols(); ++c) sum_cols += choose2(counts.col(c).sum());
    const double total = choose2(static_cast<double>(n));
    const double expected = sum_rows * sum_cols / total;
    const double maximum = 0.5 * (sum_rows + sum_cols);
    if (maximum == expected) return 1.0;  // single cluster both sides
    return (sum_cells - expected) / (maximum - expected);
}

std::vector<ScenarioResult> run_scenario(const ScenarioConfig& config, std::uint64_t seed) {
    config.pipeline.validate();
    if (config.n_per_dgm < 1) throw InvalidArgument("run_scenario: n_per_dgm must be positive");
    if (config.replicates < 0) throw InvalidArgument("run_scenario: replicates must be >= 0");
    const std::vector<DgmSpec>& dgms = config.dgms.empty() ? benchmark_dgms() : config.dgms;
    for (const DgmSpec& s : dgms) s.validate();

    const Index g = static_cast<Index>(dgms.size());
    const Index per_rep = g * config.n_per_dgm;

    std::vector<ScenarioResult> results;
    results.reserve(config.replicates);
    for (Index rep = 0; rep < config.replicates; ++rep) {
        ScenarioResult r;
        r.replicate_id = rep;

        std::vector<std::optional<FeatureVector>> extracted(per_rep);
        std::vector<Index> labels(per_rep);
        std::vector<std::string> names(per_rep);
        std::vector<std::string> errors(per_rep);

        Index n_threads = config.pipeline.threads > 0
                              ? config.pipeline.threads
                              : static_cast<Index>(std::max(1u, std::thread::hardware_concurrency()));
        n_threads = std::min(n_threads, per_rep);
        std::atomic<Index> next{0};
        PipelineConfig series_pipe = config.pipeline;
        series_pipe.threads = 1;  // parallelism lives at the series level here
        auto worker = [&] {
            for (Index i = next.fetch_add(1); i < per_rep; i = next.fetch_add(1)) {
                const Index dgm_idx = i / config.n_per_dgm;
                const Index sample_idx = i % config.n_per_dgm;
                labels[i] = dgm_idx;
                names[i] = dgms[dgm_idx].name + "-r" + std::to_string(rep) + "-s" +
                           std::to_string(sample_idx);
                try {
                    TimeSeries sim = simulate(
                        dgms[dgm_idx], config.T, config.burn_in,
                        derive_seed(seed, static_cast<std::uint64_t>(rep),
                                    static_cast<std::uint64_t>(dgm_idx),
                                    static_cast<std::uint64_t>(sample_idx)));
                    TimeSeries named(sim.values(), names[i]);
                    extracted[i] = extract_features(named, series_pipe);
                } catch (const Error& e) {
                    errors[i] = names[i] + ": " + e.what();
                }
            }
        };
        if (n_threads <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (Index t = 0; t < n_threads; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }

        std::vector<FeatureVector> ok;
        for (Index i = 0; i < per_rep; ++i) {
            if (extracted[i]) {
                ok.push_back(std::move(*extracted[i]));
                r.true_labels.push_back(labels[i]);
                r.series_names.push_back(names[i]);
            } else {
                r.failures.push_back(errors[i]);
            }
        }

        if (static_cast<Index>(ok.size()) >= 3) {
            FeatureMatrix fm = assemble_matrix(ok, config.pipeline.scale_rows);
            CRange range = config.pipeline.c_range;
            range.hi = std::min<Index>(range.hi, fm.count() - 1);
            range.lo = std::min(range.lo, range.hi);
            PipelineConfig pipe = config.pipeline;
            pipe.seed = derive_seed(seed, static_cast<std::uint64_t>(rep), 0x5ce0ULL);
            ClusteringResult clust = select_cluster_count(fm, range, pipe);
            r.assignments = clust.assignments;
            r.chosen_c = clust.c;
            r.silhouette_by_c = clust.silhouette_by_c;
            r.average_silhouette = clust.average_silhouette;
            r.exact_grouping_pct = exact_grouping(r.true_labels, r.assignments);
            r.ari = adjusted_rand_index(r.true_labels, r.assignments);
        } else {
            r.failures.push_back("replicate " + std::to_string(rep) +
                                 ": fewer than 3 series survived, clustering skipped");
        }
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace tsclust
