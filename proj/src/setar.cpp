#include "tsclust/setar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "tsclust/error.hpp"
#include "tsclust/rng.hpp"

namespace tsclust {

Index SetarModel::regime_of(double threshold_value) const {
    const double* begin = thresholds.data();
    const double* end = begin + thresholds.size();
    // regime j is active when thresholds[j-1] < z <= thresholds[j]
    return std::lower_bound(begin, end, threshold_value) - begin;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Index resolve_threads(Index requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<Index>(hw);
}

struct SegmentFit {
    double rss = kInf;
    Index p = 0;
    bool valid = false;
};

// Prefix cross-moments of the lag design over rows sorted by the delayed
// variable y_{t-d}. Any contiguous range of sorted rows (one regime) yields
// its X'X, X'y, y'y by subtraction, so a regime OLS costs O(dim^3) regardless
// of the sample size. X'X prefixes depend only on the regressors; response
// prefixes can be refreshed in isolation for the fixed-regressor bootstrap.
class GridWorkspace {
public:
    GridWorkspace(const Vector& y, Index p, Index t0, Index d)
        : dim_(p + 1), n_(y.size() - t0), t0_(t0), d_(d), y_(&y) {
        order_.resize(n_);
        std::iota(order_.begin(), order_.end(), Index{0});
        std::sort(order_.begin(), order_.end(), [&](Index a, Index b) {
            const double za = y[t0 + a - d], zb = y[t0 + b - d];
            if (za != zb) return za < zb;
            return a < b;
        });
        sorted_z_.resize(n_);
        for (Index i = 0; i < n_; ++i) sorted_z_[i] = y[t0 + order_[i] - d];
        split_ok_.assign(n_ + 1, false);
        for (Index s = 1; s < n_; ++s) split_ok_[s] = sorted_z_[s - 1] < sorted_z_[s];

        const Index packed = dim_ * (dim_ + 1) / 2;
        xtx_prefix_ = Matrix::Zero(n_ + 1, packed);
        SmallVector row(dim_);
        for (Index i = 0; i < n_; ++i) {
            const Index t = t0 + order_[i];
            row[0] = 1.0;
            for (Index lag = 1; lag < dim_; ++lag) row[lag] = y[t - lag];
            xtx_prefix_.row(i + 1) = xtx_prefix_.row(i);
            Index idx = 0;
            for (Index b = 0; b < dim_; ++b)
                for (Index a = 0; a <= b; ++a) xtx_prefix_(i + 1, idx++) += row[a] * row[b];
        }
        set_response_from(y);
    }

    // Response values taken per effective row from the original series.
    void set_response_from(const Vector& y) {
        Vector r(n_);
        for (Index i = 0; i < n_; ++i) r[i] = y[t0_ + i];
        set_response(r);
    }

    // `response` is indexed by effective row (time order, size n).
    void set_response(const Vector& response) {
        xty_prefix_ = Matrix::Zero(n_ + 1, dim_);
        yty_prefix_ = Vector::Zero(n_ + 1);
        SmallVector row(dim_);
        const Vector& y = *y_;
        for (Index i = 0; i < n_; ++i) {
            const Index t = t0_ + order_[i];
            row[0] = 1.0;
            for (Index lag = 1; lag < dim_; ++lag) row[lag] = y[t - lag];
            const double resp = response[order_[i]];
            xty_prefix_.row(i + 1) = xty_prefix_.row(i) + resp * row.transpose();
            yty_prefix_[i + 1] = yty_prefix_[i] + resp * resp;
        }
    }

    Index n() const { return n_; }
    Index delay() const { return d_; }
    Index max_order() const { return dim_ - 1; }
    double threshold_at(Index split) const { return sorted_z_[split - 1]; }
    bool split_allowed(Index split) const { return split_ok_[split]; }

    // Number of sorted rows with threshold variable <= r.
    Index position_of(double r) const {
        return std::upper_bound(sorted_z_.data(), sorted_z_.data() + n_, r) - sorted_z_.data();
    }

    // OLS of the sorted row range [a, b) at order p; returns +inf when the
    // moment solve is not usable.
    double rss_fixed(Index a, Index b, Index p) const {
        const Index dim = p + 1;
        SmallMatrix g(dim, dim);
        for (Index col = 0; col < dim; ++col)
            for (Index row = 0; row <= col; ++row) {
                const double v = xtx_prefix_(b, pack(row, col)) - xtx_prefix_(a, pack(row, col));
                g(row, col) = v;
                g(col, row) = v;
            }
        SmallVector rhs = (xty_prefix_.row(b) - xty_prefix_.row(a)).head(dim);
        Eigen::LDLT<SmallMatrix> ldlt(g);
        SmallVector beta = ldlt.solve(rhs);
        if (!beta.allFinite()) return kInf;
        const double rss = (yty_prefix_[b] - yty_prefix_[a]) - beta.dot(rhs);
        return std::max(rss, 0.0);
    }

    // Per-regime order selection by information criterion on the range's own
    // subsample; ties go to the smaller order.
    SegmentFit eval(Index a, Index b, Criterion crit) const {
        SegmentFit best;
        double best_ic = kInf;
        const Index m = b - a;
        for (Index p = 1; p <= max_order(); ++p) {
            const double rss = rss_fixed(a, b, p);
            if (!std::isfinite(rss)) continue;
            const double ic = information_criterion(crit, rss, m, p + 1);
            if (ic < best_ic) {
                best_ic = ic;
                best = SegmentFit{rss, p, true};
            }
        }
        return best;
    }

private:
    static Index pack(Index a, Index b) { return b * (b + 1) / 2 + a; }

    Index dim_, n_, t0_, d_;
    std::vector<Index> order_;
    Vector sorted_z_;
    Matrix xtx_prefix_;
    Matrix xty_prefix_;
    Vector yty_prefix_;
    std::vector<char> split_ok_;
    const Vector* y_;
};

struct Candidate {
    double rss = kInf;
    Index d = 0;
    std::vector<Index> splits;       // sorted-order positions, ascending
    std::vector<double> thresholds;  // values at the splits
    std::vector<Index> orders;       // per regime
    bool valid = false;

    Index total_order() const { return std::accumulate(orders.begin(), orders.end(), Index{0}); }
};

// Deterministic strict ordering: smaller RSS, then smaller delay, smaller
// total order, lower thresholds.
bool better(const Candidate& a, const Candidate& b) {
    if (!a.valid || !b.valid) return a.valid && !b.valid;
    if (a.rss != b.rss) return a.rss < b.rss;
    if (a.d != b.d) return a.d < b.d;
    const Index pa = a.total_order(), pb = b.total_order();
    if (pa != pb) return pa < pb;
    return a.thresholds < b.thresholds;
}

Index min_occupancy(Index n, Index p_max) {
    return std::max<Index>(p_max + 2, static_cast<Index>(std::ceil(kMinRegimeFraction * n)));
}

// Enumerates split tuples (segments >= m rows each) for first-split positions
// in [s_begin, s_end), keeping the best candidate under `better`. Fits of the
// final segment are read from the precomputed tail cache.
void search_splits(const GridWorkspace& ws, Index k, Index m, Criterion crit,
                   const std::vector<SegmentFit>& tail_fits, Index s_begin, Index s_end,
                   Candidate& best) {
    const Index n = ws.n();
    std::vector<Index> splits(k - 1);
    std::vector<Index> orders(k);

    // depth-first over split positions; level = index of the split being placed
    auto recurse = [&](auto&& self, Index level, Index start, double rss_so_far) -> void {
        const Index segments_after = k - 1 - level;  // segments right of this split
        const Index lo = level == 0 ? std::max(s_begin, m) : start + m;
        const Index hi = level == 0 ? std::min(s_end, n - segments_after * m + 1)
                                    : n - segments_after * m + 1;
        for (Index s = lo; s < hi; ++s) {
            if (!ws.split_allowed(s)) continue;
            const SegmentFit seg = ws.eval(start, s, crit);
            if (!seg.valid) continue;
            splits[level] = s;
            orders[level] = seg.p;
            const double rss = rss_so_far + seg.rss;
            if (level + 1 < k - 1) {
                self(self, level + 1, s, rss);
            } else {
                const SegmentFit& tail = tail_fits[s];
                if (!tail.valid) continue;
                orders[k - 1] = tail.p;
                Candidate cand;
                cand.rss = rss + tail.rss;
                cand.d = ws.delay();
                cand.splits.assign(splits.begin(), splits.end());
                cand.orders = orders;
                cand.thresholds.resize(k - 1);
                for (Index j = 0; j < k - 1; ++j) cand.thresholds[j] = ws.threshold_at(splits[j]);
                cand.valid = true;
                if (better(cand, best)) best = cand;
            }
        }
    };
    recurse(recurse, 0, 0, 0.0);
}

Candidate grid_search_delay(const GridWorkspace& ws, Index k, Criterion crit, Index threads) {
    const Index n = ws.n();
    const Index m = min_occupancy(n, ws.max_order());
    Candidate best;
    if (k * m > n) return best;

    std::vector<SegmentFit> tail_fits(n + 1);
    const Index tail_lo = (k - 1) * m;
    for (Index s = tail_lo; s + m <= n; ++s)
        if (ws.split_allowed(s)) tail_fits[s] = ws.eval(s, n, crit);

    const Index first_lo = m;
    const Index first_hi = n - (k - 1) * m + 1;
    if (first_lo >= first_hi) return best;

    threads = std::min<Index>(resolve_threads(threads), first_hi - first_lo);
    if (threads <= 1) {
        search_splits(ws, k, m, crit, tail_fits, first_lo, first_hi, best);
        return best;
    }

    // Block partition of the first split range; block-order fold reproduces
    // the serial scan exactly.
    std::vector<Candidate> block_best(threads);
    std::vector<std::thread> pool;
    const Index span = first_hi - first_lo;
    for (Index b = 0; b < threads; ++b) {
        const Index lo = first_lo + span * b / threads;
        const Index hi = first_lo + span * (b + 1) / threads;
        pool.emplace_back([&, b, lo, hi] {
            search_splits(ws, k, m, crit, tail_fits, lo, hi, block_best[b]);
        });
    }
    for (auto& t : pool) t.join();
    for (const Candidate& c : block_best)
        if (better(c, best)) best = c;
    return best;
}

// Direct per-regime OLS refit of a chosen configuration; produces exact
// residuals, standard errors, and occupancy.
SetarModel refit_direct(const Vector& y, Index t0, Index d,
                        const std::vector<double>& thresholds, const std::vector<Index>& orders) {
    const Index k = static_cast<Index>(orders.size());
    const Index n = y.size() - t0;
    SetarModel model;
    model.k = k;
    model.delay = d;
    model.effective_start = t0;
    model.thresholds.resize(static_cast<Index>(thresholds.size()));
    for (std::size_t j = 0; j < thresholds.size(); ++j)
        model.thresholds[static_cast<Index>(j)] = thresholds[j];
    model.regimes.resize(k);
    model.regime_occupancy.assign(k, 0);

    std::vector<std::vector<Index>> rows(k);
    for (Index i = 0; i < n; ++i) {
        const double z = y[t0 + i - d];
        const Index j = std::lower_bound(thresholds.begin(), thresholds.end(), z) -
                        thresholds.begin();
        rows[j].push_back(i);
    }

    Vector raw_resid(n);
    double rss = 0.0;
    for (Index j = 0; j < k; ++j) {
        const Index p = orders[j];
        const Index nj = static_cast<Index>(rows[j].size());
        model.regime_occupancy[j] = nj;
        if (nj < p + 2)
            throw EstimationFailure("setar: regime " + std::to_string(j + 1) +
                                    " holds too few observations (" + std::to_string(nj) + ")");
        Matrix x(nj, p + 1);
        Vector resp(nj);
        for (Index r = 0; r < nj; ++r) {
            const Index t = t0 + rows[j][r];
            x(r, 0) = 1.0;
            for (Index lag = 1; lag <= p; ++lag) x(r, lag) = y[t - lag];
            resp[r] = y[t];
        }
        Eigen::ColPivHouseholderQR<Matrix> qr(x);
        if (qr.rank() < x.cols())
            throw EstimationFailure("setar: singular design in regime " + std::to_string(j + 1));
        Vector beta = qr.solve(resp);
        Vector resid = resp - x * beta;
        const double rss_j = resid.squaredNorm();
        rss += rss_j;
        const Index dof = nj - (p + 1);
        const double sigma2_j = dof > 0 ? rss_j / static_cast<double>(dof) : 0.0;
        Matrix xtx_inv = (x.transpose() * x).ldlt().solve(Matrix::Identity(p + 1, p + 1));

        SetarRegime& regime = model.regimes[j];
        regime.intercept = beta[0];
        regime.coefficients = beta.tail(p);
        regime.std_errors = (sigma2_j * xtx_inv.diagonal().array()).max(0.0).sqrt();
        for (Index r = 0; r < nj; ++r) raw_resid[rows[j][r]] = resid[r];
    }
    model.rss = rss;
    model.sigma = std::sqrt(rss / static_cast<double>(n));
    model.residuals = model.sigma > 0.0 ? Vector(raw_resid / model.sigma) : raw_resid;
    return model;
}

SetarModel linear_model(const Vector& y, Index t0, const SetarOptions& opt) {
    const Index q = detail::select_ar_order_window(y, opt.p_max, t0, opt.criterion);
    return refit_direct(y, t0, 1, {}, {q});
}

void validate_options(const Vector& y, Index k, const SetarOptions& opt) {
    if (k < 1) throw InvalidArgument("setar: regime count must be >= 1");
    if (opt.p_max < 1 || opt.d_max < 1)
        throw InvalidArgument("setar: p_max and d_max must be positive");
    if (opt.p_max > kMaxLagOrder)
        throw InvalidArgument("setar: p_max exceeds supported bound " +
                              std::to_string(kMaxLagOrder));
    const Index t0 = std::max(opt.p_max, opt.d_max);
    if (y.size() - t0 < opt.p_max + 2)
        throw EstimationFailure("setar: series too short for the requested orders");
}

// Best single split of one parent regime keeping the parent's per-regime
// orders; used to guarantee that the k-regime RSS never exceeds the
// (k-1)-regime RSS even though regular candidates re-select orders.
Candidate best_refinement(const GridWorkspace& ws, const SetarModel& parent, Criterion) {
    const Index n = ws.n();
    const Index m = min_occupancy(n, ws.max_order());
    const Index k0 = parent.k;
    Candidate best;

    std::vector<Index> bounds(k0 + 1);
    bounds[0] = 0;
    for (Index j = 0; j < k0 - 1; ++j) bounds[j + 1] = ws.position_of(parent.thresholds[j]);
    bounds[k0] = n;

    std::vector<double> seg_rss(k0);
    std::vector<Index> seg_p(k0);
    double base = 0.0;
    for (Index j = 0; j < k0; ++j) {
        seg_p[j] = parent.regimes[j].coefficients.size();
        seg_rss[j] = ws.rss_fixed(bounds[j], bounds[j + 1], seg_p[j]);
        if (!std::isfinite(seg_rss[j])) return best;
        base += seg_rss[j];
    }

    for (Index j = 0; j < k0; ++j) {
        for (Index s = bounds[j] + m; s + m <= bounds[j + 1]; ++s) {
            if (!ws.split_allowed(s)) continue;
            const double left = ws.rss_fixed(bounds[j], s, seg_p[j]);
            const double right = ws.rss_fixed(s, bounds[j + 1], seg_p[j]);
            if (!std::isfinite(left) || !std::isfinite(right)) continue;
            Candidate cand;
            cand.rss = base - seg_rss[j] + left + right;
            cand.d = ws.delay();
            cand.splits.reserve(k0);
            for (Index i = 1; i < k0; ++i) cand.splits.push_back(bounds[i]);
            cand.splits.insert(std::upper_bound(cand.splits.begin(), cand.splits.end(), s), s);
            // both halves of the split regime inherit its order
            cand.orders.reserve(k0 + 1);
            for (Index i = 0; i < k0; ++i) {
                cand.orders.push_back(seg_p[i]);
                if (i == j) cand.orders.push_back(seg_p[i]);
            }
            cand.thresholds.resize(cand.splits.size());
            for (std::size_t i = 0; i < cand.splits.size(); ++i)
                cand.thresholds[i] = ws.threshold_at(cand.splits[i]);
            cand.valid = true;
            if (better(cand, best)) best = cand;
        }
    }
    return best;
}

}  // namespace

SetarModel fit_setar_grid(const TimeSeries& series, Index k, const SetarOptions& options) {
    const Vector& y = series.values();
    validate_options(y, k, options);
    const Index t0 = std::max(options.p_max, options.d_max);
    if (k == 1) return linear_model(y, t0, options);

    SetarModel parent = fit_setar_grid(series, k - 1, options);

    Candidate best_grid, best_refine;
    for (Index d = 1; d <= options.d_max; ++d) {
        GridWorkspace ws(y, options.p_max, t0, d);
        Candidate c = grid_search_delay(ws, k, options.criterion, options.threads);
        if (better(c, best_grid)) best_grid = c;
        if (d == parent.delay || parent.k == 1) {
            Candidate r = best_refinement(ws, parent, options.criterion);
            // a k=1 parent has no delay of its own; refine it at every d
            if (better(r, best_refine)) best_refine = r;
        }
    }
    if (!best_grid.valid && !best_refine.valid)
        throw EstimationFailure("setar: no admissible threshold configuration for k = " +
                                std::to_string(k));

    std::optional<SetarModel> grid_model, refine_model;
    if (best_grid.valid)
        grid_model = refit_direct(y, t0, best_grid.d, best_grid.thresholds, best_grid.orders);
    if (best_refine.valid)
        refine_model =
            refit_direct(y, t0, best_refine.d, best_refine.thresholds, best_refine.orders);

    if (grid_model && (!refine_model || grid_model->rss <= refine_model->rss))
        return std::move(*grid_model);
    return std::move(*refine_model);
}

SetarModel fit_setar_sequential(const TimeSeries& series, Index k_max,
                                const SetarOptions& options) {
    const Vector& y = series.values();
    validate_options(y, k_max, options);
    const Index t0 = std::max(options.p_max, options.d_max);
    if (k_max == 1) return linear_model(y, t0, options);

    const Index n = y.size() - t0;
    const Index m = min_occupancy(n, options.p_max);
    const Criterion crit = options.criterion;

    // Stage one: linear against the best single-threshold split over delays.
    const Index q = detail::select_ar_order_window(y, options.p_max, t0, crit);
    GridWorkspace probe(y, options.p_max, t0, 1);
    const double rss_lin = probe.rss_fixed(0, n, q);
    const double ic_lin = information_criterion(crit, rss_lin, n, q + 1);

    struct Split {
        double rss = kInf;
        Index s = 0;
        Index p_left = 0, p_right = 0;
        bool valid = false;
    };
    auto best_split = [&](const GridWorkspace& ws, Index a, Index b) {
        Split best;
        for (Index s = a + m; s + m <= b; ++s) {
            if (!ws.split_allowed(s)) continue;
            const SegmentFit left = ws.eval(a, s, crit);
            const SegmentFit right = ws.eval(s, b, crit);
            if (!left.valid || !right.valid) continue;
            const double rss = left.rss + right.rss;
            if (rss < best.rss) best = Split{rss, s, left.p, right.p, true};
        }
        return best;
    };

    Index best_d = 0;
    Split first;
    std::optional<GridWorkspace> ws;
    for (Index d = 1; d <= options.d_max; ++d) {
        GridWorkspace cand_ws(y, options.p_max, t0, d);
        Split s = best_split(cand_ws, 0, n);
        if (s.valid && s.rss < first.rss) {
            first = s;
            best_d = d;
            ws.emplace(std::move(cand_ws));
        }
    }
    if (!first.valid) return linear_model(y, t0, options);
    const double ic_split =
        information_criterion(crit, first.rss, n, (first.p_left + 1) + (first.p_right + 1) + 1);
    if (ic_split >= ic_lin) return linear_model(y, t0, options);

    // Accepted: recurse into each regime's subsample, left to right.
    std::vector<Index> bounds = {0, first.s, n};
    std::size_t i = 0;
    while (static_cast<Index>(bounds.size()) - 1 < k_max && i + 1 < bounds.size()) {
        const Index a = bounds[i], b = bounds[i + 1];
        const SegmentFit whole = ws->eval(a, b, crit);
        const Split sp = best_split(*ws, a, b);
        if (!whole.valid || !sp.valid) {
            ++i;
            continue;
        }
        const Index nj = b - a;
        const double ic_whole = information_criterion(crit, whole.rss, nj, whole.p + 1);
        const double ic_two = information_criterion(
            crit, sp.rss, nj, (sp.p_left + 1) + (sp.p_right + 1) + 1);
        if (ic_two < ic_whole)
            bounds.insert(bounds.begin() + i + 1, sp.s);
        else
            ++i;
    }

    std::vector<double> thresholds;
    std::vector<Index> orders;
    for (std::size_t j = 1; j + 1 < bounds.size(); ++j)
        thresholds.push_back(ws->threshold_at(bounds[j]));
    for (std::size_t j = 0; j + 1 < bounds.size(); ++j)
        orders.push_back(ws->eval(bounds[j], bounds[j + 1], crit).p);
    return refit_direct(y, t0, best_d, thresholds, orders);
}

namespace {

// Minimum RSS of a k-regime fit at a fixed common order over one delay's
// workspace, together with the winning split positions.
struct FixedFit {
    double rss = kInf;
    std::vector<Index> splits;
};

FixedFit fixed_order_search(const GridWorkspace& ws, Index k, Index p, Index m) {
    const Index n = ws.n();
    FixedFit best;
    if (k == 1) {
        best.rss = ws.rss_fixed(0, n, p);
        return best;
    }
    std::vector<Index> splits(k - 1);
    auto recurse = [&](auto&& self, Index level, Index start, double acc) -> void {
        const Index segments_after = k - 1 - level;
        for (Index s = start + m; s + segments_after * m <= n; ++s) {
            if (!ws.split_allowed(s)) continue;
            const double seg = ws.rss_fixed(start, s, p);
            if (!std::isfinite(seg)) continue;
            splits[level] = s;
            if (level + 1 < k - 1) {
                self(self, level + 1, s, acc + seg);
            } else {
                const double tail = ws.rss_fixed(s, n, p);
                if (!std::isfinite(tail)) continue;
                const double total = acc + seg + tail;
                if (total < best.rss) {
                    best.rss = total;
                    best.splits = splits;
                }
            }
        }
    };
    recurse(recurse, 0, 0, 0.0);
    return best;
}

}  // namespace

ThresholdTestResult hansen_test(const TimeSeries& series, Index null_k, Index alt_k,
                                Index bootstrap_reps, std::uint64_t seed,
                                const SetarOptions& options) {
    if (null_k < 1 || alt_k != null_k + 1)
        throw InvalidArgument("hansen_test: requires alt_k == null_k + 1");
    if (bootstrap_reps < 100)
        throw InvalidArgument("hansen_test: bootstrap_reps must be >= 100");
    const Vector& y = series.values();
    validate_options(y, alt_k, options);

    const Index t0 = std::max(options.p_max, options.d_max);
    const Index n = y.size() - t0;
    const Index p = detail::select_ar_order_window(y, options.p_max, t0, options.criterion);
    const Index m = std::max<Index>(p + 2, static_cast<Index>(std::ceil(kMinRegimeFraction * n)));
    if (alt_k * m > n)
        throw EstimationFailure("hansen_test: sample too small for the alternative regime count");

    std::vector<GridWorkspace> workspaces;
    workspaces.reserve(options.d_max);
    for (Index d = 1; d <= options.d_max; ++d) workspaces.emplace_back(y, p, t0, d);

    auto sup_f = [&]() -> double {
        double rss0 = kInf, rss1 = kInf;
        for (const GridWorkspace& ws : workspaces) {
            rss0 = std::min(rss0, fixed_order_search(ws, null_k, p, m).rss);
            rss1 = std::min(rss1, fixed_order_search(ws, alt_k, p, m).rss);
        }
        if (!std::isfinite(rss0) || !std::isfinite(rss1) || rss1 <= 0.0)
            throw EstimationFailure("hansen_test: degenerate fit while computing the statistic");
        return static_cast<double>(n) * (rss0 - rss1) / rss1;
    };
    const double observed = sup_f();

    // Null model for the bootstrap data-generating step: fitted values and
    // residuals of the best null fit at the fixed order.
    Index null_d = 1;
    FixedFit null_fit;
    for (const GridWorkspace& ws : workspaces) {
        FixedFit f = fixed_order_search(ws, null_k, p, m);
        if (f.rss < null_fit.rss) {
            null_fit = std::move(f);
            null_d = ws.delay();
        }
    }
    if (!std::isfinite(null_fit.rss))
        throw EstimationFailure("hansen_test: null model could not be fit");
    std::vector<double> null_thresholds;
    for (Index s : null_fit.splits)
        null_thresholds.push_back(workspaces[null_d - 1].threshold_at(s));
    SetarModel null_model =
        refit_direct(y, t0, null_d, null_thresholds, std::vector<Index>(null_k, p));
    Vector null_resid = null_model.residuals * (null_model.sigma > 0 ? null_model.sigma : 1.0);
    Vector fitted(n);
    for (Index i = 0; i < n; ++i) fitted[i] = y[t0 + i] - null_resid[i];

    Index exceed = 0;
    Vector boot(n);
    for (Index rep = 0; rep < bootstrap_reps; ++rep) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(rep)));
        std::uniform_int_distribution<Index> pick(0, n - 1);
        for (Index i = 0; i < n; ++i) boot[i] = fitted[i] + null_resid[pick(rng)];
        for (GridWorkspace& ws : workspaces) ws.set_response(boot);
        const double f_star = sup_f();
        if (f_star >= observed) ++exceed;
    }
    for (GridWorkspace& ws : workspaces) ws.set_response_from(y);

    ThresholdTestResult result;
    result.statistic = observed;
    result.p_value = static_cast<double>(1 + exceed) / static_cast<double>(1 + bootstrap_reps);
    result.bootstrap_reps = bootstrap_reps;
    result.null_regimes = null_k;
    result.alt_regimes = alt_k;
    return result;
}

}  // namespace tsclust
