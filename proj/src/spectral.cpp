#include "tsclust/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "tsclust/error.hpp"
#include "tsclust/rng.hpp"

namespace tsclust {

Matrix pairwise_distances(const Matrix& columns) {
    const Index n = columns.cols();
    Matrix d = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            const double dist = (columns.col(i) - columns.col(j)).norm();
            d(i, j) = dist;
            d(j, i) = dist;
        }
    return d;
}

namespace {

double median_nonzero(const Matrix& distances) {
    std::vector<double> vals;
    const Index n = distances.rows();
    vals.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (distances(i, j) > 0.0) vals.push_back(distances(i, j));
    if (vals.empty())
        throw DegenerateInput("affinity: all pairwise distances are zero, cannot choose sigma");
    std::sort(vals.begin(), vals.end());
    const std::size_t m = vals.size();
    return m % 2 == 1 ? vals[m / 2] : 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
}

}  // namespace

AffinityMatrix affinity(const Matrix& columns, double sigma) {
    const Index n = columns.cols();
    if (n < 2) throw InvalidArgument("affinity: need at least two points");
    Matrix dist = pairwise_distances(columns);
    if (sigma <= 0.0) sigma = median_nonzero(dist);
    AffinityMatrix a;
    a.sigma = sigma;
    a.entries = (-dist.array().square() / (2.0 * sigma * sigma)).exp();
    a.entries.diagonal().setZero();
    return a;
}

AffinityMatrix affinity(const FeatureMatrix& features, double sigma) {
    return affinity(features.columns, sigma);
}

Matrix spectral_embed(const AffinityMatrix& A, Index c) {
    const Index n = A.entries.rows();
    if (c < 1 || c > n) throw InvalidArgument("spectral_embed: cluster count out of range");
    Vector degree = A.entries.rowwise().sum();
    for (Index i = 0; i < n; ++i)
        if (degree[i] <= 0.0)
            throw DegenerateInput("spectral_embed: point " + std::to_string(i) +
                                  " is isolated (zero affinity to all others)");
    Vector dinv = degree.array().rsqrt();
    Matrix laplacian = dinv.asDiagonal() * A.entries * dinv.asDiagonal();
    // guard symmetry against rounding
    laplacian = 0.5 * (laplacian + laplacian.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Matrix> solver(laplacian);
    if (solver.info() != Eigen::Success)
        throw EstimationFailure("spectral_embed: eigendecomposition failed");

    // eigenvalues ascend; take the trailing c columns, largest first
    Matrix u(n, c);
    for (Index j = 0; j < c; ++j) u.col(j) = solver.eigenvectors().col(n - 1 - j);

    // deterministic sign: the largest-magnitude entry of each column positive
    for (Index j = 0; j < c; ++j) {
        Index arg = 0;
        double best = -1.0;
        for (Index i = 0; i < n; ++i) {
            const double mag = std::abs(u(i, j));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        if (u(arg, j) < 0.0) u.col(j) = -u.col(j);
    }

    for (Index i = 0; i < n; ++i) {
        const double norm = u.row(i).norm();
        if (norm > 0.0) u.row(i) /= norm;
    }
    return u;
}

namespace {

double kmeans_pass(const Matrix& points, Index c, Rng& rng, IntVector& assignments) {
    const Index n = points.rows();
    Matrix centers(c, points.cols());

    // k-means++ seeding
    std::uniform_int_distribution<Index> uniform(0, n - 1);
    centers.row(0) = points.row(uniform(rng));
    Vector d2 = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (Index j = 1; j < c; ++j) {
        const double total = d2.sum();
        Index pick = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double target = u(rng);
            for (Index i = 0; i < n; ++i) {
                target -= d2[i];
                if (target <= 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = uniform(rng);
        }
        centers.row(j) = points.row(pick);
        d2 = d2.cwiseMin((points.rowwise() - centers.row(j)).rowwise().squaredNorm());
    }

    assignments = IntVector::Constant(n, -1);
    IntVector counts(c);
    for (int iter = 0; iter < 300; ++iter) {
        bool changed = false;
        counts.setZero();
        for (Index i = 0; i < n; ++i) {
            Index best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (Index j = 0; j < c; ++j) {
                const double d = (points.row(i) - centers.row(j)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = j;
                }
            }
            if (assignments[i] != static_cast<int>(best)) {
                assignments[i] = static_cast<int>(best);
                changed = true;
            }
            ++counts[best];
        }
        // an emptied cluster takes the point farthest from its center
        for (Index j = 0; j < c; ++j) {
            if (counts[j] > 0) continue;
            Index far = 0;
            double far_d = -1.0;
            for (Index i = 0; i < n; ++i) {
                if (counts[assignments[i]] <= 1) continue;
                const double d =
                    (points.row(i) - centers.row(assignments[i])).squaredNorm();
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            --counts[assignments[far]];
            assignments[far] = static_cast<int>(j);
            ++counts[j];
            changed = true;
        }
        if (!changed && iter > 0) break;
        for (Index j = 0; j < c; ++j) centers.row(j).setZero();
        for (Index i = 0; i < n; ++i) centers.row(assignments[i]) += points.row(i);
        for (Index j = 0; j < c; ++j)
            if (counts[j] > 0) centers.row(j) /= static_cast<double>(counts[j]);
    }

    double score = 0.0;
    for (Index i = 0; i < n; ++i)
        score += (points.row(i) - centers.row(assignments[i])).squaredNorm();
    return score;
}

}  // namespace

IntVector kmeans(const Matrix& points, Index c, Index restarts, std::uint64_t seed) {
    const Index n = points.rows();
    if (c < 1 || c > n) throw InvalidArgument("kmeans: need n >= c >= 1");
    if (restarts < 1) throw InvalidArgument("kmeans: restarts must be positive");
    IntVector best_assign;
    double best_score = std::numeric_limits<double>::infinity();
    IntVector assign;
    for (Index r = 0; r < restarts; ++r) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        const double score = kmeans_pass(points, c, rng, assign);
        if (score < best_score) {
            best_score = score;
            best_assign = assign;
        }
    }
    return best_assign;
}

SilhouetteValues silhouette(const IntVector& assignments, const Matrix& distances) {
    const Index n = assignments.size();
    if (distances.rows() != n || distances.cols() != n)
        throw InvalidArgument("silhouette: distance matrix shape mismatch");
    const int c = assignments.size() > 0 ? assignments.maxCoeff() + 1 : 0;
    if (c < 2) throw InvalidArgument("silhouette: need at least two clusters");
    std::vector<Index> sizes(c, 0);
    for (Index i = 0; i < n; ++i) {
        if (assignments[i] < 0) throw InvalidArgument("silhouette: negative cluster id");
        ++sizes[assignments[i]];
    }
    for (int j = 0; j < c; ++j)
        if (sizes[j] == 0) throw InvalidArgument("silhouette: empty cluster " + std::to_string(j));

    SilhouetteValues out;
    out.s.resize(n);
    Vector sums(c);
    for (Index i = 0; i < n; ++i) {
        sums.setZero();
        for (Index j = 0; j < n; ++j) sums[assignments[j]] += distances(i, j);
        const int own = assignments[i];
        if (sizes[own] <= 1) {
            out.s[i] = 0.0;  // singleton
            continue;
        }
        const double a = sums[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int j = 0; j < c; ++j)
            if (j != own) b = std::min(b, sums[j] / static_cast<double>(sizes[j]));
        const double denom = std::max(a, b);
        out.s[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    }
    out.average = out.s.mean();
    return out;
}

ClusteringResult select_cluster_count(const FeatureMatrix& features, CRange c_range,
                                      const PipelineConfig& config) {
    const Index n = features.count();
    if (c_range.lo < 2 || c_range.hi > n - 1 || c_range.lo > c_range.hi)
        throw InvalidArgument("select_cluster_count: need 2 <= c_min <= c_max <= n-1");

    const AffinityMatrix A = affinity(features, config.sigma);
    const Matrix distances = pairwise_distances(features.columns);

    ClusteringResult best;
    best.sigma = A.sigma;
    for (Index c = c_range.lo; c <= c_range.hi; ++c) {
        Matrix u = spectral_embed(A, c);
        IntVector assign =
            kmeans(u, c, config.restarts, derive_seed(config.seed, static_cast<std::uint64_t>(c)));
        SilhouetteValues sil = silhouette(assign, distances);
        best.silhouette_by_c[c] = sil.average;
        if (best.c == 0 || sil.average > best.average_silhouette) {
            best.assignments = std::move(assign);
            best.c = c;
            best.silhouettes = std::move(sil.s);
            best.average_silhouette = sil.average;
            best.embedding = std::move(u);
        }
    }
    return best;
}

}  // namespace tsclust
