#pragma once

#include <cstdint>
#include <map>

#include "tsclust/config.hpp"
#include "tsclust/features.hpp"
#include "tsclust/types.hpp"

namespace tsclust {

// Gaussian-kernel similarity A_ij = exp(-||f_i - f_j||^2 / (2 sigma^2)) with
// zero diagonal.
struct AffinityMatrix {
    Matrix entries;
    double sigma = 0.0;
};

struct ClusteringResult {
    IntVector assignments;              // cluster id per series
    Index c = 0;
    Vector silhouettes;                 // s(i) per series
    double average_silhouette = 0.0;
    std::map<Index, double> silhouette_by_c;
    Matrix embedding;                   // n x c, rows unit norm
    double sigma = 0.0;                 // resolved affinity bandwidth
};

// Euclidean distances between columns.
Matrix pairwise_distances(const Matrix& columns);

// sigma <= 0 selects the median of the nonzero pairwise distances; throws
// DegenerateInput when every distance is zero.
AffinityMatrix affinity(const Matrix& columns, double sigma = 0.0);
AffinityMatrix affinity(const FeatureMatrix& features, double sigma = 0.0);

// Row-normalized eigenvectors of the c largest eigenvalues of the normalized
// Laplacian D^{-1/2} A D^{-1/2}; eigenvector signs fixed so the
// largest-magnitude entry is positive. Throws DegenerateInput on a zero-degree
// point.
Matrix spectral_embed(const AffinityMatrix& A, Index c);

// Best-of-restarts Lloyd iteration with k-means++ seeding; deterministic
// given the seed. Points are rows.
IntVector kmeans(const Matrix& points, Index c, Index restarts, std::uint64_t seed);

struct SilhouetteValues {
    Vector s;
    double average = 0.0;
};

// Rousseeuw silhouettes from a full distance matrix; singleton clusters score
// zero. Requires at least two clusters.
SilhouetteValues silhouette(const IntVector& assignments, const Matrix& distances);

// Runs affinity -> embed -> kmeans -> silhouette for each candidate count and
// returns the partition with maximum average silhouette (ties to smaller c).
// Silhouette distances are measured in the original feature space.
ClusteringResult select_cluster_count(const FeatureMatrix& features, CRange c_range,
                                      const PipelineConfig& config);

}  // namespace tsclust
