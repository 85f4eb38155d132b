#pragma once

#include <stdexcept>
#include <string>

namespace tsclust {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precondition violation on an argument value.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Zero-variance (constant) input where serial statistics are undefined.
class DegenerateSeries : public Error {
public:
    using Error::Error;
};

// Model fitting could not produce an admissible estimate.
class EstimationFailure : public Error {
public:
    using Error::Error;
};

// Clustering-side degeneracy (all-zero distances, isolated graph point).
class DegenerateInput : public Error {
public:
    using Error::Error;
};

// Simulated recursion overflowed.
class GenerationFailure : public Error {
public:
    using Error::Error;
};

// CSV / panel loading problems.
class IngestionError : public Error {
public:
    using Error::Error;
};

// Configuration file or flag problems.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Per-series pipeline failure, tagged with the series label.
class FeatureExtractionError : public Error {
public:
    FeatureExtractionError(std::string label, const std::string& what)
        : Error("feature extraction failed for '" + label + "': " + what),
          label_(std::move(label)) {}

    const std::string& label() const { return label_; }

private:
    std::string label_;
};

}  // namespace tsclust
