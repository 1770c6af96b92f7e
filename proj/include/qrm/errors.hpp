#pragma once

#include <stdexcept>
#include <string>

namespace qrm {

// Grid construction: extent is not an integer multiple of the step.
struct NonCommensurateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Explicit scheme stability limit violated (lambda_x + lambda_y > 1).
struct CflViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Initial data nonzero outside the support square.
struct SupportViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two objects built on incompatible grids.
struct GridMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A requested point is not a grid node.
struct NodeMisalignedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Stencil index outside the interior node range.
struct IndexOutOfInteriorError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Line search direction has non-positive curvature (quadratic form bug).
struct DegenerateCurvatureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Search direction is not a descent direction (gradient bug).
struct NonDescentDirectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// NaN/Inf appeared during iteration.
struct NonFiniteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad run configuration (unknown key, bad value, unknown preset).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad or missing data file.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qrm
