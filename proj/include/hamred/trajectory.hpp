#pragma once

#include <map>
#include <string>
#include <vector>

#include "hamred/numeric_core.hpp"

namespace hamred {

struct TimeSpan {
    double t0 = 0.0;
    double t1 = 1.0;
};

/// Taylor coefficients z_0..z_N of the solution through z: z(t) = sum_n z_n t^n.
using TaylorRecurrence = std::function<std::vector<Vec>(const Vec& z, int order)>;

/// Autonomous first-order system z' = h(z).
struct VectorField {
    int dim = 0;
    VecFn eval;
    std::string label;
    /// Optional exact derivative recurrence; when empty, series methods fall back to
    /// nested finite differences.
    TaylorRecurrence taylor;

    Vec operator()(const Vec& z) const { return eval(z); }
};

struct Sample {
    double t = 0.0;
    Vec z;
    std::map<std::string, double> diagnostics;  // ordered by name
};

/// A pivot change of the reduced coordinates during a flow.
struct ChartEvent {
    double t = 0.0;
    std::vector<int> from;
    std::vector<int> to;
};

struct Trajectory {
    std::vector<std::string> labels;
    std::vector<Sample> samples;
    std::vector<ChartEvent> events;

    const Sample& front() const { return samples.front(); }
    const Sample& back() const { return samples.back(); }
    std::vector<std::string> diagnostic_names() const;
    /// Largest value of a diagnostic over all samples (0 if absent).
    double max_diagnostic(const std::string& name) const;
};

/// Dormand-Prince 5(4) with PI step control; relative and absolute local error
/// target tol.quad_tol. Samples are recorded every sample_dt (the end point is always
/// included); sample_dt <= 0 records every accepted step.
/// Throws StiffnessError when the step size underflows.
Trajectory rk_integrate(const VectorField& f, const Vec& z0, TimeSpan span, const Tolerances& tol,
                        double sample_dt = 0.0);

/// Integrates from t0 to t1 and returns only the end state.
Vec rk_advance(const VectorField& f, const Vec& z0, TimeSpan span, const Tolerances& tol);

/// Uniform sample grid t0, t0+dt, ..., t1 (t1 always last).
std::vector<double> sample_grid(TimeSpan span, double dt);

}  // namespace hamred
