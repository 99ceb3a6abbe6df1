#pragma once

#include "curvlab/bundle.hpp"
#include "curvlab/checks.hpp"
#include "curvlab/rng.hpp"

namespace curvlab {

/// Uniform point on the product of spheres (per-factor normalized Gaussians).
Vec sample_point(const SphereProduct& mfd, Pcg32& rng);

AlgebraVector sample_unit_algebra(Pcg32& rng);

/// Unit (in m) random tangent / horizontal / vertical vectors at p.
Vec sample_unit_tangent(const SphereProduct& mfd, const MetricField& m, const Vec& p, Pcg32& rng);
Vec sample_unit_horizontal(const Bundle& b, const MetricField& m, const Vec& p, Pcg32& rng);
Vec sample_unit_vertical(const Bundle& b, const MetricField& m, const Vec& p, Pcg32& rng);

/// m-orthonormal horizontal pair.
std::pair<Vec, Vec> sample_horizontal_pair(const Bundle& b, const MetricField& m, const Vec& p,
                                           Pcg32& rng);

VertizontalFrame sample_frame(const Bundle& b, const MetricField& m, Pcg32& rng);

}  // namespace curvlab
