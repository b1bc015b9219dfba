// Walkthrough of the library on the ellipsoid with frequencies (1, 2):
// build the field, canonicalize it, classify the unit-speed locus, look at
// the extrinsic geometry of the resulting compact surface, and close the
// loop by re-fitting the ambient field from samples of its restriction.

#include <cstdio>

#include "kvf/kvf.hpp"

int main() {
    // X(p) = R p with two rotation blocks of frequencies 1 and 2
    kvf::Matrix r(4, 4);
    r(0, 1) = -1.0;
    r(1, 0) = 1.0;
    r(2, 3) = -2.0;
    r(3, 2) = 2.0;
    const kvf::EuclideanKillingField field(r, kvf::Vec(4, 0.0));

    const kvf::CanonicalFrame frame = kvf::canonicalize(field);
    std::printf("canonical frame: %zu planes, kernel dimension %zu\n",
                frame.plane_count(), frame.kernel_dim());
    for (const kvf::InvariantPlane& plane : frame.planes)
        std::printf("  frequency %.3f\n", plane.frequency);

    // the set of points where ||X|| = 1 is a compact surface in R^4
    const kvf::ConstantLengthLocus locus = kvf::classify(frame, 1.0);
    std::printf("locus: %s, intrinsic dimension %zu, compact: %s\n",
                kvf::to_string(locus.variant), locus.intrinsic_dim,
                locus.compact ? "yes" : "no");

    const std::vector<kvf::Vec> points = kvf::sample(locus, 6, 42);
    for (const kvf::Vec& p : points) {
        const kvf::AxiXi form = kvf::axixi(locus, p);
        std::printf("  sample speed^2 = %.12f   g(A xi, xi) raw = %.6f\n",
                    kvf::speed_squared(frame, p), form.paper);
    }

    // distinct frequencies: the raw curvature form varies over the locus, so
    // the surface is not a round sphere
    const kvf::RoundnessReport roundness = kvf::roundness_test(locus, 2000, 7);
    std::printf("round sphere: %s (spread of the curvature quantity: %.4f)\n",
                roundness.is_round ? "yes" : "no", roundness.axixi_spread);

    const kvf::ShapeReport shape = kvf::shape_operator(locus, points.front());
    std::printf("shape operator rank %zu of %zu, curvatures:", shape.rank,
                shape.principal_curvatures.size());
    for (double lambda : shape.principal_curvatures) std::printf(" %.6f", lambda);
    std::printf("\n");

    // recover the ambient field from its values on the surface
    kvf::FieldSampleSet samples;
    samples.points = kvf::sample(locus, 40, 99);
    for (const kvf::Vec& p : samples.points)
        samples.vectors.push_back(kvf::evaluate(field, p));
    const kvf::ExtendabilityReport extension = kvf::extendability_report(samples, 1.0);
    std::printf("refit from 40 samples: residual %.3e, locus-consistent: %s\n",
                extension.fit.residual_rms, extension.locus_consistency ? "yes" : "no");
    return 0;
}
