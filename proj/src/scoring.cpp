#include "damex/scoring.hpp"

#include "damex/cones.hpp"
#include "damex/parallel.hpp"

namespace damex {

double score_point(const DamexModel& model, std::span<const double> point) {
    const auto v = model.marginals().transform_point(point);
    // Standardized coordinates are >= 1, so the norm never vanishes.
    const double norm = sup_norm(v);
    const auto cone = assign_cone(v, model.epsilon());
    return model.cone_mass(cone) / norm;
}

std::vector<double> score_batch(const DamexModel& model, const Dataset& points) {
    std::vector<double> scores(points.rows());
    parallel_for(0, points.rows(),
                 [&](std::size_t i) { scores[i] = score_point(model, points.row(i)); });
    return scores;
}

bool is_extreme(const DamexModel& model, std::span<const double> point) {
    const auto v = model.marginals().transform_point(point);
    return sup_norm(v) >= model.radial_threshold();
}

PointReport describe_point(const DamexModel& model, std::span<const double> point) {
    const auto v = model.marginals().transform_point(point);
    const double norm = sup_norm(v);
    auto cone = assign_cone(v, model.epsilon());
    const double mass = model.cone_mass(cone);
    return PointReport{
        .score = mass / norm,
        .sup_norm = norm,
        .extreme = norm >= model.radial_threshold(),
        .charged = mass > 0.0,
        .cone = std::move(cone),
    };
}

}  // namespace damex
