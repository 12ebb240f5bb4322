#include "lpplab/stationary.hpp"

#include <cmath>
#include <stdexcept>

namespace lpplab {

Direction characteristic_direction(Density rho) {
    const double a = (1.0 - rho.rho) * (1.0 - rho.rho);
    const double b = rho.rho * rho.rho;
    return {a / (a + b), b / (a + b)};
}

Density density_for_direction(Direction xi) {
    if (!(xi.d1 > 0.0 && xi.d2 > 0.0))
        throw std::invalid_argument("density_for_direction: direction must be strictly interior");
    const double s1 = std::sqrt(xi.d1);
    const double s2 = std::sqrt(xi.d2);
    return Density(s2 / (s1 + s2));
}

BoundaryWeights sample_stationary_boundary(RngStream rng, Density rho, Coord corner,
                                           Orientation orient, int len_e1, int len_e2) {
    if (len_e1 < 0 || len_e2 < 0)
        throw std::invalid_argument("sample_stationary_boundary: lengths must be >= 0");
    BoundaryWeights b;
    b.corner = corner;
    b.orientation = orient;
    b.along_e1.resize(len_e1);
    b.along_e2.resize(len_e2);
    for (double& v : b.along_e1) v = rng.next_exponential(1.0 - rho.rho);
    for (double& v : b.along_e2) v = rng.next_exponential(rho.rho);
    return b;
}

PassageField stationary_passage(const WeightField& bulk, const BoundaryWeights& boundary,
                                bool keep_values) {
    const Rect r = bulk.rect();
    Coord expected_corner =
        boundary.orientation == Orientation::Forward ? r.lo - Coord{1, 1} : r.hi + Coord{1, 1};
    if (boundary.corner != expected_corner)
        throw std::invalid_argument("stationary_passage: boundary corner does not match bulk rect");
    if (static_cast<int>(boundary.along_e1.size()) != r.width() ||
        static_cast<int>(boundary.along_e2.size()) != r.height())
        throw std::invalid_argument("stationary_passage: boundary lengths do not match bulk rect");

    Coord bulk_origin = boundary.orientation == Orientation::Forward ? r.lo : r.hi;
    return PassageField::with_boundary(boundary, field_rows(bulk, bulk_origin, boundary.orientation),
                                       keep_values);
}

PassageField stationary_passage_streamed(const BoundaryWeights& boundary, const RowSampler& rows,
                                         bool keep_values) {
    return PassageField::with_boundary(boundary, rows, keep_values);
}

ExitPoint exit_point(const PassageField& field, Coord target) {
    return field.exit_point(target);
}

} // namespace lpplab
