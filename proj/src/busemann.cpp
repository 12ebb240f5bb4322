#include "lpplab/busemann.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lpplab/parallel.hpp"
#include "lpplab/queueing.hpp"

namespace lpplab {

namespace {

Coord box_corner(Direction xi, int m) {
    return {static_cast<int>(std::floor(xi.d1 * m)), static_cast<int>(std::floor(xi.d2 * m))};
}

} // namespace

double default_drift(Direction xi, int M, int N) {
    return std::pow(xi.d1 * std::max(M, 1), -0.125) * std::pow(static_cast<double>(N), 1.0 / 12.0);
}

CoupledPair build_coupled_pair(const WeightField& bulk, RngStream boundary_rng, Direction xi,
                               int N, double r, bool keep_values) {
    if (!(xi.d1 > 0.0 && xi.d2 > 0.0))
        throw std::invalid_argument("build_coupled_pair: direction must be strictly interior");
    if (N < 1) throw std::invalid_argument("build_coupled_pair: N must be >= 1");
    if (r < 0.0) throw std::invalid_argument("build_coupled_pair: drift must be >= 0");

    const double rho = density_for_direction(xi).rho;
    const double shift = r * std::pow(static_cast<double>(N), -1.0 / 3.0);
    if (rho - shift <= 0.0 || rho + shift >= 1.0)
        throw std::invalid_argument("build_coupled_pair: drifted densities leave (0,1); N too small for this r");

    const Coord hi = box_corner(xi, N);
    const Rect box({0, 0}, hi);
    if (bulk.rect() != box)
        throw std::invalid_argument("build_coupled_pair: bulk rect must be [0, N xi]");
    const Coord corner = hi + Coord{1, 1};
    const int len_e1 = hi.x + 1;
    const int len_e2 = hi.y + 1;

    CoupledPair pair{Density(rho - shift), Density(rho + shift), r, N, xi, box,
                     BoundaryWeights{}, BoundaryWeights{}, PassageField::plain(bulk, hi, Orientation::Reversed, false),
                     PassageField::plain(bulk, hi, Orientation::Reversed, false)};

    pair.boundary_lo.corner = corner;
    pair.boundary_lo.orientation = Orientation::Reversed;
    pair.boundary_hi.corner = corner;
    pair.boundary_hi.orientation = Orientation::Reversed;

    RngStream rng_e1 = boundary_rng.substream(1);
    RngStream rng_e2 = boundary_rng.substream(2);
    if (r == 0.0) {
        // degenerate coupling: one boundary serves both densities
        BoundaryWeights b =
            sample_stationary_boundary(rng_e1, Density(rho), corner, Orientation::Reversed, len_e1, len_e2);
        pair.boundary_lo.along_e1 = b.along_e1;
        pair.boundary_lo.along_e2 = b.along_e2;
        pair.boundary_hi.along_e1 = std::move(b.along_e1);
        pair.boundary_hi.along_e2 = std::move(b.along_e2);
    } else {
        queue::NuSample nu1 =
            queue::sample_nu(rng_e1, 1.0 - pair.rho_hi.rho, 1.0 - pair.rho_lo.rho, len_e1);
        pair.boundary_hi.along_e1 = std::move(nu1.departure);
        pair.boundary_lo.along_e1 = std::move(nu1.service);
        queue::NuSample nu2 = queue::sample_nu(rng_e2, pair.rho_lo.rho, pair.rho_hi.rho, len_e2);
        pair.boundary_lo.along_e2 = std::move(nu2.departure);
        pair.boundary_hi.along_e2 = std::move(nu2.service);
    }

    pair.field_lo = stationary_passage(bulk, pair.boundary_lo, keep_values);
    pair.field_hi = stationary_passage(bulk, pair.boundary_hi, keep_values);
    return pair;
}

CoupledPair build_coupled_pair(RngStream rng, Direction xi, int N, double r, bool keep_values) {
    const Rect box({0, 0}, box_corner(xi, N));
    WeightField bulk = sample_weight_field(rng.substream(0), box);
    return build_coupled_pair(bulk, rng, xi, N, r, keep_values);
}

bool exit_split_event(const CoupledPair& pair, int M) {
    if (M > pair.scale) throw std::invalid_argument("exit_split_event: M must be <= N");
    const Coord mb = box_corner(pair.direction, M);
    const Coord upper_left{0, mb.y};
    const Coord lower_right{mb.x, 0};
    return pair.field_lo.exit_point(upper_left).z < 0 &&
           pair.field_hi.exit_point(lower_right).z > 0;
}

bool boundary_agreement_event(const CoupledPair& pair, int M,
                              std::optional<long>* first_disagreement) {
    if (M > pair.scale) throw std::invalid_argument("boundary_agreement_event: M must be <= N");
    if (first_disagreement) first_disagreement->reset();
    if (M == 0) return true;

    const Coord mb = box_corner(pair.direction, M);
    std::vector<double> i_lo, i_hi, j_lo, j_hi;
    if (mb.x + 1 < pair.boundary_lo.corner.x) {
        const Coord corner_m = mb + Coord{1, 1};
        BoundaryWeights lo = pair.field_lo.induced_boundary(corner_m);
        BoundaryWeights hi = pair.field_hi.induced_boundary(corner_m);
        i_lo = std::move(lo.along_e1);
        i_hi = std::move(hi.along_e1);
        j_lo = std::move(lo.along_e2);
        j_hi = std::move(hi.along_e2);
    } else {
        // M-box fills the whole field: compare the raw boundaries
        i_lo = pair.boundary_lo.along_e1;
        i_hi = pair.boundary_hi.along_e1;
        j_lo = pair.boundary_lo.along_e2;
        j_hi = pair.boundary_hi.along_e2;
    }

    // True disagreements are order-one while the DP's reassociation noise
    // stays below ~1e-12, so this tolerance tracks the exact-arithmetic
    // event; bitwise comparison would misclassify a few percent of the
    // agreeing replicas.
    constexpr double tol = 1e-9;
    long first = -1;
    for (std::size_t k = 0; k < i_lo.size(); ++k) {
        if (std::fabs(i_lo[k] - i_hi[k]) > tol) {
            first = static_cast<long>(k) + 1;
            break;
        }
    }
    for (std::size_t k = 0; k < j_lo.size(); ++k) {
        if (std::fabs(j_lo[k] - j_hi[k]) > tol) {
            long idx = static_cast<long>(k) + 1;
            if (first < 0 || idx < first) first = idx;
            break;
        }
    }
    if (first >= 0) {
        if (first_disagreement) *first_disagreement = first;
        return false;
    }
    return true;
}

AgreementReport agreement_report(const CoupledPair& pair, int M) {
    AgreementReport rep;
    rep.exit_split = exit_split_event(pair, M);
    std::optional<long> first;
    rep.boundary_agree = boundary_agreement_event(pair, M, &first);
    rep.first_disagreement = first;
    rep.stabilized = rep.exit_split && rep.boundary_agree;
    return rep;
}

LocalAgreementResult local_agreement(RngStream rng, int N, double c, int reps, Direction xi,
                                     double drift_override, double c_max, int jobs) {
    if (!(c > 0.0 && c <= c_max))
        throw std::invalid_argument("local_agreement: c must lie in (0, c_max]");
    if (N < 200) throw std::invalid_argument("local_agreement: N must be >= 200");
    if (reps < 1) throw std::invalid_argument("local_agreement: reps must be >= 1");

    const int M = std::max(1, static_cast<int>(std::floor(c * std::pow(static_cast<double>(N), 2.0 / 3.0))));
    const double r = drift_override > 0.0 ? drift_override : default_drift(xi, M, N);

    LocalAgreementResult res;
    res.scale = N;
    res.box_size = M;
    res.drift = r;
    res.reps = reps;
    std::vector<char> failed(reps, 0);
    parallel_replicas(reps, jobs, [&](int rep) {
        CoupledPair pair = build_coupled_pair(rng.substream(static_cast<std::uint64_t>(rep)), xi, N, r);
        failed[rep] = agreement_report(pair, M).stabilized ? 0 : 1;
    });
    for (char f : failed) res.failures += f;
    res.failure_rate = static_cast<double>(res.failures) / reps;
    res.stderr_ = std::sqrt(res.failure_rate * (1.0 - res.failure_rate) / reps);
    res.ci = stats::wilson_interval(res.failures, reps);
    return res;
}

} // namespace lpplab
