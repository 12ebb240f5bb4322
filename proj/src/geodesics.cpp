#include "lpplab/geodesics.hpp"

#include <cmath>
#include <stdexcept>

#include "lpplab/parallel.hpp"

namespace lpplab {

namespace {

Coord box_corner(Direction xi, double m) {
    return {static_cast<int>(std::floor(xi.d1 * m)), static_cast<int>(std::floor(xi.d2 * m))};
}

Coord step_on(const PassageField& f, Coord c) {
    if (f.orientation() == Orientation::Reversed) return f.step_from_e1(c) ? c + e1 : c + e2;
    return f.step_from_e1(c) ? c - e1 : c - e2;
}

// earliest common point of the bit-walks from q1 and q2 toward the origin
Coord coalesce_walk(const PassageField& f, Coord q1, Coord q2) {
    const Coord target = f.origin();
    const long dir = f.orientation() == Orientation::Reversed ? 1 : -1;
    auto key = [dir](Coord c) { return dir * (static_cast<long>(c.x) + c.y); };
    const long limit = key(target);

    Coord p1 = q1, p2 = q2;
    long guard = 0;
    const long guard_max = 4L * (std::labs(limit - key(q1)) + std::labs(limit - key(q2)) + 4);
    while (p1 != p2) {
        if (++guard > guard_max)
            throw std::logic_error("coalescence_point: walks failed to meet before the target");
        const long k1 = key(p1), k2 = key(p2);
        if (k1 < k2) p1 = step_on(f, p1);
        else if (k2 < k1) p2 = step_on(f, p2);
        else {
            p1 = step_on(f, p1);
            p2 = step_on(f, p2);
        }
    }
    return p1;
}

} // namespace

GeodesicForest::GeodesicForest(std::shared_ptr<const PassageField> field, Rect sources)
    : field_(std::move(field)), sources_(sources) {
    if (!field_) throw std::invalid_argument("GeodesicForest: null field");
    const Rect domain = field_->has_boundary() ? field_->bulk_rect() : field_->rect();
    if (!domain.contains(sources_))
        throw std::invalid_argument("GeodesicForest: sources must lie inside the field");
}

Coord GeodesicForest::next_step(Coord c) const { return step_on(*field_, c); }

Geodesic GeodesicForest::path_from(Coord source) const {
    if (!sources_.contains(source))
        throw std::invalid_argument("path_from: source outside the forest's source rect");
    Geodesic g;
    Coord c = source;
    const Coord target = field_->origin();
    g.points.push_back(c);
    while (c != target) {
        c = next_step(c);
        g.points.push_back(c);
    }
    return g;
}

CoalescencePoint GeodesicForest::coalescence_point(Coord q1, Coord q2) const {
    if (!sources_.contains(q1) || !sources_.contains(q2))
        throw std::invalid_argument("coalescence_point: sources outside the forest");
    return {coalesce_walk(*field_, q1, q2)};
}

GeodesicForest build_forest(std::shared_ptr<const PassageField> field, Rect sources) {
    return GeodesicForest(std::move(field), sources);
}

TailEstimate make_tail_estimate(double threshold, long count, int reps) {
    TailEstimate t;
    t.threshold = threshold;
    t.count = count;
    t.reps = reps;
    t.p_hat = static_cast<double>(count) / reps;
    t.stderr_ = std::sqrt(t.p_hat * (1.0 - t.p_hat) / reps);
    t.ci = stats::wilson_interval(count, reps);
    return t;
}

StabilizationResult stabilization_check(RngStream rng, Direction xi, int N,
                                        std::vector<int> box_sizes, int reps, double anchor_mult,
                                        int jobs) {
    if (N < 2) throw std::invalid_argument("stabilization_check: N too small");
    if (anchor_mult < 1.0) throw std::invalid_argument("stabilization_check: anchor_mult must be >= 1");
    for (int M : box_sizes)
        if (M < 1 || M > N) throw std::invalid_argument("stabilization_check: box sizes must lie in [1, N]");
    if (reps < 1) throw std::invalid_argument("stabilization_check: reps must be >= 1");

    const Coord hi = box_corner(xi, N);
    const Rect box({0, 0}, hi);
    const Coord big_hi = box_corner(xi, anchor_mult * N);
    const Density rho = density_for_direction(xi);

    std::vector<std::vector<char>> disagree(reps, std::vector<char>(box_sizes.size(), 0));

    parallel_replicas(reps, jobs, [&](int rep) {
        RngStream sub = rng.substream(static_cast<std::uint64_t>(rep));
        WeightField bulk = sample_weight_field(sub.substream(0), box);

        PassageField p2p = PassageField::plain(bulk, hi, Orientation::Reversed, false);

        BoundaryWeights bw = sample_stationary_boundary(sub.substream(1), rho, big_hi + Coord{1, 1},
                                                        Orientation::Reversed, big_hi.x + 1, big_hi.y + 1);
        auto outside = std::make_shared<RngStream>(sub.substream(2));
        RowSampler rows = [&bulk, &box, big_hi, outside](int r, std::span<double> out) {
            const int y = big_hi.y - r;
            const bool row_shared = y <= box.hi.y;
            for (std::size_t b = 0; b < out.size(); ++b) {
                const int x = big_hi.x - static_cast<int>(b);
                if (row_shared && x <= box.hi.x)
                    out[b] = bulk.at({x, y});
                else
                    out[b] = outside->next_exponential(1.0);
            }
        };
        PassageField surrogate = stationary_passage_streamed(bw, rows, false);

        for (std::size_t mi = 0; mi < box_sizes.size(); ++mi) {
            const Coord mb = box_corner(xi, box_sizes[mi]);
            bool differ = false;
            for (int y = 0; y <= mb.y && !differ; ++y) {
                for (int x = 0; x <= mb.x; ++x) {
                    if (x == mb.x && y == mb.y) continue;  // both successors leave the box
                    if (p2p.step_from_e1({x, y}) != surrogate.step_from_e1({x, y})) {
                        differ = true;
                        break;
                    }
                }
            }
            disagree[rep][mi] = differ ? 1 : 0;
        }
    });

    StabilizationResult res;
    res.scale = N;
    res.anchor_mult = anchor_mult;
    res.box_sizes = box_sizes;
    std::vector<double> xs, ps;
    for (std::size_t mi = 0; mi < box_sizes.size(); ++mi) {
        long count = 0;
        for (int rep = 0; rep < reps; ++rep) count += disagree[rep][mi];
        res.disagreement.push_back(make_tail_estimate(box_sizes[mi], count, reps));
        xs.push_back(box_sizes[mi]);
        ps.push_back(res.disagreement.back().p_hat);
    }
    res.fit = stats::fit_loglog(xs, ps);
    return res;
}

CoalescenceTailResult coalescence_tail(RngStream rng, int k, std::vector<double> R_grid, int N,
                                       int reps, Direction xi, int jobs) {
    if (k < 1) throw std::invalid_argument("coalescence_tail: k must be >= 1");
    if (reps < 1) throw std::invalid_argument("coalescence_tail: reps must be >= 1");
    const Coord hi = box_corner(xi, N);
    const Coord q2{0, static_cast<int>(std::ceil(std::pow(static_cast<double>(k), 2.0 / 3.0)))};
    if (q2.y > hi.y) throw std::invalid_argument("coalescence_tail: source offset outside the box");

    std::vector<long> dist(reps, 0);
    parallel_replicas(reps, jobs, [&](int rep) {
        RngStream sub = rng.substream(static_cast<std::uint64_t>(rep));
        PassageField f = PassageField::plain_streamed(Rect({0, 0}, hi), hi, Orientation::Reversed,
                                                      streamed_rows(sub), false);
        dist[rep] = l1_norm(coalesce_walk(f, {0, 0}, q2));
    });

    CoalescenceTailResult res;
    res.k = k;
    res.scale = N;
    std::vector<double> xs, ps;
    for (double R : R_grid) {
        long count = 0;
        const double thr = R * k;
        for (long d : dist) count += d > thr ? 1 : 0;
        res.tails.push_back(make_tail_estimate(R, count, reps));
        xs.push_back(R);
        ps.push_back(res.tails.back().p_hat);
    }
    res.fit = stats::fit_loglog(xs, ps);
    std::vector<double> dd(dist.begin(), dist.end());
    res.median_distance = stats::quantile(dd, 0.5);
    return res;
}

MacroCoalescenceResult macro_coalescence(RngStream rng, double a, std::vector<double> alpha_grid,
                                         Direction xi, int N, int reps, int jobs) {
    if (a <= 0.0) throw std::invalid_argument("macro_coalescence: a must be > 0");
    if (reps < 1) throw std::invalid_argument("macro_coalescence: reps must be >= 1");
    const Coord hi = box_corner(xi, N);
    const Coord q2{0, static_cast<int>(std::floor(a * std::pow(static_cast<double>(N), 2.0 / 3.0)))};
    if (q2.y > hi.y) throw std::invalid_argument("macro_coalescence: source offset outside the box");

    std::vector<long> d_target(reps, 0), d_source(reps, 0);
    parallel_replicas(reps, jobs, [&](int rep) {
        RngStream sub = rng.substream(static_cast<std::uint64_t>(rep));
        PassageField f = PassageField::plain_streamed(Rect({0, 0}, hi), hi, Orientation::Reversed,
                                                      streamed_rows(sub), false);
        const Coord pc = coalesce_walk(f, {0, 0}, q2);
        d_target[rep] = l1_norm(hi - pc);
        d_source[rep] = l1_norm(pc - q2);
    });

    MacroCoalescenceResult res;
    res.a = a;
    res.scale = N;
    std::vector<double> xs, pt, ps;
    for (double alpha : alpha_grid) {
        const double thr = alpha * N;
        long ct = 0, cs = 0;
        for (int rep = 0; rep < reps; ++rep) {
            ct += d_target[rep] <= thr ? 1 : 0;
            cs += d_source[rep] <= thr ? 1 : 0;
        }
        res.near_target.push_back(make_tail_estimate(alpha, ct, reps));
        res.near_source.push_back(make_tail_estimate(alpha, cs, reps));
        xs.push_back(alpha);
        pt.push_back(res.near_target.back().p_hat);
        ps.push_back(res.near_source.back().p_hat);
    }
    res.fit_near_target = stats::fit_loglog(xs, pt);
    res.fit_near_source = stats::fit_loglog(xs, ps);
    return res;
}

TransversalResult transversal_fluctuation(RngStream rng, std::vector<int> l_grid, int N, int reps,
                                          std::vector<double> r_grid, Direction xi, int jobs) {
    if (l_grid.empty()) throw std::invalid_argument("transversal_fluctuation: empty l grid");
    int l_max = 0;
    for (int l : l_grid) {
        if (l < 1 || l > N / 4) throw std::invalid_argument("transversal_fluctuation: need 1 <= l <= N/4");
        l_max = std::max(l_max, l);
    }
    if (reps < 1) throw std::invalid_argument("transversal_fluctuation: reps must be >= 1");
    const Coord hi = box_corner(xi, N);

    std::vector<std::vector<double>> dev(l_grid.size(), std::vector<double>(reps, 0.0));
    parallel_replicas(reps, jobs, [&](int rep) {
        RngStream sub = rng.substream(static_cast<std::uint64_t>(rep));
        PassageField f = PassageField::plain_streamed(Rect({0, 0}, hi), hi, Orientation::Reversed,
                                                      streamed_rows(sub), false);
        Coord c{0, 0};
        for (int step = 1; step <= 2 * l_max; ++step) {
            c = step_on(f, c);
            for (std::size_t li = 0; li < l_grid.size(); ++li) {
                const int l = l_grid[li];
                if (step == 2 * l)
                    dev[li][rep] = static_cast<double>(l1_norm(c - Coord{l, l})) /
                                   std::pow(static_cast<double>(l), 2.0 / 3.0);
            }
        }
    });

    TransversalResult res;
    res.scale = N;
    std::size_t largest = 0;
    for (std::size_t li = 0; li < l_grid.size(); ++li) {
        res.quantiles.push_back({l_grid[li], stats::quantile(dev[li], 0.5), stats::quantile(dev[li], 0.75)});
        if (l_grid[li] > l_grid[largest]) largest = li;
    }
    std::vector<double> xs, ps;
    for (double r : r_grid) {
        long count = 0;
        for (double d : dev[largest]) count += d > r ? 1 : 0;
        res.tail.push_back(make_tail_estimate(r, count, reps));
        xs.push_back(r);
        ps.push_back(res.tail.back().p_hat);
    }
    res.tail_fit = stats::fit_loglog(xs, ps);
    return res;
}

ExitTailResult exit_point_tail(RngStream rng, Density rho, int N, std::vector<double> r_grid,
                               int reps, int jobs) {
    if (reps < 1) throw std::invalid_argument("exit_point_tail: reps must be >= 1");
    const Direction xi = characteristic_direction(rho);
    const Coord hi = box_corner(xi, N);

    std::vector<long> zabs(reps, 0);
    parallel_replicas(reps, jobs, [&](int rep) {
        RngStream sub = rng.substream(static_cast<std::uint64_t>(rep));
        BoundaryWeights bw = sample_stationary_boundary(sub.substream(1), rho, hi + Coord{1, 1},
                                                        Orientation::Reversed, hi.x + 1, hi.y + 1);
        PassageField f = stationary_passage_streamed(bw, streamed_rows(sub.substream(0)), false);
        zabs[rep] = std::labs(static_cast<long>(f.exit_point({0, 0}).z));
    });

    ExitTailResult res;
    res.scale = N;
    res.rho = rho.rho;
    const double n23 = std::pow(static_cast<double>(N), 2.0 / 3.0);
    std::vector<double> xs, ps;
    for (double r : r_grid) {
        long count = 0;
        for (long z : zabs) count += static_cast<double>(z) > r * n23 ? 1 : 0;
        res.tails.push_back(make_tail_estimate(r, count, reps));
        xs.push_back(r);
        ps.push_back(res.tails.back().p_hat);
    }
    res.fit = stats::fit_loglog(xs, ps);
    return res;
}

} // namespace lpplab
