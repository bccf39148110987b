#include "gfnbp/paths.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "gfnbp/errors.hpp"
#include "gfnbp/specfun.hpp"

namespace gfnbp::sim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInfD = std::numeric_limits<double>::infinity();

std::vector<double> gamma_values(double rho, double mu,
                                 const std::vector<double>& grid,
                                 rng::Philox& g) {
    std::vector<double> v(grid.size(), 0.0);
    double cur = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        cur += g.gamma(rho * (grid[i] - grid[i - 1])) / mu;
        v[i] = cur;
    }
    return v;
}

std::vector<double> stable_values(double alpha,
                                  const std::vector<double>& grid,
                                  rng::Philox& g) {
    std::vector<double> v(grid.size(), 0.0);
    double cur = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double dt = grid[i] - grid[i - 1];
        cur += std::pow(dt, 1.0 / alpha) * detail::stable_unit_draw(g, alpha);
        v[i] = cur;
    }
    return v;
}

std::vector<double> ml_levy_values(const GfnbpParams& p,
                                   const std::vector<double>& grid,
                                   rng::Philox& g) {
    std::vector<double> v(grid.size(), 0.0);
    double cur = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double q = g.gamma(p.rho * (grid[i] - grid[i - 1])) / p.mu;
        // alpha = 1 keeps the draw stream identical to the gamma path
        double inc = (p.alpha == 1.0)
                         ? q
                         : std::pow(q, 1.0 / p.alpha) *
                               detail::stable_unit_draw(g, p.alpha);
        cur += inc;
        v[i] = cur;
    }
    return v;
}

std::vector<double> fpp_arrivals(double beta, double lambda, double horizon,
                                 rng::Philox& g) {
    std::vector<double> a;
    double t = 0.0;
    const double inv_b = 1.0 / beta;
    for (;;) {
        double dt;
        if (beta == 1.0) {
            dt = g.exponential() / lambda;
        } else {
            double e = g.exponential();
            double u = kPi * g.u01();
            double v = g.exponential();
            double ln_dt =
                inv_b * (std::log(e) - std::log(lambda)) +
                (inv_b - 1.0) *
                    (specfun::detail::log_kanter_a(u, beta) - std::log(v));
            dt = std::exp(ln_dt);
        }
        double nt = t + dt;
        if (nt <= t) nt = std::nextafter(t, kInfD);
        if (nt > horizon) break;
        a.push_back(nt);
        t = nt;
    }
    return a;
}

// walks unit-rate-style arrivals against nondecreasing clock levels without
// materializing them; a heavy-tailed clock can make the arrival count huge
std::vector<double> poisson_counts_at(double lambda,
                                      const std::vector<double>& levels,
                                      rng::Philox& g) {
    std::vector<double> out(levels.size());
    double t = 0.0;
    double count = 0.0;
    double next = g.exponential() / lambda;
    if (next <= 0.0) next = std::nextafter(0.0, kInfD);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        while (next <= levels[i]) {
            count += 1.0;
            t = next;
            double nt = t + g.exponential() / lambda;
            if (nt <= t) nt = std::nextafter(t, kInfD);
            next = nt;
        }
        out[i] = count;
    }
    return out;
}

std::vector<double> counts_at(const std::vector<double>& arrivals,
                              const std::vector<double>& queries) {
    std::vector<double> out(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i)
        out[i] = static_cast<double>(
            std::upper_bound(arrivals.begin(), arrivals.end(), queries[i]) -
            arrivals.begin());
    return out;
}

std::vector<double> sfpp_values(double alpha_prime, double lambda,
                                const std::vector<double>& grid,
                                rng::Philox& g) {
    std::vector<double> clock =
        (alpha_prime == 1.0) ? grid : stable_values(alpha_prime, grid, g);
    return poisson_counts_at(lambda, clock, g);
}

std::vector<double> gfnbp_values(const GfnbpParams& p,
                                 const std::vector<double>& grid,
                                 rng::Philox& g) {
    auto m = ml_levy_values(p, grid, g);
    auto ev = fpp_arrivals(p.beta, p.lambda, m.back(), g);
    return counts_at(ev, m);
}

std::vector<double> stable_over(const std::vector<double>& optime,
                                double alpha_prime, rng::Philox& g) {
    if (alpha_prime == 1.0) return optime;
    std::vector<double> v(optime.size(), 0.0);
    double cur = 0.0;
    for (std::size_t i = 1; i < optime.size(); ++i) {
        double dm = optime[i] - optime[i - 1];
        cur += std::pow(dm, 1.0 / alpha_prime) *
               detail::stable_unit_draw(g, alpha_prime);
        v[i] = cur;
    }
    return v;
}

std::vector<double> sfgnbp_values(const SpaceTimeParams& sp,
                                  const std::vector<double>& grid,
                                  rng::Philox& g) {
    auto m = ml_levy_values(sp.base, grid, g);
    auto clock = stable_over(m, sp.alpha_prime, g);
    return poisson_counts_at(sp.base.lambda, clock, g);
}

std::vector<double> nh_stfnbp_values(const SpaceTimeParams& sp,
                                     const std::vector<double>& grid,
                                     rng::Philox& g, double resolution) {
    auto m = ml_levy_values(sp.base, grid, g);
    std::vector<double> q(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) q[i] = sp.rate_c * m[i];
    // sub-stream so the first-passage routine can replay during refinement
    std::uint64_t s1 = g.raw64();
    std::uint64_t s2 = g.raw64();
    std::vector<double> e;
    if (sp.beta_prime == 1.0) {
        e = q;
    } else {
        double h0 = resolution;
        if (!(h0 > 0.0)) {
            double qmax = q.back();
            h0 = (qmax > 0.0) ? 2e-3 * std::pow(qmax, sp.beta_prime) /
                                    std::tgamma(1.0 + sp.beta_prime)
                              : 1.0;
        }
        e = detail::inverse_stable_values(q, sp.beta_prime, s1, s2, h0);
    }
    auto clock = stable_over(e, sp.alpha_prime, g);
    return poisson_counts_at(1.0, clock, g);
}

const char* process_name(ProcessKind k) {
    switch (k) {
        case ProcessKind::stable: return "stable";
        case ProcessKind::inverse_stable: return "inverse-stable";
        case ProcessKind::gamma: return "gamma";
        case ProcessKind::ml_levy: return "ml-levy";
        case ProcessKind::fpp: return "fpp";
        case ProcessKind::gfnbp: return "gfnbp";
        case ProcessKind::sfpp: return "sfpp";
        case ProcessKind::sfgnbp: return "sfgnbp";
        case ProcessKind::nh_stfnbp: return "nh-stfnbp";
    }
    return "unknown";
}

bool is_space_time(ProcessKind k) {
    return k == ProcessKind::sfpp || k == ProcessKind::sfgnbp ||
           k == ProcessKind::nh_stfnbp;
}

}  // namespace

std::vector<double> uniform_grid(double t_max, int steps) {
    if (!(t_max > 0.0) || steps < 1)
        throw DomainError("uniform_grid: requires t_max > 0 and steps >= 1");
    std::vector<double> g(steps + 1);
    for (int i = 0; i <= steps; ++i) g[i] = t_max * i / steps;
    g[0] = 0.0;
    return g;
}

void validate_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw DomainError("grid: must not be empty");
    if (grid[0] != 0.0) throw DomainError("grid: must start at 0");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || !(grid[i] > grid[i - 1]))
            throw DomainError("grid: must be finite and strictly increasing");
    }
}

double default_inverse_stable_resolution(double beta,
                                         const std::vector<double>& grid) {
    if (grid.size() < 2) return 1.0;
    double step = grid.back() / static_cast<double>(grid.size() - 1);
    return step * std::min(1.0, std::pow(step, 1.0 / beta - 1.0)) / 10.0;
}

SamplePath sim_stable(double alpha, const std::vector<double>& grid,
                      std::uint64_t seed) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw DomainError("sim_stable: requires alpha in (0, 1)");
    validate_grid(grid);
    rng::Philox g(seed, 0);
    SamplePath p;
    p.grid = grid;
    p.kind = PathKind::subordinator;
    p.values = stable_values(alpha, grid, g);
    return p;
}

SamplePath sim_inverse_stable(double beta, const std::vector<double>& grid,
                              std::uint64_t seed, double resolution) {
    if (!(beta > 0.0) || !(beta < 1.0))
        throw DomainError("sim_inverse_stable: requires beta in (0, 1)");
    if (!(resolution > 0.0))
        throw DomainError("sim_inverse_stable: requires resolution > 0");
    validate_grid(grid);
    rng::Philox g(seed, 0);
    std::uint64_t s1 = g.raw64();
    std::uint64_t s2 = g.raw64();
    SamplePath p;
    p.grid = grid;
    p.kind = PathKind::subordinator;
    p.values = detail::inverse_stable_values(grid, beta, s1, s2, resolution);
    return p;
}

SamplePath sim_gamma(double rho, double mu, const std::vector<double>& grid,
                     std::uint64_t seed) {
    if (!(rho > 0.0) || !(mu > 0.0))
        throw DomainError("sim_gamma: requires rho > 0, mu > 0");
    validate_grid(grid);
    rng::Philox g(seed, 0);
    SamplePath p;
    p.grid = grid;
    p.kind = PathKind::subordinator;
    p.values = gamma_values(rho, mu, grid, g);
    return p;
}

SamplePath sim_ml_levy(const GfnbpParams& p, const std::vector<double>& grid,
                       std::uint64_t seed) {
    p.validate();
    validate_grid(grid);
    rng::Philox g(seed, 0);
    SamplePath out;
    out.grid = grid;
    out.kind = PathKind::subordinator;
    out.values = ml_levy_values(p, grid, g);
    return out;
}

EventTimes sim_fpp(double beta, double lambda, double horizon,
                   std::uint64_t seed) {
    if (!(beta > 0.0) || !(beta <= 1.0))
        throw DomainError("sim_fpp: requires beta in (0, 1]");
    if (!(lambda > 0.0) || !(horizon > 0.0))
        throw DomainError("sim_fpp: requires lambda > 0, horizon > 0");
    rng::Philox g(seed, 0);
    EventTimes ev;
    ev.horizon = horizon;
    ev.arrivals = fpp_arrivals(beta, lambda, horizon, g);
    return ev;
}

SamplePath sim_gfnbp(const GfnbpParams& p, const std::vector<double>& grid,
                     std::uint64_t seed) {
    p.validate();
    validate_grid(grid);
    rng::Philox g(seed, 0);
    SamplePath out;
    out.grid = grid;
    out.kind = PathKind::counting;
    out.values = gfnbp_values(p, grid, g);
    return out;
}

SamplePath sim_sfpp(double alpha_prime, double lambda,
                    const std::vector<double>& grid, std::uint64_t seed) {
    if (!(alpha_prime > 0.0) || !(alpha_prime <= 1.0))
        throw DomainError("sim_sfpp: requires alpha_prime in (0, 1]");
    if (!(lambda > 0.0)) throw DomainError("sim_sfpp: requires lambda > 0");
    validate_grid(grid);
    rng::Philox g(seed, 0);
    SamplePath out;
    out.grid = grid;
    out.kind = PathKind::counting;
    out.values = sfpp_values(alpha_prime, lambda, grid, g);
    return out;
}

SamplePath sim_sfgnbp(const SpaceTimeParams& sp,
                      const std::vector<double>& grid, std::uint64_t seed) {
    sp.validate();
    validate_grid(grid);
    rng::Philox g(seed, 0);
    SamplePath out;
    out.grid = grid;
    out.kind = PathKind::counting;
    out.values = sfgnbp_values(sp, grid, g);
    return out;
}

SamplePath sim_nh_stfnbp(const SpaceTimeParams& sp,
                         const std::vector<double>& grid,
                         std::uint64_t seed) {
    sp.validate();
    validate_grid(grid);
    rng::Philox g(seed, 0);
    SamplePath out;
    out.grid = grid;
    out.kind = PathKind::counting;
    out.values = nh_stfnbp_values(sp, grid, g, 0.0);
    return out;
}

Ensemble run_ensemble(const GeneratorSpec& gen, int n_paths,
                      const std::vector<double>& grid,
                      std::uint64_t master_seed, int n_threads) {
    if (n_paths < 1) throw DomainError("run_ensemble: requires n_paths >= 1");
    gen.sp.validate();
    validate_grid(grid);
    Ensemble e;
    e.master_seed = master_seed;
    e.generator_id = process_name(gen.kind);
    if (is_space_time(gen.kind))
        e.params = gen.sp;
    else
        e.params = gen.sp.base;
    e.paths.resize(n_paths);

    int nt = n_threads > 0
                 ? n_threads
                 : static_cast<int>(std::thread::hardware_concurrency());
    nt = std::clamp(nt, 1, 64);
    nt = std::min(nt, n_paths);
    if (nt == 1) {
        for (int i = 0; i < n_paths; ++i)
            e.paths[i] = detail::sim_path(gen, grid, master_seed,
                                          static_cast<std::uint64_t>(i));
        return e;
    }
    std::exception_ptr eptr;
    std::mutex m;
    std::vector<std::thread> workers;
    workers.reserve(nt);
    for (int w = 0; w < nt; ++w) {
        int lo = static_cast<int>(static_cast<long long>(n_paths) * w / nt);
        int hi =
            static_cast<int>(static_cast<long long>(n_paths) * (w + 1) / nt);
        workers.emplace_back([&, lo, hi] {
            try {
                for (int i = lo; i < hi; ++i)
                    e.paths[i] = detail::sim_path(
                        gen, grid, master_seed, static_cast<std::uint64_t>(i));
            } catch (...) {
                std::lock_guard<std::mutex> lk(m);
                if (!eptr) eptr = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    if (eptr) std::rethrow_exception(eptr);
    return e;
}

namespace detail {

double stable_unit_draw(rng::Philox& g, double a) {
    if (!(a > 0.0) || !(a < 1.0))
        throw DomainError("stable draw: requires alpha in (0, 1)");
    double u = kPi * g.u01();
    double v = g.exponential();
    double ln_s =
        (1.0 - a) / a * (specfun::detail::log_kanter_a(u, a) - std::log(v));
    return std::exp(ln_s);
}

SamplePath sim_path(const GeneratorSpec& gen, const std::vector<double>& grid,
                    std::uint64_t master_seed, std::uint64_t stream) {
    rng::Philox g(master_seed, stream);
    const SpaceTimeParams& sp = gen.sp;
    const GfnbpParams& b = sp.base;
    SamplePath out;
    out.grid = grid;
    switch (gen.kind) {
        case ProcessKind::stable:
            out.kind = PathKind::subordinator;
            out.values = stable_values(b.alpha, grid, g);
            break;
        case ProcessKind::inverse_stable: {
            out.kind = PathKind::subordinator;
            double h0 = gen.resolution > 0.0
                            ? gen.resolution
                            : default_inverse_stable_resolution(b.beta, grid);
            std::uint64_t s1 = g.raw64();
            std::uint64_t s2 = g.raw64();
            out.values = inverse_stable_values(grid, b.beta, s1, s2, h0);
            break;
        }
        case ProcessKind::gamma:
            out.kind = PathKind::subordinator;
            out.values = gamma_values(b.rho, b.mu, grid, g);
            break;
        case ProcessKind::ml_levy:
            out.kind = PathKind::subordinator;
            out.values = ml_levy_values(b, grid, g);
            break;
        case ProcessKind::fpp:
            out.kind = PathKind::counting;
            out.values =
                counts_at(fpp_arrivals(b.beta, b.lambda, grid.back(), g), grid);
            break;
        case ProcessKind::gfnbp:
            out.kind = PathKind::counting;
            out.values = gfnbp_values(b, grid, g);
            break;
        case ProcessKind::sfpp:
            out.kind = PathKind::counting;
            out.values = sfpp_values(sp.alpha_prime, b.lambda, grid, g);
            break;
        case ProcessKind::sfgnbp:
            out.kind = PathKind::counting;
            out.values = sfgnbp_values(sp, grid, g);
            break;
        case ProcessKind::nh_stfnbp:
            out.kind = PathKind::counting;
            out.values = nh_stfnbp_values(sp, grid, g, gen.resolution);
            break;
    }
    return out;
}

std::vector<double> inverse_stable_values(const std::vector<double>& queries,
                                          double beta, std::uint64_t seed,
                                          std::uint64_t stream, double h0) {
    if (!(beta > 0.0) || !(beta < 1.0))
        throw DomainError("inverse-stable: requires beta in (0, 1)");
    if (!(h0 > 0.0))
        throw DomainError("inverse-stable: requires resolution > 0");
    if (queries.empty()) return {};
    for (std::size_t i = 0; i < queries.size(); ++i) {
        if (!(queries[i] >= 0.0) ||
            (i > 0 && queries[i] < queries[i - 1]))
            throw DomainError("inverse-stable: queries must be nondecreasing "
                              "and nonnegative");
    }
    if (!(queries.back() > 0.0))
        return std::vector<double>(queries.size(), 0.0);

    constexpr long long kBudget = 10000000;
    long long used = 0;
    auto walk = [&](std::uint64_t str, double h) {
        rng::Philox g(seed, str);
        std::vector<double> out;
        out.reserve(queries.size());
        double r = 0.0;   // latent operational time
        double sv = 0.0;  // latent stable value
        double incr = std::pow(h, 1.0 / beta);
        for (double q : queries) {
            if (q <= 0.0) {
                out.push_back(0.0);
                continue;
            }
            while (sv <= q) {
                sv += incr * stable_unit_draw(g, beta);
                r += h;
                if (++used > kBudget)
                    throw ResolutionTooCoarse(
                        "inverse-stable: step budget exhausted before the "
                        "bracket fell below 1e-3 of the output scale");
            }
            out.push_back(r - 0.5 * h);
        }
        return out;
    };

    // the floor keeps a pathologically small pilot passage from forcing an
    // unbounded chase; it sits two decades under the typical passage scale
    double scale = std::pow(queries.back(), beta) / std::tgamma(1.0 + beta);
    double floor_h = std::min(2e-5 * scale, h0);

    // the pilot staircase picks the step; accepting on the pilot's own value
    // selects upward fluctuations of the passage estimate, so the returned
    // path is a fresh walk on a split stream at the accepted step
    double h = h0;
    for (;;) {
        auto pilot = walk(stream, h);
        if (h <= 2e-3 * pilot.back() || h <= floor_h) break;
        h *= 0.5;
    }
    return walk(~stream, h);
}

}  // namespace detail

}  // namespace gfnbp::sim
