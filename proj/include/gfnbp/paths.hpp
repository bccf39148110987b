#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gfnbp/params.hpp"
#include "gfnbp/rng.hpp"

namespace gfnbp::sim {

enum class PathKind { subordinator, counting };

// kind = subordinator: values nondecreasing reals from 0.
// kind = counting: values nondecreasing nonnegative integers from 0.
struct SamplePath {
    std::vector<double> grid;
    std::vector<double> values;
    PathKind kind = PathKind::subordinator;
};

struct EventTimes {
    std::vector<double> arrivals;  // strictly increasing, all <= horizon
    double horizon = 0.0;
};

enum class ProcessKind {
    stable,
    inverse_stable,
    gamma,
    ml_levy,
    fpp,
    gfnbp,
    sfpp,
    sfgnbp,
    nh_stfnbp
};

struct GeneratorSpec {
    ProcessKind kind = ProcessKind::gfnbp;
    SpaceTimeParams sp;        // base params plus space/time orders
    double resolution = 0.0;   // inverse-stable latent step; 0 picks default
};

struct Ensemble {
    std::vector<SamplePath> paths;  // all share one grid
    std::variant<GfnbpParams, SpaceTimeParams> params;
    std::string generator_id;
    std::uint64_t master_seed = 0;
};

// Grid helpers. Grids are strictly increasing and start at 0.
std::vector<double> uniform_grid(double t_max, int steps);
void validate_grid(const std::vector<double>& grid);

// Latent-step default for the first-passage construction, from the output
// grid spacing.
double default_inverse_stable_resolution(double beta,
                                         const std::vector<double>& grid);

SamplePath sim_stable(double alpha, const std::vector<double>& grid,
                      std::uint64_t seed);
SamplePath sim_inverse_stable(double beta, const std::vector<double>& grid,
                              std::uint64_t seed, double resolution);
SamplePath sim_gamma(double rho, double mu, const std::vector<double>& grid,
                     std::uint64_t seed);
SamplePath sim_ml_levy(const GfnbpParams& p, const std::vector<double>& grid,
                       std::uint64_t seed);
EventTimes sim_fpp(double beta, double lambda, double horizon,
                   std::uint64_t seed);
SamplePath sim_gfnbp(const GfnbpParams& p, const std::vector<double>& grid,
                     std::uint64_t seed);
SamplePath sim_sfpp(double alpha_prime, double lambda,
                    const std::vector<double>& grid, std::uint64_t seed);
SamplePath sim_sfgnbp(const SpaceTimeParams& sp,
                      const std::vector<double>& grid, std::uint64_t seed);
SamplePath sim_nh_stfnbp(const SpaceTimeParams& sp,
                         const std::vector<double>& grid, std::uint64_t seed);

// n_threads = 0 uses the hardware count. Path i is generated from the
// stream (master_seed, i), so results are identical for any thread count.
Ensemble run_ensemble(const GeneratorSpec& gen, int n_paths,
                      const std::vector<double>& grid,
                      std::uint64_t master_seed, int n_threads = 0);

namespace detail {

// Unit-time one-sided stable variate (0 < a < 1).
double stable_unit_draw(rng::Philox& g, double a);

// Stream-reusable cores; the seed pair lets the first-passage routine replay
// its latent path when it refines the step.
SamplePath sim_path(const GeneratorSpec& gen, const std::vector<double>& grid,
                    std::uint64_t master_seed, std::uint64_t stream);

// First passage of a latent stable path across each query level (queries
// nondecreasing, >= 0). Midpoint-of-bracket estimates; the step is halved
// until the bracket is below 1e-3 of the output scale. Throws
// ResolutionTooCoarse when the step budget trips first.
std::vector<double> inverse_stable_values(const std::vector<double>& queries,
                                          double beta, std::uint64_t seed,
                                          std::uint64_t stream, double h0);

}  // namespace detail

}  // namespace gfnbp::sim
