// Command-line surface: simulate ensembles, tabulate pmfs / moments /
// transforms, fit the correlation decay exponent, and run the verification
// battery. Output is long-format CSV or a versioned JSON report; identical
// configurations (including seed) produce byte-identical files.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gfnbp/analytic.hpp"
#include "gfnbp/errors.hpp"
#include "gfnbp/params.hpp"
#include "gfnbp/paths.hpp"
#include "gfnbp/stats.hpp"

namespace {

using gfnbp::DomainError;
using gfnbp::GfnbpParams;
using gfnbp::NumericsError;
using gfnbp::PmfTable;
using gfnbp::SpaceTimeParams;
using ojson = nlohmann::ordered_json;

struct Options {
    SpaceTimeParams sp;
    bool space_time = false;
    std::string process = "gfnbp";
    double t_max = 1.0;
    int steps = 10;
    int paths = -1;  // sentinel: per-command default
    std::uint64_t seed = 0;
    bool seed_set = false;
    double t_at = -1.0;  // pmf evaluation time; < 0 means t_max
    int n_max = -1;      // pmf support cap; < 0 means automatic
    double order = 1.0;
    double u = 1.0;
    double s_fixed = 1.0;
    std::vector<double> t_points{5.0, 10.0, 20.0, 40.0, 80.0};
    double resolution = 0.0;
    int threads = 0;
    std::string format = "csv";
    std::string output;  // empty writes to stdout
};

class Sink {
  public:
    explicit Sink(const std::string& path) {
        if (path.empty()) {
            out_ = &std::cout;
        } else {
            file_.open(path, std::ios::binary);
            if (!file_)
                throw DomainError("cannot open output file: " + path);
            out_ = &file_;
        }
    }
    void write(const std::string& s) { (*out_) << s; }

  private:
    std::ofstream file_;
    std::ostream* out_ = nullptr;
};

std::string fmt_num(double v, const char* what) {
    if (!std::isfinite(v))
        throw NumericsError(std::string(what) + " produced a non-finite value");
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x))
            throw NumericsError(std::string(what) +
                                " produced a non-finite value");
    }
}

gfnbp::sim::ProcessKind parse_kind(const std::string& s) {
    using PK = gfnbp::sim::ProcessKind;
    if (s == "stable") return PK::stable;
    if (s == "inverse-stable") return PK::inverse_stable;
    if (s == "gamma") return PK::gamma;
    if (s == "ml-levy") return PK::ml_levy;
    if (s == "fpp") return PK::fpp;
    if (s == "gfnbp") return PK::gfnbp;
    if (s == "sfpp") return PK::sfpp;
    if (s == "sfgnbp") return PK::sfgnbp;
    if (s == "nh-stfnbp") return PK::nh_stfnbp;
    throw DomainError("unknown process: " + s);
}

ojson params_json(const Options& o) {
    ojson j;
    j["alpha"] = o.sp.base.alpha;
    j["beta"] = o.sp.base.beta;
    j["rho"] = o.sp.base.rho;
    j["mu"] = o.sp.base.mu;
    j["lambda"] = o.sp.base.lambda;
    if (o.space_time) {
        j["alpha_prime"] = o.sp.alpha_prime;
        j["beta_prime"] = o.sp.beta_prime;
        j["rate_c"] = o.sp.rate_c;
    }
    return j;
}

ojson report_head(const Options& o, const char* command) {
    ojson j;
    j["schema_version"] = "1";
    j["build"] = GFNBP_BUILD_ID;
    j["command"] = command;
    j["process"] = o.process;
    j["params"] = params_json(o);
    if (o.seed_set)
        j["seed"] = o.seed;
    else
        j["seed"] = nullptr;
    return j;
}

void require_seed(const Options& o) {
    if (!o.seed_set)
        throw DomainError("--seed is required for this command");
}

gfnbp::sim::Ensemble make_ensemble(const Options& o, const std::string& proc,
                                   const std::vector<double>& grid,
                                   int n_paths) {
    gfnbp::sim::GeneratorSpec gen;
    gen.kind = parse_kind(proc);
    gen.sp = o.sp;
    gen.resolution = o.resolution;
    return gfnbp::sim::run_ensemble(gen, n_paths, grid, o.seed, o.threads);
}

int cmd_simulate(const Options& o) {
    int n_paths = o.paths < 0 ? 1 : o.paths;
    auto grid = gfnbp::sim::uniform_grid(o.t_max, o.steps);
    auto e = make_ensemble(o, o.process, grid, n_paths);
    for (const auto& p : e.paths) check_finite(p.values, "simulate");

    Sink sink(o.output);
    if (o.format == "csv") {
        sink.write("path_id,t,value\n");
        std::string chunk;
        for (std::size_t i = 0; i < e.paths.size(); ++i) {
            chunk.clear();
            const auto& vals = e.paths[i].values;
            for (std::size_t j = 0; j < grid.size(); ++j) {
                chunk += std::to_string(i);
                chunk += ',';
                chunk += fmt_num(grid[j], "simulate");
                chunk += ',';
                chunk += fmt_num(vals[j], "simulate");
                chunk += '\n';
            }
            sink.write(chunk);
        }
    } else {
        ojson j = report_head(o, "simulate");
        j["grid"] = grid;
        ojson paths = ojson::array();
        for (const auto& p : e.paths) paths.push_back(p.values);
        j["paths"] = std::move(paths);
        sink.write(j.dump(2) + "\n");
    }
    return 0;
}

PmfTable analytic_pmf_table(const Options& o, double t) {
    int cap = o.n_max >= 0 ? o.n_max + 1 : 500;
    if (o.process == "fpp")
        return gfnbp::analytic::fpp_pmf_table(t, o.sp.base, cap);
    if (o.process == "gfnbp")
        return gfnbp::analytic::gfnbp_pmf_table(
            t, o.sp.base, gfnbp::PmfMethod::quadrature, cap);
    if (o.process == "sfpp")
        return gfnbp::analytic::sfpp_pmf_table(t, o.sp, cap);
    if (o.process == "nh-stfnbp")
        return gfnbp::analytic::nh_stfnbp_pmf_table(t, o.sp, cap);
    throw DomainError("pmf: unsupported process: " + o.process);
}

void truncate_table(PmfTable& tab, int n_max) {
    if (n_max < 0 || tab.probs.size() <= static_cast<std::size_t>(n_max) + 1)
        return;
    double cut = 0.0;
    for (std::size_t n = n_max + 1; n < tab.probs.size(); ++n)
        cut += tab.probs[n];
    tab.probs.resize(static_cast<std::size_t>(n_max) + 1);
    tab.tail_bound += cut;
}

int cmd_pmf(const Options& o) {
    double t = o.t_at >= 0.0 ? o.t_at : o.t_max;
    int n_paths = o.paths < 0 ? 0 : o.paths;
    if (n_paths > 0) require_seed(o);

    PmfTable analytic = analytic_pmf_table(o, t);
    truncate_table(analytic, o.n_max);
    check_finite(analytic.probs, "pmf");

    bool with_mc = n_paths > 0;
    PmfTable empirical;
    double tv = 0.0;
    if (with_mc) {
        if (t == 0.0) {
            empirical.t = 0.0;
            empirical.method = gfnbp::PmfMethod::empirical;
            empirical.probs = {1.0};
        } else {
            auto grid = gfnbp::sim::uniform_grid(t, 2);
            auto e = make_ensemble(o, o.process, grid, n_paths);
            empirical = gfnbp::stats::empirical_pmf(e, t);
        }
        tv = gfnbp::stats::tv_distance(analytic, empirical);
    }

    Sink sink(o.output);
    if (o.format == "csv") {
        sink.write(with_mc ? "n,analytic,empirical\n" : "n,analytic\n");
        std::size_t rows = analytic.probs.size();
        if (with_mc) rows = std::max(rows, empirical.probs.size());
        std::string s;
        for (std::size_t n = 0; n < rows; ++n) {
            double pa = n < analytic.probs.size() ? analytic.probs[n] : 0.0;
            s += std::to_string(n);
            s += ',';
            s += fmt_num(pa, "pmf");
            if (with_mc) {
                double pe =
                    n < empirical.probs.size() ? empirical.probs[n] : 0.0;
                s += ',';
                s += fmt_num(pe, "pmf");
            }
            s += '\n';
        }
        s += "# method=";
        s += gfnbp::pmf_method_name(analytic.method);
        s += "\n# tail_bound=";
        s += fmt_num(analytic.tail_bound, "pmf");
        s += '\n';
        if (with_mc) {
            s += "# tv=";
            s += fmt_num(tv, "pmf");
            s += '\n';
        }
        sink.write(s);
    } else {
        ojson j = report_head(o, "pmf");
        j["t"] = t;
        j["method"] = gfnbp::pmf_method_name(analytic.method);
        j["analytic"] = analytic.probs;
        j["tail_bound"] = analytic.tail_bound;
        if (with_mc) {
            check_finite({tv}, "pmf");
            j["empirical"] = empirical.probs;
            j["tv"] = tv;
        }
        sink.write(j.dump(2) + "\n");
    }
    return 0;
}

int cmd_moments(const Options& o) {
    if (o.process != "ml-levy" && o.process != "gfnbp")
        throw DomainError("moments: supported processes are ml-levy, gfnbp");
    int n_paths = o.paths < 0 ? 0 : o.paths;
    if (n_paths > 0) require_seed(o);
    auto grid = gfnbp::sim::uniform_grid(o.t_max, o.steps);

    bool with_mc = n_paths > 0;
    gfnbp::sim::Ensemble e;
    if (with_mc) e = make_ensemble(o, o.process, grid, n_paths);

    bool ml = o.process == "ml-levy";
    Sink sink(o.output);
    ojson rows = ojson::array();
    std::string s;
    if (o.format == "csv") {
        s = ml ? "t,analytic,empirical,std_error\n"
               : "t,analytic_mean,empirical_mean,mean_stderr,analytic_"
                 "variance,empirical_variance,variance_stderr\n";
        if (!with_mc)
            s = ml ? "t,analytic\n" : "t,analytic_mean,analytic_variance\n";
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double t = grid[i];
        if (ml) {
            double an = gfnbp::analytic::ml_levy_moment(o.order, t, o.sp.base);
            gfnbp::stats::Estimate est;
            if (with_mc)
                est = gfnbp::stats::empirical_moment(e, t, o.order);
            check_finite({an, est.value, est.std_error}, "moments");
            if (o.format == "csv") {
                s += fmt_num(t, "moments");
                s += ',' + fmt_num(an, "moments");
                if (with_mc) {
                    s += ',' + fmt_num(est.value, "moments");
                    s += ',' + fmt_num(est.std_error, "moments");
                }
                s += '\n';
            } else {
                ojson r;
                r["t"] = t;
                r["analytic"] = an;
                if (with_mc) {
                    r["empirical"] = est.value;
                    r["std_error"] = est.std_error;
                }
                rows.push_back(std::move(r));
            }
        } else {
            double am = gfnbp::analytic::gfnbp_mean(t, o.sp.base);
            double av = gfnbp::analytic::gfnbp_variance(t, o.sp.base);
            gfnbp::stats::Estimate em, ev;
            if (with_mc) {
                em = gfnbp::stats::empirical_moment(e, t, 1.0);
                ev = gfnbp::stats::empirical_cov(e, t, t);
            }
            check_finite({am, av, em.value, em.std_error, ev.value,
                          ev.std_error},
                         "moments");
            if (o.format == "csv") {
                s += fmt_num(t, "moments");
                s += ',' + fmt_num(am, "moments");
                if (with_mc) {
                    s += ',' + fmt_num(em.value, "moments");
                    s += ',' + fmt_num(em.std_error, "moments");
                }
                s += ',' + fmt_num(av, "moments");
                if (with_mc) {
                    s += ',' + fmt_num(ev.value, "moments");
                    s += ',' + fmt_num(ev.std_error, "moments");
                }
                s += '\n';
            } else {
                ojson r;
                r["t"] = t;
                r["analytic_mean"] = am;
                r["analytic_variance"] = av;
                if (with_mc) {
                    r["empirical_mean"] = em.value;
                    r["mean_stderr"] = em.std_error;
                    r["empirical_variance"] = ev.value;
                    r["variance_stderr"] = ev.std_error;
                }
                rows.push_back(std::move(r));
            }
        }
    }
    if (o.format == "csv") {
        sink.write(s);
    } else {
        ojson j = report_head(o, "moments");
        j["order"] = o.order;
        j["rows"] = std::move(rows);
        sink.write(j.dump(2) + "\n");
    }
    return 0;
}

int cmd_laplace(const Options& o) {
    if (o.process != "ml-levy" && o.process != "gfnbp" &&
        o.process != "sfgnbp")
        throw DomainError(
            "laplace: supported processes are ml-levy, gfnbp, sfgnbp");
    int n_paths = o.paths < 0 ? 0 : o.paths;
    if (n_paths > 0) require_seed(o);
    auto grid = gfnbp::sim::uniform_grid(o.t_max, o.steps);

    bool with_mc = n_paths > 0;
    gfnbp::sim::Ensemble e;
    if (with_mc) e = make_ensemble(o, o.process, grid, n_paths);

    auto analytic_at = [&](double t) {
        if (o.process == "ml-levy")
            return gfnbp::analytic::ml_levy_laplace(o.u, t, o.sp.base);
        if (o.process == "gfnbp")
            return gfnbp::analytic::gfnbp_laplace(o.u, t, o.sp.base);
        return gfnbp::analytic::sfgnbp_laplace(o.u, t, o.sp);
    };

    Sink sink(o.output);
    std::string s;
    ojson rows = ojson::array();
    if (o.format == "csv")
        s = with_mc ? "t,analytic,empirical,std_error\n" : "t,analytic\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double t = grid[i];
        double an = analytic_at(t);
        gfnbp::stats::Estimate est;
        if (with_mc) est = gfnbp::stats::empirical_laplace(e, t, o.u);
        check_finite({an, est.value, est.std_error}, "laplace");
        if (o.format == "csv") {
            s += fmt_num(t, "laplace");
            s += ',' + fmt_num(an, "laplace");
            if (with_mc) {
                s += ',' + fmt_num(est.value, "laplace");
                s += ',' + fmt_num(est.std_error, "laplace");
            }
            s += '\n';
        } else {
            ojson r;
            r["t"] = t;
            r["analytic"] = an;
            if (with_mc) {
                r["empirical"] = est.value;
                r["std_error"] = est.std_error;
            }
            rows.push_back(std::move(r));
        }
    }
    if (o.format == "csv") {
        sink.write(s);
    } else {
        ojson j = report_head(o, "laplace");
        j["u"] = o.u;
        j["rows"] = std::move(rows);
        sink.write(j.dump(2) + "\n");
    }
    return 0;
}

int cmd_lrd(const Options& o) {
    if (o.process != "gfnbp")
        throw DomainError("lrd: only the gfnbp process is supported");
    require_seed(o);
    int n_paths = o.paths < 0 ? 10000 : o.paths;

    std::vector<double> grid{0.0, o.s_fixed};
    grid.insert(grid.end(), o.t_points.begin(), o.t_points.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    auto e = make_ensemble(o, o.process, grid, n_paths);
    auto fit = gfnbp::stats::lrd_fit(e, o.s_fixed, o.t_points);
    double expo = gfnbp::analytic::lrd_exponent(o.sp.base);
    check_finite({fit.slope, fit.slope_stderr, fit.r_squared, expo}, "lrd");

    Sink sink(o.output);
    if (o.format == "csv") {
        std::string s =
            "slope,slope_stderr,r_squared,s_fixed,n_points,analytic_exponent"
            "\n";
        s += fmt_num(fit.slope, "lrd");
        s += ',' + fmt_num(fit.slope_stderr, "lrd");
        s += ',' + fmt_num(fit.r_squared, "lrd");
        s += ',' + fmt_num(fit.s_fixed, "lrd");
        s += ',' + std::to_string(fit.t_points.size());
        s += ',' + fmt_num(expo, "lrd");
        s += '\n';
        sink.write(s);
    } else {
        ojson j = report_head(o, "lrd");
        j["slope"] = fit.slope;
        j["slope_stderr"] = fit.slope_stderr;
        j["r_squared"] = fit.r_squared;
        j["s_fixed"] = fit.s_fixed;
        j["t_points"] = fit.t_points;
        j["analytic_exponent"] = expo;
        sink.write(j.dump(2) + "\n");
    }
    return 0;
}

int cmd_verify(const Options& o) {
    require_seed(o);
    gfnbp::stats::VerifyBudget budget;
    budget.n_paths = o.paths < 0 ? 20000 : o.paths;
    budget.seed = o.seed;
    auto reports = o.space_time
                       ? gfnbp::stats::verify_suite(o.sp, budget)
                       : gfnbp::stats::verify_suite(o.sp.base, budget);
    bool all_pass = true;
    for (const auto& r : reports) {
        check_finite({r.analytic, r.empirical, r.mc_stderr, r.tolerance},
                     "verify");
        all_pass = all_pass && r.pass;
    }

    Sink sink(o.output);
    if (o.format == "csv") {
        std::string s = "check_id,analytic,empirical,mc_stderr,tolerance,pass\n";
        for (const auto& r : reports) {
            s += r.check_id;
            s += ',' + fmt_num(r.analytic, "verify");
            s += ',' + fmt_num(r.empirical, "verify");
            s += ',' + fmt_num(r.mc_stderr, "verify");
            s += ',' + fmt_num(r.tolerance, "verify");
            s += ',';
            s += r.pass ? "true" : "false";
            s += '\n';
        }
        sink.write(s);
    } else {
        ojson j = report_head(o, "verify");
        ojson arr = ojson::array();
        for (const auto& r : reports) {
            ojson rj;
            rj["check_id"] = r.check_id;
            rj["analytic"] = r.analytic;
            rj["empirical"] = r.empirical;
            rj["mc_stderr"] = r.mc_stderr;
            rj["tolerance"] = r.tolerance;
            rj["pass"] = r.pass;
            arr.push_back(std::move(rj));
        }
        j["reports"] = std::move(arr);
        j["all_pass"] = all_pass;
        sink.write(j.dump(2) + "\n");
    }
    return all_pass ? 0 : 1;
}

void add_param_options(CLI::App* c, Options& o) {
    c->add_option("--alpha", o.sp.base.alpha,
                  "outer stable index, in (0, 1]")
        ->capture_default_str();
    c->add_option("--beta", o.sp.base.beta,
                  "fractional order of the counting component, in (0, 1]")
        ->capture_default_str();
    c->add_option("--rho", o.sp.base.rho, "subordinator shape rate, > 0")
        ->capture_default_str();
    c->add_option("--mu", o.sp.base.mu, "subordinator scale, > 0")
        ->capture_default_str();
    c->add_option("--lambda", o.sp.base.lambda, "arrival intensity, > 0")
        ->capture_default_str();
    auto mark = [&o](const std::string&) { o.space_time = true; };
    c->add_option("--alpha-prime", o.sp.alpha_prime,
                  "space-fractional order, in (0, 1]")
        ->capture_default_str()
        ->each(mark);
    c->add_option("--beta-prime", o.sp.beta_prime,
                  "time-fractional order, in (0, 1]")
        ->capture_default_str()
        ->each(mark);
    c->add_option("--rate-c", o.sp.rate_c, "linear rate coefficient, > 0")
        ->capture_default_str()
        ->each(mark);
}

void add_output_options(CLI::App* c, Options& o) {
    c->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    c->add_option("--output,-o", o.output,
                  "output file (default: stdout)");
    c->add_option("--threads", o.threads,
                  "worker threads for path generation (0 = auto)")
        ->capture_default_str();
}

void add_seed_option(CLI::App* c, Options& o, bool required) {
    auto* opt = c->add_option("--seed", o.seed, "master RNG seed")
                    ->each([&o](const std::string&) { o.seed_set = true; });
    if (required) opt->required();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Simulation and analytic evaluation for generalized fractional "
        "negative binomial counting processes"};
    app.require_subcommand(1);
    Options o;

    auto* c_sim = app.add_subcommand(
        "simulate", "Generate ensemble sample paths (long-format output)");
    add_param_options(c_sim, o);
    add_output_options(c_sim, o);
    add_seed_option(c_sim, o, true);
    c_sim->add_option("--process", o.process, "process to simulate")
        ->check(CLI::IsMember({"stable", "inverse-stable", "gamma", "ml-levy",
                               "fpp", "gfnbp", "sfpp", "sfgnbp", "nh-stfnbp"}))
        ->capture_default_str();
    c_sim->add_option("--t-max", o.t_max, "grid horizon, > 0")
        ->capture_default_str();
    c_sim->add_option("--steps", o.steps, "grid steps, >= 1")
        ->capture_default_str();
    c_sim->add_option("--paths", o.paths, "number of sample paths (default 1)");
    c_sim->add_option("--resolution", o.resolution,
                      "latent step for inverse-stable components (0 = auto)");

    auto* c_pmf = app.add_subcommand(
        "pmf", "Tabulate the analytic pmf, optionally against Monte Carlo");
    add_param_options(c_pmf, o);
    add_output_options(c_pmf, o);
    add_seed_option(c_pmf, o, false);
    c_pmf->add_option("--process", o.process, "counting process")
        ->check(CLI::IsMember({"fpp", "gfnbp", "sfpp", "nh-stfnbp"}))
        ->capture_default_str();
    c_pmf->add_option("--t", o.t_at, "evaluation time (default: --t-max)");
    c_pmf->add_option("--t-max", o.t_max, "default evaluation time")
        ->capture_default_str();
    c_pmf->add_option("--n-max", o.n_max, "truncate the table at this count");
    c_pmf->add_option("--paths", o.paths,
                      "Monte Carlo paths (0 = analytic only)");
    c_pmf->add_option("--resolution", o.resolution,
                      "latent step for inverse-stable components (0 = auto)");

    auto* c_mom = app.add_subcommand(
        "moments", "Analytic vs empirical moments over the time grid");
    add_param_options(c_mom, o);
    add_output_options(c_mom, o);
    add_seed_option(c_mom, o, false);
    c_mom->add_option("--process", o.process, "target process")
        ->check(CLI::IsMember({"ml-levy", "gfnbp"}))
        ->capture_default_str();
    c_mom->add_option("--order", o.order,
                      "moment order (ml-levy only; gfnbp reports mean and "
                      "variance)")
        ->capture_default_str();
    c_mom->add_option("--t-max", o.t_max, "grid horizon")->capture_default_str();
    c_mom->add_option("--steps", o.steps, "grid steps")->capture_default_str();
    c_mom->add_option("--paths", o.paths,
                      "Monte Carlo paths (0 = analytic only)");

    auto* c_lap = app.add_subcommand(
        "laplace", "Analytic vs empirical Laplace functional over the grid");
    add_param_options(c_lap, o);
    add_output_options(c_lap, o);
    add_seed_option(c_lap, o, false);
    c_lap->add_option("--process", o.process, "target process")
        ->check(CLI::IsMember({"ml-levy", "gfnbp", "sfgnbp"}))
        ->capture_default_str();
    c_lap->add_option("--u", o.u, "transform argument, >= 0")
        ->capture_default_str();
    c_lap->add_option("--t-max", o.t_max, "grid horizon")->capture_default_str();
    c_lap->add_option("--steps", o.steps, "grid steps")->capture_default_str();
    c_lap->add_option("--paths", o.paths,
                      "Monte Carlo paths (0 = analytic only)");

    auto* c_lrd = app.add_subcommand(
        "lrd", "Fit the correlation decay exponent on a coupled ensemble");
    add_param_options(c_lrd, o);
    add_output_options(c_lrd, o);
    add_seed_option(c_lrd, o, true);
    c_lrd->add_option("--process", o.process, "target process")
        ->check(CLI::IsMember({"gfnbp"}))
        ->capture_default_str();
    c_lrd->add_option("--s-fixed", o.s_fixed, "fixed earlier time, > 0")
        ->capture_default_str();
    c_lrd->add_option("--t-points", o.t_points,
                      "later times, all > s-fixed, spanning a decade")
        ->delimiter(',')
        ->capture_default_str();
    c_lrd->add_option("--paths", o.paths, "ensemble size (default 10000)");

    auto* c_ver = app.add_subcommand(
        "verify", "Run the analytic-vs-Monte-Carlo check battery");
    add_param_options(c_ver, o);
    add_output_options(c_ver, o);
    add_seed_option(c_ver, o, true);
    c_ver->add_option("--paths", o.paths,
                      "paths per check (default 20000; 0 = empty battery)");

    try {
        app.parse(argc, argv);
        if (*c_sim) return cmd_simulate(o);
        if (*c_pmf) return cmd_pmf(o);
        if (*c_mom) return cmd_moments(o);
        if (*c_lap) return cmd_laplace(o);
        if (*c_lrd) return cmd_lrd(o);
        if (*c_ver) return cmd_verify(o);
        return 2;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericsError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
