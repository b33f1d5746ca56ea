// delidx: Morse indexes of Delaunay unduloid pieces in R^{n+1} and H^{n+1}.
//
// Subcommands:
//   profile  solve one profile period, export CSV + JSON summary
//   index    mode-by-mode index report for a block or slab (JSON)
//   growth   slab-index growth table (CSV) and slope fit (JSON)
//   verify   run the acceptance suite

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "delidx/acceptance.hpp"
#include "delidx/errors.hpp"
#include "delidx/growth.hpp"
#include "delidx/numerics.hpp"
#include "delidx/par.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNumeric = 3;

struct CommonOpts {
    std::string space = "euclidean";
    int n = 2;
    double H = 1.0;
    std::vector<double> mu;
    int jobs = 0;
    std::string format; // empty: the command's default
    delidx::GridControls grid;
};

delidx::Space parse_space(const std::string& s) {
    if (s == "euclidean") return delidx::Space::Euclidean;
    if (s == "hyperbolic") return delidx::Space::Hyperbolic;
    throw delidx::usage_error("unknown space '" + s + "' (euclidean | hyperbolic)");
}

delidx::DelaunayFamily family_of(const CommonOpts& c, double mu) {
    delidx::DelaunayFamily fam;
    fam.space = parse_space(c.space);
    fam.n = c.n;
    fam.H = c.H;
    fam.mu = mu;
    delidx::validate(fam);
    return fam;
}

std::pair<delidx::BC, delidx::BC> parse_bc(const std::string& bc) {
    auto one = [](char c) {
        if (c == 'd') return delidx::BC::Dirichlet;
        if (c == 'n') return delidx::BC::Neumann;
        throw delidx::usage_error("boundary conditions must be one of dd, nn, dn, nd");
    };
    if (bc.size() != 2) throw delidx::usage_error("boundary conditions must be two letters");
    return {one(bc[0]), one(bc[1])};
}


void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw delidx::usage_error("cannot open output file " + path);
    out << content;
    if (!out.good()) throw delidx::usage_error("write failed for " + path);
}

std::string with_extension(const std::string& path, const std::string& ext) {
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + ext;
    return path.substr(0, dot) + ext;
}

int cmd_profile(const CommonOpts& c, int samples, const std::string& out_path,
                const std::string& coeffs_path) {
    const delidx::DelaunayFamily fam = family_of(c, c.mu.at(0));
    const delidx::ProfileCurve curve = delidx::solve_profile(fam, samples);
    const auto [z1, z2] = delidx::neumann_cut_points(curve);
    const double sup = delidx::potential_bounds(delidx::delaunay_coefficients(curve));

    std::string csv_path;
    if (c.format != "json") {
        std::ostringstream csv;
        delidx::write_profile_csv(curve, csv);
        csv_path = with_extension(out_path, ".csv");
        write_file(csv_path, csv.str());
    }

    nlohmann::ordered_json j;
    j["a_minus"] = curve.turning_lo;
    j["a_plus"] = curve.turning_hi;
    j["period"] = curve.period;
    j["zeta1"] = z1;
    j["zeta2"] = z2;
    j["sup_B2V"] = sup;
    const std::string summary = j.dump(2);
    write_file(with_extension(out_path, ".json"), summary + "\n");
    std::cout << summary << "\n";

    if (!coeffs_path.empty()) {
        std::ostringstream coeffs;
        delidx::write_coefficients_csv(delidx::delaunay_coefficients(curve), coeffs);
        write_file(coeffs_path, coeffs.str());
    }
    if (!csv_path.empty()) std::cerr << "wrote " << csv_path << "\n";
    return kExitOk;
}

int cmd_index(const CommonOpts& c, const std::string& block_kind, int ell, double length,
              const std::string& bc, bool shifted, const std::string& out_path, bool strict) {
    if (c.format == "csv")
        throw delidx::usage_error("index reports use the JSON schema; pass --format json");
    const delidx::DelaunayFamily fam = family_of(c, c.mu.at(0));
    const auto [lo, hi] = parse_bc(bc);
    delidx::BlockSpec spec;
    if (block_kind == "B") {
        spec = delidx::make_dirichlet_block(fam, ell, shifted);
    } else if (block_kind == "C") {
        spec = delidx::make_neumann_block(fam, ell);
    } else if (block_kind == "slab") {
        spec = delidx::make_slab(fam, length, lo, hi);
    } else {
        throw delidx::usage_error("unknown block kind '" + block_kind + "' (B | C | slab)");
    }
    if (block_kind != "slab") {
        spec.bc_lo = lo;
        spec.bc_hi = hi;
    }
    const delidx::IndexReport report = delidx::block_index(spec, c.grid);
    const std::string json = report.to_json();
    if (out_path.empty())
        std::cout << json << "\n";
    else
        write_file(out_path, json + "\n");
    if (strict && !report.all_checks_pass()) return kExitCheckFailure;
    return kExitOk;
}

int cmd_growth(const CommonOpts& c, double length, int points, const std::string& bc,
               const std::string& out_path) {
    if (c.mu.empty()) throw delidx::usage_error("growth needs at least one --mu");
    std::vector<delidx::DelaunayFamily> ends;
    for (double mu : c.mu) ends.push_back(family_of(c, mu));
    const auto [lo, hi] = parse_bc(bc);
    (void)lo;
    (void)hi;

    double max_period = 0;
    double target = 0;
    for (const auto& fam : ends) {
        const double T = delidx::period(fam);
        max_period = std::max(max_period, T);
        target += 2.0 / T;
    }
    if (length <= 0) length = 30.0 * max_period;
    std::vector<double> lengths;
    for (int j = 1; j <= points; ++j)
        lengths.push_back(length * j / points);

    const auto rows = delidx::growth_table(ends, lengths, c.grid);
    std::string csv_path;
    if (c.format != "json") {
        std::ostringstream csv;
        delidx::write_growth_csv(rows, csv);
        csv_path = with_extension(out_path, ".csv");
        write_file(csv_path, csv.str());
    }

    std::vector<double> xs, ys;
    for (std::size_t i = lengths.size() * 2 / 5; i < lengths.size(); ++i) {
        xs.push_back(rows[i].X);
        ys.push_back(static_cast<double>(rows[i].index_dirichlet));
    }
    delidx::GrowthExperiment exp;
    exp.family = ends.front();
    exp.lengths = lengths;
    exp.num_ends = static_cast<int>(ends.size());
    exp.target_slope = target;
    exp.fitted_slope = delidx::lsq_slope(xs.data(), ys.data(), xs.size());
    const double rel = std::abs(exp.fitted_slope - target) / target;
    const std::string summary = delidx::fit_summary_json(exp, rel);
    write_file(with_extension(out_path, ".json"), summary + "\n");
    std::cout << summary << "\n";
    if (!csv_path.empty()) std::cerr << "wrote " << csv_path << "\n";
    return kExitOk;
}

int cmd_verify(const delidx::acceptance::Config& cfg) {
    const auto results = delidx::acceptance::run(cfg);
    delidx::acceptance::print_table(results, std::cout);
    if (results.empty()) {
        std::cerr << "no criterion matches --only filter\n";
        return kExitInvalidInput;
    }
    return delidx::acceptance::all_pass(results) ? kExitOk : kExitCheckFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Morse indexes of constant-mean-curvature Delaunay unduloid pieces"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; flags override file values");

    // Options live on the app; subcommands fall through, so flags may follow
    // the subcommand name and config files use flat key=value entries.
    CommonOpts common;
    common.mu = {};
    app.add_option("--space", common.space, "euclidean | hyperbolic");
    app.add_option("--n", common.n, "hypersurface dimension (>= 2)");
    app.add_option("--H", common.H, "mean curvature (1 Euclidean, > 1 hyperbolic)");
    app.add_option("--mu", common.mu, "weight parameter(s)")->delimiter(',');
    app.add_option("--jobs", common.jobs, "worker threads (0 = all cores)");
    app.add_option("--format", common.format, "csv | json (default depends on the command)");
    app.add_option("--nodes-per-period", common.grid.nodes_per_period,
                   "initial spectral nodes per period");
    app.add_option("--max-refinements", common.grid.max_refinements, "grid doublings allowed");
    app.add_option("--zero-band", common.grid.zero_band_override,
                   "fixed zero-band half-width (default: 10 h^2 (sup|q|/inf w + 1))");

    int samples = 2048;
    std::string out_path;
    std::string coeffs_path;
    std::string block_kind = "B";
    int ell = 1;
    double length = 0;
    int g_points = 60;
    std::string bc = "dd";
    bool strict = false;
    delidx::acceptance::Config vcfg;
    app.add_option("--samples", samples, "profile: grid samples per period");
    app.add_option("--out", out_path, "output path (base name for .csv/.json pairs)");
    app.add_option("--coeffs-out", coeffs_path, "profile: also export x,A,B,V CSV here");
    app.add_option("--block", block_kind, "index: B | C | slab");
    app.add_option("--l", ell, "index: number of glued blocks");
    app.add_option("--length", length, "slab length / growth ladder maximum");
    app.add_option("--points", g_points, "growth: ladder size");
    app.add_option("--bc", bc, "boundary conditions: dd | nn | dn | nd");
    bool shifted = false;
    app.add_flag("--shifted", shifted, "index: start Dirichlet blocks at the bulge");
    app.add_flag("--strict", strict, "index: exit 1 when a recorded check fails");
    app.add_option("--only", vcfg.only, "verify: run a single criterion by name");
    app.add_option("--seed", vcfg.seed, "verify: seed for the property trials");
    app.add_option("--trials", vcfg.trials, "verify: bracketing trial count");

    auto* profile = app.add_subcommand("profile", "solve one profile period");
    auto* index = app.add_subcommand("index", "index report for a block or slab");
    auto* growth = app.add_subcommand("growth", "slab-index growth and slope fit");
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    for (auto* sub : {profile, index, growth, verify}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        delidx::par::set_max_threads(common.jobs);
        if (!common.format.empty() && common.format != "csv" && common.format != "json")
            throw delidx::usage_error("unknown format '" + common.format + "' (csv | json)");
        if (profile->parsed()) {
            if (common.mu.empty()) throw delidx::usage_error("--mu is required");
            return cmd_profile(common, samples, out_path.empty() ? "profile" : out_path,
                               coeffs_path);
        }
        if (index->parsed()) {
            if (common.mu.empty()) throw delidx::usage_error("--mu is required");
            return cmd_index(common, block_kind, ell, length, bc, shifted, out_path, strict);
        }
        if (growth->parsed()) {
            return cmd_growth(common, length, g_points, bc,
                              out_path.empty() ? "growth" : out_path);
        }
        if (verify->parsed()) {
            return cmd_verify(vcfg);
        }
    } catch (const delidx::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const delidx::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const delidx::usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
    return kExitOk;
}
