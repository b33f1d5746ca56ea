#include "delidx/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "delidx/errors.hpp"

namespace delidx {

namespace {

constexpr double kPivotFloor = 1e-300;

// Append one element's contribution; coefficient varies linearly over it.
inline void add_mass_element(Tridiag& m, std::size_t i, double c0, double c1, double h) {
    m.diag[i] += h * (3 * c0 + c1) / 12.0;
    m.diag[i + 1] += h * (c0 + 3 * c1) / 12.0;
    m.off[i] += h * (c0 + c1) / 12.0;
}

void strip_boundary(Tridiag& t, bool drop_first, bool drop_last) {
    if (drop_first) {
        t.diag.erase(t.diag.begin());
        t.off.erase(t.off.begin());
    }
    if (drop_last) {
        t.diag.pop_back();
        t.off.pop_back();
    }
}

} // namespace

int initial_nodes(const GridControls& ctl, double interval_length) {
    if (ctl.fixed_nodes > 0) return ctl.fixed_nodes;
    const double period = ctl.period_hint > 0 ? ctl.period_hint : interval_length;
    const double per_unit = static_cast<double>(ctl.nodes_per_period);
    const int n = static_cast<int>(std::lround(per_unit * interval_length / period));
    return std::max(64, n);
}

ModeProblem::Coeffs ModeProblem::coefficients(int nodes) const {
    if (nodes < 32) throw domain_error("mode problems need at least 32 nodes");
    if (!geom.sample) throw internal_error("geometry has no resampler");
    Coeffs c;
    c.x.resize(nodes);
    c.p.resize(nodes);
    c.q.resize(nodes);
    c.w.resize(nodes);
    c.h = (geom.x_hi - geom.x_lo) / (nodes - 1);
    const double lk = lambda_k();
    const int n = geom.n;
    for (int i = 0; i < nodes; ++i) {
        const double xi = geom.x_lo + c.h * i;
        double A, B, V;
        geom.sample(xi, A, B, V);
        if (!(A > 0.0) || !(B > 0.0))
            throw domain_error("mode coefficients need positive A and B");
        const double Bn1 = std::pow(B, n - 1);
        c.x[i] = xi;
        c.p[i] = Bn1 / A;
        c.q[i] = A * Bn1 / (B * B) * (lk - B * B * V);
        c.w[i] = A * Bn1;
    }
    return c;
}

std::pair<Tridiag, Tridiag> assemble_from(const ModeProblem::Coeffs& c, BC bc_lo, BC bc_hi) {
    const std::size_t n = c.x.size();
    Tridiag K, M;
    K.diag.assign(n, 0.0);
    K.off.assign(n - 1, 0.0);
    M.diag.assign(n, 0.0);
    M.off.assign(n - 1, 0.0);
    const double h = c.h;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double pbar = 0.5 * (c.p[i] + c.p[i + 1]);
        K.diag[i] += pbar / h;
        K.diag[i + 1] += pbar / h;
        K.off[i] -= pbar / h;
        add_mass_element(K, i, c.q[i], c.q[i + 1], h);
        add_mass_element(M, i, c.w[i], c.w[i + 1], h);
    }
    const bool drop_lo = bc_lo == BC::Dirichlet, drop_hi = bc_hi == BC::Dirichlet;
    strip_boundary(K, drop_lo, drop_hi);
    strip_boundary(M, drop_lo, drop_hi);
    return {K, M};
}

std::pair<Tridiag, Tridiag> assemble(const ModeProblem& problem, int nodes) {
    return assemble_from(problem.coefficients(nodes), problem.bc_lo, problem.bc_hi);
}

int inertia_count(const Tridiag& K, const Tridiag& M, double shift) {
    const std::size_t n = K.size();
    int count = 0;
    double prev = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = K.diag[i] - shift * M.diag[i];
        if (i > 0) {
            const double e = K.off[i - 1] - shift * M.off[i - 1];
            d -= e * e / prev;
        }
        if (d == 0.0) d = kPivotFloor;
        if (d < 0.0) ++count;
        prev = d;
    }
    return count;
}

double zero_band_width(const ModeProblem::Coeffs& c) {
    double sup_q = 0.0, inf_w = c.w[0];
    for (std::size_t i = 0; i < c.x.size(); ++i) {
        sup_q = std::max(sup_q, std::abs(c.q[i]));
        inf_w = std::min(inf_w, c.w[i]);
    }
    return 10.0 * c.h * c.h * (sup_q / inf_w + 1.0);
}

namespace {

struct LevelCounts {
    int neg, zero;
    double band;
};

LevelCounts counts_at(const ModeProblem& problem, int nodes, double band_override) {
    const auto coeffs = problem.coefficients(nodes);
    const auto [K, M] = assemble_from(coeffs, problem.bc_lo, problem.bc_hi);
    const double band = band_override >= 0 ? band_override : zero_band_width(coeffs);
    const int below = inertia_count(K, M, -band);
    const int upto = inertia_count(K, M, band);
    return {below, upto - below, band};
}

// Bisection on the inertia function at one grid; returns (eigenvalue, width).
std::vector<std::pair<double, double>> bracket_smallest(const ModeProblem& problem, int count,
                                                        int nodes) {
    const auto coeffs = problem.coefficients(nodes);
    const auto [K, M] = assemble_from(coeffs, problem.bc_lo, problem.bc_hi);
    auto below = [&](double lam) { return inertia_count(K, M, lam); };

    double lo = coeffs.q[0] / coeffs.w[0], hi = lo;
    for (std::size_t i = 0; i < coeffs.x.size(); ++i) {
        lo = std::min(lo, coeffs.q[i] / coeffs.w[i]);
        hi = std::max(hi, coeffs.q[i] / coeffs.w[i]);
    }
    lo -= 1.0;
    hi += 1.0;
    double span = hi - lo;
    for (int it = 0; below(hi) < count; ++it) {
        if (it > 60) throw numeric_error("eigenvalue upper bracket failed to grow");
        hi += span;
        span *= 2;
    }
    const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
    const double width = 1e-10 * scale;

    std::vector<std::pair<double, double>> out(count);
    double left = lo;
    for (int j = 1; j <= count; ++j) {
        double a = left, b = hi;
        while (b - a > width) {
            const double mid = 0.5 * (a + b);
            if (below(mid) >= j)
                b = mid;
            else
                a = mid;
        }
        out[j - 1] = {0.5 * (a + b), b - a};
        left = a; // the (j+1)-st eigenvalue cannot lie below the j-th bracket
    }
    return out;
}

} // namespace

Spectrum count_negative(const ModeProblem& problem, const GridControls& ctl) {
    Spectrum s;
    const double len = problem.geom.x_hi - problem.geom.x_lo;
    int nodes = initial_nodes(ctl, len);

    LevelCounts prev = counts_at(problem, nodes, ctl.zero_band_override);
    bool converged = ctl.fixed_nodes > 0;
    for (int level = 1; !converged && level <= ctl.max_refinements; ++level) {
        nodes *= 2;
        const LevelCounts cur = counts_at(problem, nodes, ctl.zero_band_override);
        converged = cur.neg == prev.neg && cur.zero == prev.zero;
        prev = cur;
        s.refinements = level;
    }
    if (!converged)
        throw numeric_error("negative-eigenvalue count did not stabilize: " +
                            std::to_string(prev.neg) + " negative / " + std::to_string(prev.zero) +
                            " zero-band at the last two grids");
    s.neg_count = prev.neg;
    s.zero_modes = prev.zero;
    s.grid_nodes = nodes;
    s.refinement_agreement = true;
    s.zero_band = prev.band;
    if (ctl.smallest_count > 0) s.smallest = bracket_smallest(problem, ctl.smallest_count, nodes);
    return s;
}

std::vector<double> smallest_eigenvalues(const ModeProblem& problem, int count,
                                         const GridControls& ctl) {
    if (count < 1 || count > 10)
        throw domain_error("smallest_eigenvalues supports 1..10 eigenvalues");
    int nodes = ctl.fixed_nodes;
    if (nodes == 0) {
        // Reuse the stabilized grid of the counting routine.
        GridControls probe = ctl;
        probe.smallest_count = 0;
        nodes = count_negative(problem, probe).grid_nodes;
    }
    std::vector<double> out;
    out.reserve(count);
    for (const auto& [value, width] : bracket_smallest(problem, count, nodes))
        out.push_back(value);
    return out;
}

int mode_cutoff(const ReducedGeometry& geom) {
    const double sup = potential_bounds(geom);
    const int n = geom.n;
    int k = 1;
    while (static_cast<double>(k) * (k + n - 2) < sup * (1.0 - 1e-12)) ++k;
    return k;
}

double jacobi_residual(const ModeProblem& problem, const std::vector<double>& field_values) {
    const int nodes = static_cast<int>(field_values.size());
    const auto coeffs = problem.coefficients(nodes);
    const auto [K, M] = assemble_from(coeffs, BC::Neumann, BC::Neumann);
    auto apply = [&](const Tridiag& T, int i) {
        double r = T.diag[i] * field_values[i];
        if (i > 0) r += T.off[i - 1] * field_values[i - 1];
        if (i + 1 < nodes) r += T.off[i] * field_values[i + 1];
        return r;
    };
    double num = 0, den = 0;
    for (int i = 1; i + 1 < nodes; ++i) { // skip boundary rows (flux terms)
        const double r = apply(K, i);
        const double m = apply(M, i);
        num += r * r;
        den += m * m;
    }
    return std::sqrt(num) / std::sqrt(den);
}

} // namespace delidx
