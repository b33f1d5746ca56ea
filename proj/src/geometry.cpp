#include "delidx/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "delidx/errors.hpp"
#include "delidx/numerics.hpp"

namespace delidx {

namespace {

// Exact Delaunay coefficient triple from one profile state.
void delaunay_abv(const DelaunayFamily& fam, double v, double d, double& A, double& B, double& V) {
    if (fam.space == Space::Euclidean) {
        A = std::sqrt(1.0 + d * d);
        B = v;
        V = fam.n * (1.0 + (fam.n - 1) * fam.mu * fam.mu * std::pow(v, -2 * fam.n));
    } else {
        A = std::sqrt(1.0 + d * d) / std::cos(v);
        B = std::tan(v);
        V = fam.n * (fam.H * fam.H - 1.0) +
            fam.n * (fam.n - 1) * fam.mu * fam.mu * std::pow(B, -2 * fam.n);
    }
}

ReducedGeometry sampled_geometry(int n, double x_lo, double x_hi, int nodes,
                                 std::function<void(double, double&, double&, double&)> f,
                                 GeometrySource source) {
    if (nodes < 2) throw domain_error("geometry grids need at least 2 nodes");
    ReducedGeometry g;
    g.n = n;
    g.x_lo = x_lo;
    g.x_hi = x_hi;
    g.source = source;
    g.sample = std::move(f);
    g.x.resize(nodes);
    g.A.resize(nodes);
    g.B.resize(nodes);
    g.V.resize(nodes);
    const double h = (x_hi - x_lo) / (nodes - 1);
    for (int i = 0; i < nodes; ++i) {
        g.x[i] = x_lo + h * i;
        g.sample(g.x[i], g.A[i], g.B[i], g.V[i]);
    }
    return g;
}

double axis_field_value(const DelaunayFamily& fam, double v, double d) {
    if (fam.space == Space::Euclidean) return d / std::sqrt(1.0 + d * d);
    return d / (std::cos(v) * std::sqrt(1.0 + d * d));
}

double translation_field_value(const DelaunayFamily& fam, double x, double v, double d) {
    if (fam.space == Space::Euclidean) return 1.0 / std::sqrt(1.0 + d * d);
    // Normal component of the horizontal Killing field in the half-space model,
    // with its positive metric factor: (cos phi - phi' sin phi) / (e^t cos phi sqrt(1+phi'^2)).
    const double c = std::cos(v), s = std::sin(v);
    return (c - d * s) / (std::exp(x) * c * std::sqrt(1.0 + d * d));
}

JacobiField build_field(const ProfileCurve& curve, double x_lo, double x_hi, int nodes,
                        int mode_k) {
    JacobiField field;
    field.mode_k = mode_k;
    field.x.resize(nodes);
    field.values.resize(nodes);
    const double h = (x_hi - x_lo) / (nodes - 1);
    for (int i = 0; i < nodes; ++i) {
        const double xi = x_lo + h * i;
        double v, d;
        curve.eval(xi, v, d);
        field.x[i] = xi;
        field.values[i] =
            mode_k == 0 ? axis_field_value(curve.family, v, d)
                        : translation_field_value(curve.family, xi, v, d);
    }
    if (mode_k == 0 && !curve.is_cylinder) {
        // Locate zeros: endpoint zeros plus refined sign changes.
        auto a = [&](double xq) {
            double v, d;
            curve.eval(xq, v, d);
            return axis_field_value(curve.family, v, d);
        };
        double scale = 0.0;
        for (double val : field.values) scale = std::max(scale, std::abs(val));
        const double tiny = 1e-9 * scale;
        int i = 0;
        while (i < nodes) {
            if (std::abs(field.values[i]) <= tiny) {
                int j = i;
                while (j + 1 < nodes && std::abs(field.values[j + 1]) <= tiny) ++j;
                field.zeros.push_back(0.5 * (field.x[i] + field.x[j]));
                i = j + 1;
                continue;
            }
            if (i + 1 < nodes && std::abs(field.values[i + 1]) > tiny &&
                (field.values[i] > 0) != (field.values[i + 1] > 0))
                field.zeros.push_back(bisect_root(a, field.x[i], field.x[i + 1]));
            ++i;
        }
    }
    if (mode_k == 1) {
        double lowest = field.values[0];
        for (double val : field.values) lowest = std::min(lowest, val);
        if (!(lowest > 0.0))
            throw internal_error("translation Jacobi field lost positivity");
    }
    return field;
}

} // namespace

ReducedGeometry delaunay_coefficients(const ProfileCurve& curve) {
    return delaunay_coefficients(curve, 0.0, curve.period, static_cast<int>(curve.x.size()));
}

ReducedGeometry delaunay_coefficients(const ProfileCurve& curve, double x_lo, double x_hi,
                                      int nodes) {
    auto shared = std::make_shared<ProfileCurve>(curve);
    const DelaunayFamily fam = curve.family;
    auto f = [shared, fam](double xq, double& A, double& B, double& V) {
        double v, d;
        shared->eval(xq, v, d);
        delaunay_abv(fam, v, d, A, B, V);
    };
    ReducedGeometry g =
        sampled_geometry(fam.n, x_lo, x_hi, nodes, f, GeometrySource::ExactDelaunay);
    g.family = fam;
    return g;
}

void rotation_curvatures(double r, double dr, double ddr, double& kappa_axial,
                         double& kappa_orbital) {
    const double one = 1.0 + dr * dr;
    kappa_axial = -ddr / (one * std::sqrt(one));
    kappa_orbital = 1.0 / (r * std::sqrt(one));
}

ReducedGeometry rotation_coefficients(const RadiusField& radius, int n, double x_lo, double x_hi,
                                      int nodes) {
    auto f = [radius, n](double xq, double& A, double& B, double& V) {
        double r, dr, ddr;
        radius(xq, r, dr, ddr);
        if (!(r > 0.0)) throw domain_error("rotation profile radius must stay positive");
        double k1, k2;
        rotation_curvatures(r, dr, ddr, k1, k2);
        A = std::sqrt(1.0 + dr * dr);
        B = r;
        V = k1 * k1 + (n - 1) * k2 * k2;
    };
    return sampled_geometry(n, x_lo, x_hi, nodes, f, GeometrySource::PerturbedProfile);
}

ReducedGeometry rotation_coefficients(const std::vector<RotationSample>& samples, int n) {
    if (samples.size() < 2) throw domain_error("rotation profiles need at least 2 samples");
    for (const auto& s : samples)
        if (!(s.r > 0.0)) throw domain_error("rotation profile radius must stay positive");
    auto data = std::make_shared<std::vector<RotationSample>>(samples);
    const double x_lo = samples.front().x, x_hi = samples.back().x;
    const double h = (x_hi - x_lo) / static_cast<double>(samples.size() - 1);
    RadiusField radius = [data, x_lo, h](double xq, double& r, double& dr, double& ddr) {
        const auto& v = *data;
        int i = static_cast<int>((xq - x_lo) / h);
        i = std::clamp(i, 0, static_cast<int>(v.size()) - 2);
        const double t = (xq - v[i].x) / h;
        const Quintic q{v[i].r, v[i].dr, v[i].ddr, v[i + 1].r, v[i + 1].dr, v[i + 1].ddr, h};
        r = q.value(t);
        dr = q.deriv(t);
        ddr = q.second(t);
    };
    return rotation_coefficients(radius, n, x_lo, x_hi, static_cast<int>(samples.size()));
}

ReducedGeometry perturb_coefficients(const ReducedGeometry& base,
                                     const std::function<double(double)>& rel_delta_ab,
                                     const std::function<double(double)>& shift_v) {
    if (!base.sample) throw domain_error("base geometry has no resampler");
    auto inner = base.sample;
    auto f = [inner, rel_delta_ab, shift_v](double xq, double& A, double& B, double& V) {
        inner(xq, A, B, V);
        const double d = rel_delta_ab(xq);
        A *= 1.0 + d;
        B *= 1.0 + d;
        V += shift_v(xq);
    };
    ReducedGeometry g = sampled_geometry(base.n, base.x_lo, base.x_hi,
                                         static_cast<int>(base.size()), f,
                                         GeometrySource::PerturbedProfile);
    return g;
}

JacobiField axis_jacobi_field(const ProfileCurve& curve) {
    return build_field(curve, 0.0, curve.period, static_cast<int>(curve.x.size()), 0);
}

JacobiField axis_jacobi_field(const ProfileCurve& curve, double x_lo, double x_hi, int nodes) {
    return build_field(curve, x_lo, x_hi, nodes, 0);
}

JacobiField translation_jacobi_field(const ProfileCurve& curve) {
    return build_field(curve, 0.0, curve.period, static_cast<int>(curve.x.size()), 1);
}

JacobiField translation_jacobi_field(const ProfileCurve& curve, double x_lo, double x_hi,
                                     int nodes) {
    return build_field(curve, x_lo, x_hi, nodes, 1);
}

double potential_bounds(const ReducedGeometry& geom) {
    double sup = 0.0;
    for (std::size_t i = 0; i < geom.size(); ++i)
        sup = std::max(sup, geom.B[i] * geom.B[i] * geom.V[i]);
    if (geom.source == GeometrySource::ExactDelaunay && geom.family &&
        geom.family->space == Space::Euclidean) {
        const double cap = static_cast<double>(geom.n) * geom.n;
        if (sup > cap + 1e-9)
            throw internal_error("sup(B^2 V) exceeded n^2 on an exact Euclidean geometry");
    }
    return sup;
}

void write_coefficients_csv(const ReducedGeometry& geom, std::ostream& out) {
    out << "x,A,B,V\n";
    char buf[160];
    for (std::size_t i = 0; i < geom.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", geom.x[i], geom.A[i],
                      geom.B[i], geom.V[i]);
        out << buf;
    }
}

} // namespace delidx
