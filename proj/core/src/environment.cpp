#include "qpperc/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qpperc/csv.hpp"

namespace qpperc {

Matrix::Matrix(std::size_t r, std::size_t c, std::vector<double> d)
    : rows(r), cols(c), data(std::move(d)) {
    if (data.size() != rows * cols) throw std::invalid_argument("Matrix: size mismatch");
    for (double v : data)
        if (!std::isfinite(v)) throw std::invalid_argument("Matrix: non-finite entry");
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("Matrix: no rows");
    const std::size_t c = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * c);
    for (const auto& r : rows) {
        if (r.size() != c) throw std::invalid_argument("Matrix: ragged rows");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return Matrix(rows.size(), c, std::move(flat));
}

Matrix Matrix::zeros(std::size_t r, std::size_t c) {
    return Matrix(r, c, std::vector<double>(r * c, 0.0));
}

DiophantineCertificate diophantine_certificate(const Matrix& M, double zeta, std::int64_t N) {
    if (N < 1) throw std::invalid_argument("diophantine_certificate: N >= 1 required");
    if (!(zeta > 0.0)) throw std::invalid_argument("diophantine_certificate: zeta > 0 required");
    const std::size_t d = M.cols;
    const TorusPoint origin(std::vector<double>(M.rows, 0.0));

    DiophantineCertificate best;
    best.c_hat = std::numeric_limits<double>::infinity();
    std::int64_t best_norm = 0;

    const LatticePoint zero(d, 0);
    for (const LatticePoint& x : enumerate_ball(zero, N)) {
        const std::int64_t norm = l1_distance(x, zero);
        if (norm == 0) continue;
        std::vector<double> mx(M.rows, 0.0);
        for (std::size_t r = 0; r < M.rows; ++r)
            for (std::size_t c = 0; c < d; ++c) mx[r] += M(r, c) * static_cast<double>(x[c]);
        const double value =
            torus_distance(TorusPoint(std::move(mx)), origin) * std::pow(static_cast<double>(norm), zeta);
        // Ties resolve to the smallest norm, then the lexicographically
        // largest point, so one-dimensional witnesses come out positive.
        const bool better =
            value < best.c_hat ||
            (value == best.c_hat && (norm < best_norm || (norm == best_norm && x > best.witness)));
        if (better) {
            best.c_hat = value;
            best.witness = x;
            best_norm = norm;
        }
    }
    return best;
}

std::string ResonanceReport::to_csv() const {
    const std::size_t d = center.size();
    std::ostringstream out;
    std::vector<std::string> header{"kind"};
    for (std::size_t i = 0; i < d; ++i) header.push_back("x" + std::to_string(i + 1));
    header.push_back("rate");
    header.push_back("epsilon");
    csv::write_row(out, header);
    for (const ResonantSite& s : resonant_sites) {
        std::vector<std::string> row{"site"};
        for (std::int64_t c : s.x) row.push_back(csv::format_int(c));
        row.push_back(csv::format_decimal(s.delta));
        row.push_back(csv::format_decimal(epsilon));
        csv::write_row(out, row);
    }
    for (const ResonantEdge& e : resonant_edges) {
        std::vector<std::string> row{"edge"};
        for (double c : e.u.midpoint()) row.push_back(csv::format_decimal(c));
        row.push_back(csv::format_decimal(e.lambda));
        row.push_back(csv::format_decimal(epsilon));
        csv::write_row(out, row);
    }
    return out.str();
}

EnvironmentSpec::EnvironmentSpec(int d, std::vector<FieldComponent> components, double kappa,
                                 double zeta, double sigma)
    : d_(d), components_(std::move(components)), kappa_(kappa), zeta_(zeta), sigma_(sigma) {
    if (d_ < 1) throw std::invalid_argument("EnvironmentSpec: dimension >= 1 required");
    if (components_.size() != static_cast<std::size_t>(d_) + 1)
        throw std::invalid_argument("EnvironmentSpec: need d+1 field components");
    if (!(kappa_ > 0.0) || !std::isfinite(kappa_))
        throw std::invalid_argument("EnvironmentSpec: kappa must be positive finite");
    if (!(zeta_ > 0.0) || !(sigma_ > 0.0))
        throw std::invalid_argument("EnvironmentSpec: zeta and sigma must be positive");
    for (const FieldComponent& fc : components_) {
        if (fc.M.cols != static_cast<std::size_t>(d_))
            throw std::invalid_argument("EnvironmentSpec: matrix column count != d");
        if (fc.M.rows != fc.theta.dimension() || fc.M.rows != fc.h.dimension())
            throw std::invalid_argument("EnvironmentSpec: torus dimension mismatch");
    }
    r_vertex_ = static_cast<int>(components_[0].h.zero_count());
    for (int i = 1; i <= d_; ++i) r_edge_ += static_cast<int>(components_[i].h.zero_count());
}

EnvironmentSpec EnvironmentSpec::uniform(int d, double delta, double lambda, double kappa,
                                         double zeta, double sigma) {
    if (!(delta > 0.0)) throw std::invalid_argument("uniform environment: delta must be positive");
    if (lambda < 0.0) throw std::invalid_argument("uniform environment: lambda must be >= 0");
    std::vector<FieldComponent> comps;
    comps.reserve(static_cast<std::size_t>(d) + 1);
    const TorusPoint origin(std::vector<double>{0.0});
    comps.push_back({Matrix::zeros(1, static_cast<std::size_t>(d)), origin,
                     SamplingFunction::constant(1, delta)});
    const double level =
        lambda > 0.0 ? 1.0 / lambda : std::numeric_limits<double>::infinity();
    for (int i = 1; i <= d; ++i)
        comps.push_back({Matrix::zeros(1, static_cast<std::size_t>(d)), origin,
                         SamplingFunction::constant(1, level)});
    return EnvironmentSpec(d, std::move(comps), kappa, zeta, sigma);
}

int EnvironmentSpec::resonance_capacity() const { return std::max(2, r_vertex_ + r_edge_); }

bool EnvironmentSpec::sigma_admissible() const {
    for (const FieldComponent& fc : components_)
        if (!fc.h.admissible_for(sigma_)) return false;
    return true;
}

TorusPoint EnvironmentSpec::shift(std::size_t i, const LatticePoint& x) const {
    if (i >= components_.size())
        throw std::invalid_argument("EnvironmentSpec::shift: component index out of range");
    if (x.size() != static_cast<std::size_t>(d_))
        throw std::invalid_argument("EnvironmentSpec::shift: lattice point dimension mismatch");
    const FieldComponent& fc = components_[i];
    std::vector<double> out(fc.M.rows);
    for (std::size_t r = 0; r < fc.M.rows; ++r) {
        double acc = fc.theta[r];
        for (std::size_t c = 0; c < fc.M.cols; ++c)
            acc += fc.M(r, c) * static_cast<double>(x[c]);
        out[r] = acc;
    }
    return TorusPoint(std::move(out));
}

double EnvironmentSpec::death_rate(const LatticePoint& x) const {
    const double v = components_[0].h.evaluate(shift(0, x));
    if (v == 0.0)
        throw std::domain_error("degenerate site: death field vanishes at " + format_point(x));
    return v;
}

double EnvironmentSpec::bond_rate(const EdgeId& u) const {
    if (u.axis < 0 || u.axis >= d_)
        throw std::invalid_argument("EnvironmentSpec::bond_rate: axis out of range");
    const std::size_t i = static_cast<std::size_t>(u.axis) + 1;
    const double v = components_[i].h.evaluate(shift(i, u.base));
    if (v == 0.0)
        throw std::domain_error("degenerate edge: bond rate diverges at " + format_edge(u));
    return 1.0 / v;
}

LocalDensity EnvironmentSpec::local_density(const LatticePoint& x) const {
    const double delta = death_rate(x);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int a = 0; a < d_; ++a) {
        LatticePoint below = x;
        below[static_cast<std::size_t>(a)] -= 1;
        for (const EdgeId& u : {EdgeId{x, a}, EdgeId{below, a}}) {
            const double lam = bond_rate(u);
            lo = std::min(lo, lam);
            hi = std::max(hi, lam);
        }
    }
    const double k2 = kappa_ * kappa_;
    return LocalDensity{k2 * hi / delta, k2 * lo / delta};
}

ResonanceReport EnvironmentSpec::scan_resonances(const LatticePoint& center, std::int64_t L,
                                                 double epsilon) const {
    if (L < 1) throw std::invalid_argument("scan_resonances: L >= 1 required");
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("scan_resonances: epsilon in (0,1) required");
    ResonanceReport report;
    report.epsilon = epsilon;
    report.center = center;
    report.radius = L;
    for (const LatticePoint& y : enumerate_ball(center, L)) {
        const double delta = components_[0].h.evaluate(shift(0, y));
        if (delta < epsilon) report.resonant_sites.push_back({y, delta});
        for (int a = 0; a < d_; ++a) {
            LatticePoint other = y;
            other[static_cast<std::size_t>(a)] += 1;
            if (l1_distance(other, center) > L) continue;
            const std::size_t i = static_cast<std::size_t>(a) + 1;
            const double v = components_[i].h.evaluate(shift(i, y));
            if (v < epsilon) {
                const double lam = v == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / v;
                report.resonant_edges.push_back({EdgeId{y, a}, lam});
            }
        }
    }
    return report;
}

}  // namespace qpperc
