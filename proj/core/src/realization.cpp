#include "qpperc/realization.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

#include "qpperc/csv.hpp"
#include "qpperc/rng.hpp"

namespace qpperc {

namespace {

std::uint64_t time_bits(double t) {
    std::uint64_t bits;
    std::memcpy(&bits, &t, sizeof bits);
    return bits;
}

void check_line(const std::vector<double>& line, const SpaceTimeBox& box, const char* what) {
    double prev = -std::numeric_limits<double>::infinity();
    for (double t : line) {
        if (!(t > box.t_lo && t < box.t_hi))
            throw std::invalid_argument(std::string(what) + " arrival outside the open window");
        if (!(t > prev))
            throw std::invalid_argument(std::string(what) + " arrivals not strictly increasing");
        prev = t;
    }
}

}  // namespace

Realization::Realization(SpaceTimeBox box, std::shared_ptr<const BoxGeometry> geometry,
                         std::vector<std::vector<double>> deaths,
                         std::vector<std::vector<double>> bonds)
    : box_(std::move(box)), geometry_(std::move(geometry)), deaths_(std::move(deaths)),
      bonds_(std::move(bonds)) {
    if (!geometry_) throw std::invalid_argument("Realization: null geometry");
    if (geometry_->center() != box_.center || geometry_->radius() != box_.radius)
        throw std::invalid_argument("Realization: geometry does not match the box");
    if (!(box_.t_lo <= box_.t_hi))
        throw std::invalid_argument("Realization: window must satisfy t_lo <= t_hi");
    if (deaths_.size() != geometry_->vertex_count() || bonds_.size() != geometry_->edges().size())
        throw std::invalid_argument("Realization: line count does not match the geometry");
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(2 * (death_count() + bond_count()));
    for (const auto& line : deaths_) {
        check_line(line, box_, "death");
        for (double t : line)
            if (!seen.insert(time_bits(t)).second)
                throw std::invalid_argument("Realization: duplicate arrival time");
    }
    for (const auto& line : bonds_) {
        check_line(line, box_, "bond");
        for (double t : line)
            if (!seen.insert(time_bits(t)).second)
                throw std::invalid_argument("Realization: duplicate arrival time");
    }
}

std::size_t Realization::death_count() const {
    std::size_t n = 0;
    for (const auto& line : deaths_) n += line.size();
    return n;
}

std::size_t Realization::bond_count() const {
    std::size_t n = 0;
    for (const auto& line : bonds_) n += line.size();
    return n;
}

namespace {

/// Exponential-gap walk along one line. Zero gaps (u == 0 draws) are
/// rejected so arrivals strictly increase.
void sample_line(std::vector<double>& out, double rate, const SpaceTimeBox& box,
                 std::uint64_t key) {
    if (rate == 0.0) return;
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw std::domain_error("sample_realization: line rate must be finite and >= 0");
    Xoshiro256pp rng(key);
    double t = box.t_lo;
    for (;;) {
        const double gap = -std::log1p(-rng.uniform()) / rate;
        if (!(gap > 0.0)) continue;
        t += gap;
        if (!(t < box.t_hi)) return;
        out.push_back(t);
    }
}

struct LineRef {
    double t;
    std::int32_t kind;  // 0 = death, 1 = bond
    std::int32_t line;
    std::int32_t pos;
};

/// Exact cross-line ties have probability zero but finite precision can
/// produce them; resolve by bumping the later arrival one ulp at a time,
/// dropping it if pushed past the window.
void separate_ties(std::vector<std::vector<double>>& deaths, std::vector<std::vector<double>>& bonds,
                   const SpaceTimeBox& box) {
    std::unordered_set<std::uint64_t> seen;
    bool tie = false;
    for (const auto* lines : {&deaths, &bonds}) {
        for (const auto& line : *lines)
            for (double t : line)
                if (!seen.insert(time_bits(t)).second) tie = true;
        if (tie) break;
    }
    if (!tie) return;

    std::vector<LineRef> refs;
    for (std::int32_t l = 0; l < static_cast<std::int32_t>(deaths.size()); ++l)
        for (std::int32_t i = 0; i < static_cast<std::int32_t>(deaths[l].size()); ++i)
            refs.push_back({deaths[l][i], 0, l, i});
    for (std::int32_t l = 0; l < static_cast<std::int32_t>(bonds.size()); ++l)
        for (std::int32_t i = 0; i < static_cast<std::int32_t>(bonds[l].size()); ++i)
            refs.push_back({bonds[l][i], 1, l, i});
    std::sort(refs.begin(), refs.end(), [](const LineRef& a, const LineRef& b) {
        return std::tie(a.t, a.kind, a.line, a.pos) < std::tie(b.t, b.kind, b.line, b.pos);
    });
    for (std::size_t i = 1; i < refs.size(); ++i)
        while (refs[i].t <= refs[i - 1].t)
            refs[i].t = std::nextafter(refs[i].t, std::numeric_limits<double>::infinity());

    for (auto& line : deaths) line.clear();
    for (auto& line : bonds) line.clear();
    for (const LineRef& r : refs) {
        if (!(r.t < box.t_hi)) continue;
        (r.kind == 0 ? deaths : bonds)[static_cast<std::size_t>(r.line)].push_back(r.t);
    }
}

}  // namespace

Realization sample_realization(const RateProvider& rates, const SpaceTimeBox& box,
                               std::shared_ptr<const BoxGeometry> geometry, std::uint64_t seed,
                               std::uint64_t trial) {
    if (!geometry || geometry->center() != box.center || geometry->radius() != box.radius)
        throw std::invalid_argument("sample_realization: geometry does not match the box");
    if (!(box.t_lo <= box.t_hi))
        throw std::invalid_argument("sample_realization: window must satisfy t_lo <= t_hi");
    const double kappa = rates.kappa();
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw std::domain_error("sample_realization: kappa must be positive finite");

    std::vector<std::vector<double>> deaths(geometry->vertex_count());
    std::vector<std::vector<double>> bonds(geometry->edges().size());
    for (std::size_t v = 0; v < geometry->vertex_count(); ++v) {
        const LatticePoint& x = geometry->vertices()[v];
        sample_line(deaths[v], rates.death_rate(x) / kappa, box,
                    line_stream_key(seed, trial, 0, x, -1));
    }
    for (std::size_t e = 0; e < geometry->edges().size(); ++e) {
        const EdgeId& u = geometry->edges()[e].edge;
        sample_line(bonds[e], kappa * rates.bond_rate(u), box,
                    line_stream_key(seed, trial, 1, u.base, u.axis));
    }
    separate_ties(deaths, bonds, box);
    return Realization(box, std::move(geometry), std::move(deaths), std::move(bonds));
}

Realization sample_realization(const RateProvider& rates, const SpaceTimeBox& box,
                               std::uint64_t seed, std::uint64_t trial) {
    return sample_realization(rates, box, BoxGeometry::create(box.center, box.radius), seed,
                              trial);
}

Realization sample_realization(const EnvironmentSpec& spec, const SpaceTimeBox& box,
                               std::uint64_t seed, std::uint64_t trial) {
    return sample_realization(EnvironmentRates(spec), box, seed, trial);
}

Realization add_bond(const Realization& r, const EdgeId& u, double t) {
    const std::int32_t e = r.geometry().edge_index(u);
    if (e < 0) throw std::invalid_argument("add_bond: edge not in the box");
    auto bonds = r.all_bonds();
    auto& line = bonds[static_cast<std::size_t>(e)];
    line.insert(std::upper_bound(line.begin(), line.end(), t), t);
    return Realization(r.box(), r.geometry_ptr(), r.all_deaths(), std::move(bonds));
}

Realization add_death(const Realization& r, const LatticePoint& x, double t) {
    const std::int32_t v = r.geometry().vertex_index(x);
    if (v < 0) throw std::invalid_argument("add_death: vertex not in the box");
    auto deaths = r.all_deaths();
    auto& line = deaths[static_cast<std::size_t>(v)];
    line.insert(std::upper_bound(line.begin(), line.end(), t), t);
    return Realization(r.box(), r.geometry_ptr(), std::move(deaths), r.all_bonds());
}

std::string Realization::dump() const {
    std::ostringstream out;
    out << "# box center";
    for (std::int64_t c : box_.center) out << ' ' << c;
    out << " radius " << box_.radius << " window " << csv::format_decimal(box_.t_lo) << ' '
        << csv::format_decimal(box_.t_hi) << '\n';
    for (std::size_t v = 0; v < deaths_.size(); ++v)
        for (double t : deaths_[v]) {
            out << 'D';
            for (std::int64_t c : geometry_->vertices()[v]) out << ' ' << c;
            out << ' ' << csv::format_decimal(t) << '\n';
        }
    for (std::size_t e = 0; e < bonds_.size(); ++e)
        for (double t : bonds_[e]) {
            out << 'B';
            const EdgeId& u = geometry_->edges()[e].edge;
            for (std::int64_t c : u.base) out << ' ' << c;
            out << ' ' << u.axis << ' ' << csv::format_decimal(t) << '\n';
        }
    return out.str();
}

Realization Realization::parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("realization parse: empty input");
    std::istringstream head(line);
    std::string tok, tok2;
    head >> tok >> tok2;
    if (tok != "#" || tok2 != "box")
        throw std::runtime_error("realization parse: missing box header");
    head >> tok;
    if (tok != "center") throw std::runtime_error("realization parse: malformed header");
    SpaceTimeBox box;
    while (head >> tok && tok != "radius") box.center.push_back(std::stoll(tok));
    if (tok != "radius" || box.center.empty())
        throw std::runtime_error("realization parse: malformed header");
    if (!(head >> box.radius)) throw std::runtime_error("realization parse: malformed radius");
    head >> tok;
    if (tok != "window" || !(head >> box.t_lo >> box.t_hi))
        throw std::runtime_error("realization parse: malformed window");

    auto geometry = BoxGeometry::create(box.center, box.radius);
    const std::size_t d = box.center.size();
    std::vector<std::vector<double>> deaths(geometry->vertex_count());
    std::vector<std::vector<double>> bonds(geometry->edges().size());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream rec(line);
        std::string kind;
        rec >> kind;
        LatticePoint pos(d);
        for (auto& c : pos)
            if (!(rec >> c))
                throw std::runtime_error("realization parse: bad record at line " +
                                         std::to_string(line_no));
        if (kind == "D") {
            double t;
            if (!(rec >> t))
                throw std::runtime_error("realization parse: bad time at line " +
                                         std::to_string(line_no));
            const std::int32_t v = geometry->vertex_index(pos);
            if (v < 0)
                throw std::runtime_error("realization parse: vertex outside box at line " +
                                         std::to_string(line_no));
            deaths[static_cast<std::size_t>(v)].push_back(t);
        } else if (kind == "B") {
            int axis;
            double t;
            if (!(rec >> axis >> t))
                throw std::runtime_error("realization parse: bad record at line " +
                                         std::to_string(line_no));
            const std::int32_t e = geometry->edge_index(EdgeId{pos, axis});
            if (e < 0)
                throw std::runtime_error("realization parse: edge outside box at line " +
                                         std::to_string(line_no));
            bonds[static_cast<std::size_t>(e)].push_back(t);
        } else {
            throw std::runtime_error("realization parse: unknown record kind at line " +
                                     std::to_string(line_no));
        }
    }
    for (auto& l : deaths) std::sort(l.begin(), l.end());
    for (auto& l : bonds) std::sort(l.begin(), l.end());
    return Realization(box, std::move(geometry), std::move(deaths), std::move(bonds));
}

}  // namespace qpperc
