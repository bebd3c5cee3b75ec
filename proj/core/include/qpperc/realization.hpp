#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qpperc/environment.hpp"
#include "qpperc/lattice.hpp"

namespace qpperc {

/// Box geometry Lambda_L(center) crossed with the open time window
/// (t_lo, t_hi). t_lo == t_hi is the degenerate empty window.
struct SpaceTimeBox {
    LatticePoint center;
    std::int64_t radius = 1;
    double t_lo = 0.0;
    double t_hi = 0.0;

    double length() const { return t_hi - t_lo; }
    bool operator==(const SpaceTimeBox&) const = default;
};

/// Rate lookup used by the sampler. EnvironmentSpec provides the
/// quasiperiodic fields; tests substitute table-backed rates.
class RateProvider {
  public:
    virtual ~RateProvider() = default;
    virtual double death_rate(const LatticePoint& x) const = 0;
    virtual double bond_rate(const EdgeId& u) const = 0;
    virtual double kappa() const = 0;
};

/// Non-owning adapter; the environment must outlive the adapter.
class EnvironmentRates final : public RateProvider {
  public:
    explicit EnvironmentRates(const EnvironmentSpec& spec) : spec_(&spec) {}
    double death_rate(const LatticePoint& x) const override { return spec_->death_rate(x); }
    double bond_rate(const EdgeId& u) const override { return spec_->bond_rate(u); }
    double kappa() const override { return spec_->kappa(); }

  private:
    const EnvironmentSpec* spec_;
};

/// One sampled configuration: sorted death arrivals per vertex line and
/// bond arrivals per edge line, indexed by the geometry's canonical vertex
/// and edge order. Immutable; all arrival times lie strictly inside the
/// window, strictly increase along each line, and are globally pairwise
/// distinct (ties across lines are rejected at construction).
class Realization {
  public:
    Realization(SpaceTimeBox box, std::shared_ptr<const BoxGeometry> geometry,
                std::vector<std::vector<double>> deaths, std::vector<std::vector<double>> bonds);

    const SpaceTimeBox& box() const { return box_; }
    const BoxGeometry& geometry() const { return *geometry_; }
    const std::shared_ptr<const BoxGeometry>& geometry_ptr() const { return geometry_; }

    const std::vector<double>& deaths(std::size_t vertex_index) const {
        return deaths_[vertex_index];
    }
    const std::vector<double>& bonds(std::size_t edge_index) const { return bonds_[edge_index]; }
    const std::vector<std::vector<double>>& all_deaths() const { return deaths_; }
    const std::vector<std::vector<double>>& all_bonds() const { return bonds_; }

    std::size_t death_count() const;
    std::size_t bond_count() const;

    /// Line-oriented text dump, one record per arrival, 17-significant-digit
    /// times; parse() round-trips it exactly.
    std::string dump() const;
    static Realization parse(const std::string& text);

  private:
    SpaceTimeBox box_;
    std::shared_ptr<const BoxGeometry> geometry_;
    std::vector<std::vector<double>> deaths_;
    std::vector<std::vector<double>> bonds_;
};

/// Independent homogeneous Poisson processes: rate death_rate(x)/kappa on
/// each vertex line, kappa*bond_rate(u) on each edge line. Deterministic
/// function of (rates, box, seed, trial); distinct trials use disjoint
/// streams. `geometry` must match box.center/box.radius (pass it to share
/// the layout across trials).
Realization sample_realization(const RateProvider& rates, const SpaceTimeBox& box,
                               std::shared_ptr<const BoxGeometry> geometry, std::uint64_t seed,
                               std::uint64_t trial);
Realization sample_realization(const RateProvider& rates, const SpaceTimeBox& box,
                               std::uint64_t seed, std::uint64_t trial);
Realization sample_realization(const EnvironmentSpec& spec, const SpaceTimeBox& box,
                               std::uint64_t seed, std::uint64_t trial);

/// Copy with one extra bond (resp. death) arrival inserted in sorted
/// position. The time must lie in the open window and differ from every
/// existing arrival; violations are rejected. Supports monotone-coupling
/// tests: bonds only ever merge clusters, deaths only ever split them.
Realization add_bond(const Realization& r, const EdgeId& u, double t);
Realization add_death(const Realization& r, const LatticePoint& x, double t);

}  // namespace qpperc
