#include "coopnorm/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "coopnorm/econ.hpp"
#include "coopnorm/errors.hpp"
#include "coopnorm/parallel.hpp"

namespace coopnorm {

const char* to_string(SimRegime r) {
    switch (r) {
        case SimRegime::Cooperate: return "cooperate";
        case SimRegime::Deviate: return "deviate";
        case SimRegime::Autarky: return "autarky";
    }
    return "autarky";
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t replication_seed(std::uint64_t base, std::uint64_t replication, SimRegime regime, std::size_t type) {
    std::uint64_t h = mix64(base);
    h = mix64(h ^ static_cast<std::uint64_t>(regime));
    h = mix64(h ^ static_cast<std::uint64_t>(type));
    return mix64(h ^ replication);
}

std::size_t horizon_for_tolerance(double delta, double u_range, double tolerance) {
    if (!(delta >= 0.0 && delta < 1.0)) throw DomainError("delta must lie in [0,1)");
    if (!(tolerance > 0.0)) throw DomainError("truncation tolerance must be positive");
    if (delta == 0.0 || u_range <= 0.0) return 1;
    const double ratio = tolerance * (1.0 - delta) / u_range;
    if (ratio >= 1.0) return 1;
    auto t = static_cast<std::size_t>(std::ceil(std::log(ratio) / std::log(delta)));
    // Guard against rounding in the logarithms.
    while (std::pow(delta, static_cast<double>(t)) * u_range / (1.0 - delta) > tolerance) ++t;
    return std::max<std::size_t>(t, 1);
}

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// One step of the player-level chain: stay with 1-(n-1)m/n, otherwise move to
// one of the other n-1 positions uniformly.
class PositionStepper {
public:
    PositionStepper(std::size_t n, double m) : n_(n), process_{n, m} {}

    std::size_t next(std::size_t current, std::mt19937_64& rng) const {
        const double u = unit_uniform(rng);
        const double stay = process_.stay_probability();
        if (u < stay) return current;
        auto k = static_cast<std::size_t>((u - stay) / process_.move_probability());
        k = std::min(k, n_ - 2);
        return k < current ? k : k + 1;
    }

private:
    std::size_t n_;
    MobilityProcess process_;
};

void check_chain_args(std::size_t n, double m) {
    if (n < 2) throw DomainError("at least two players are required");
    if (!(m >= 0.0 && m <= 1.0)) throw DomainError("mobility m must lie in [0,1]");
}

}  // namespace

std::vector<std::size_t> simulate_positions(std::size_t n, double m, std::size_t start, std::size_t horizon,
                                            std::uint64_t seed) {
    check_chain_args(n, m);
    if (start >= n) throw DomainError("start position out of range");
    std::mt19937_64 rng(seed);
    const PositionStepper step(n, m);
    std::vector<std::size_t> path;
    path.reserve(horizon);
    std::size_t pos = start;
    for (std::size_t t = 0; t < horizon; ++t) {
        path.push_back(pos);
        pos = step.next(pos, rng);
    }
    return path;
}

std::vector<std::size_t> simulate_states(std::size_t n, double m, std::size_t start_state, std::size_t horizon,
                                         std::uint64_t seed) {
    check_chain_args(n, m);
    if (n > kMaxSimStatePlayers) {
        throw CapacityError("state-level simulation limited to n <= " + std::to_string(kMaxSimStatePlayers));
    }
    const Matrix p = state_transition_matrix(n, m);
    if (start_state >= p.size()) throw DomainError("start state out of range");
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> path;
    path.reserve(horizon);
    std::size_t s = start_state;
    for (std::size_t t = 0; t < horizon; ++t) {
        path.push_back(s);
        const double u = unit_uniform(rng);
        double acc = 0.0;
        std::size_t next = s;
        for (std::size_t c = 0; c < p.size(); ++c) {
            if (p(s, c) == 0.0) continue;
            acc += p(s, c);
            next = c;
            if (u < acc) break;
        }
        s = next;
    }
    return path;
}

SimEstimate estimate_value(SimRegime regime, const Scenario& s, std::size_t type, const SimConfig& cfg) {
    s.validate();
    if (type >= s.n()) throw DomainError("type index out of range");
    if (cfg.replications < 1) throw DomainError("at least one replication is required");
    const auto u = stage_utilities(s);
    const std::vector<double>& flow = regime == SimRegime::Cooperate ? u.coop : u.autarky;
    const double first = regime == SimRegime::Deviate ? u.deviation[type] : flow[type];

    double u_range = std::abs(first);
    for (double x : flow) u_range = std::max(u_range, std::abs(x));

    SimEstimate est;
    est.horizon = cfg.horizon > 0 ? cfg.horizon : horizon_for_tolerance(s.delta, u_range, cfg.truncation_tolerance);
    est.truncation_bound = s.delta == 0.0 ? 0.0
                                          : std::pow(s.delta, static_cast<double>(est.horizon)) * u_range /
                                                (1.0 - s.delta);

    const PositionStepper step(s.n(), s.m);
    auto replicate = [&](std::size_t r) {
        std::mt19937_64 rng(replication_seed(cfg.seed, r, regime, type));
        std::size_t pos = type;
        double total = first;
        double discount = 1.0;
        for (std::size_t t = 1; t < est.horizon; ++t) {
            pos = step.next(pos, rng);
            discount *= s.delta;
            total += discount * flow[pos];
        }
        return total;
    };

    // Blocks keep the per-replication results in index order, so the sums below
    // are identical for any worker count.
    constexpr std::size_t kBlock = 2048;
    const std::size_t blocks = (cfg.replications + kBlock - 1) / kBlock;
    const auto chunks = parallel_map(blocks, cfg.workers, [&](std::size_t b) {
        std::vector<double> out;
        const std::size_t end = std::min(cfg.replications, (b + 1) * kBlock);
        for (std::size_t r = b * kBlock; r < end; ++r) out.push_back(replicate(r));
        return out;
    });

    // Deviations from the first replication, summed with compensation, so
    // identical replications give their common value and a zero standard error.
    const double R = static_cast<double>(cfg.replications);
    const double shift = chunks.front().front();
    double sum = 0.0, carry = 0.0, squares = 0.0;
    for (const auto& c : chunks) {
        for (double x : c) {
            const double d = x - shift;
            const double t = sum + d;
            carry += std::abs(sum) >= std::abs(d) ? (sum - t) + d : (d - t) + sum;
            sum = t;
            squares += d * d;
        }
    }
    const double mean_dev = (sum + carry) / R;
    est.mean = shift + mean_dev;
    if (cfg.replications > 1) {
        const double var = std::max(0.0, (squares - R * mean_dev * mean_dev) / (R - 1.0));
        est.std_error = std::sqrt(var) / std::sqrt(R);
    }
    return est;
}

}  // namespace coopnorm
