#include "coopnorm/econ.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "coopnorm/errors.hpp"

namespace coopnorm {

namespace {

void require_mobility(double m) {
    if (!(m >= 0.0 && m <= 1.0)) {
        throw DomainError("mobility m must lie in [0,1], got " + std::to_string(m));
    }
}

void require_players(std::size_t n) {
    if (n < 2) throw DomainError("at least two players are required");
}

}  // namespace

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix out(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows.size()) throw DomainError("matrix is not square");
        for (std::size_t c = 0; c < rows.size(); ++c) out(r, c) = rows[r][c];
    }
    return out;
}

double Matrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

IncomeDistribution IncomeDistribution::make(std::size_t n, double alpha) {
    return {n, alpha, income_weights(n, alpha)};
}

double ContributionNorm::share(double w) const { return norm_share(beta, w); }

double Utility::operator()(double x) const { return utility(rho, x); }
double Utility::gain(double x, double dx) const { return utility_gain(rho, x, dx); }

double MobilityProcess::stay_probability() const {
    return 1.0 - static_cast<double>(n - 1) * m / static_cast<double>(n);
}

double MobilityProcess::move_probability() const { return m / static_cast<double>(n); }

std::vector<double> income_weights(std::size_t n, double alpha) {
    require_players(n);
    if (!std::isfinite(alpha) || alpha < 0.0) {
        throw DomainError("inequality alpha must be finite and non-negative");
    }
    // Exponents alpha*(n-i+1) for i = 1..n; the largest belongs to position 1.
    std::vector<double> w(n);
    const double top = alpha * static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double exponent = alpha * static_cast<double>(n - i);
        w[i] = std::exp(exponent - top);
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= total;
    return w;
}

double utility(double rho, double x) {
    if (!std::isfinite(rho) || rho < 0.0) throw DomainError("utility curvature rho must be finite and >= 0");
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("utility requires strictly positive consumption, got " + std::to_string(x));
    }
    if (rho == 1.0) return std::log(x);
    const double k = 1.0 - rho;
    // expm1 keeps the branch continuous as rho -> 1.
    return std::expm1(k * std::log(x)) / k;
}

double utility_gain(double rho, double x, double dx) {
    // Evaluated for their argument checks only.
    utility(rho, x);
    utility(rho, x + dx);
    if (dx == 0.0) return 0.0;
    const double r = std::log1p(dx / x);
    if (rho == 1.0) return r;
    const double k = 1.0 - rho;
    return std::pow(x, k) * std::expm1(k * r) / k;
}

double norm_share(double beta, double w) {
    if (!std::isfinite(beta) || beta < 0.0) throw DomainError("norm progressivity beta must be finite and >= 0");
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError("income share must lie in [0,1], got " + std::to_string(w));
    if (beta == 0.0) return 1.0;
    if (w == 0.0) return 0.0;
    return std::pow(w, beta);
}

Matrix position_transition_matrix(std::size_t n, double m) {
    require_players(n);
    require_mobility(m);
    const MobilityProcess process{n, m};
    Matrix p(n, process.move_probability());
    for (std::size_t i = 0; i < n; ++i) p(i, i) = process.stay_probability();
    return p;
}

std::vector<std::vector<std::size_t>> ranking_states(std::size_t n) {
    require_players(n);
    if (n > kMaxStatePlayers) {
        throw CapacityError("ranking state space limited to n <= " + std::to_string(kMaxStatePlayers) +
                            " (n! = 720 states)");
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<std::size_t>> states;
    do {
        states.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return states;
}

namespace {

// Lehmer rank of a permutation in lexicographic order.
std::size_t permutation_rank(const std::vector<std::size_t>& perm) {
    const std::size_t n = perm.size();
    std::size_t rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t smaller = 0;
        for (std::size_t j = i + 1; j < n; ++j) smaller += perm[j] < perm[i] ? 1 : 0;
        std::size_t fact = 1;
        for (std::size_t k = 2; k <= n - 1 - i; ++k) fact *= k;
        rank += smaller * fact;
    }
    return rank;
}

}  // namespace

Matrix state_transition_matrix(std::size_t n, double m) {
    require_mobility(m);
    const auto states = ranking_states(n);
    const MobilityProcess process{n, m};
    Matrix p(states.size());
    std::vector<std::size_t> next(n);
    for (std::size_t s = 0; s < states.size(); ++s) {
        p(s, s) = process.stay_probability();
        for (std::size_t shift = 1; shift < n; ++shift) {
            // The player at position k moves to position k + shift (mod n).
            for (std::size_t k = 0; k < n; ++k) next[(k + shift) % n] = states[s][k];
            p(s, permutation_rank(next)) += process.move_probability();
        }
    }
    return p;
}

double prais_index(const Matrix& p) {
    const std::size_t k = p.size();
    if (k < 2) throw DomainError("Prais index needs a square matrix with at least 2 states");
    for (std::size_t r = 0; r < k; ++r) {
        double sum = 0.0;
        for (double x : p.row(r)) {
            if (x < 0.0) throw DomainError("transition matrix has a negative entry");
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw DomainError("transition matrix is not row-stochastic");
    }
    const double kd = static_cast<double>(k);
    return (kd - p.trace()) / (kd - 1.0);
}

}  // namespace coopnorm
