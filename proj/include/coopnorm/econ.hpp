#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace coopnorm {

/// Dense row-major square matrix.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    /// Throws DomainError unless every row has as many entries as there are rows.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return n_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * n_, n_}; }

    double trace() const;
    bool operator==(const Matrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/**
 * Income shares of the n positions, ordered richest first.
 *
 * Shares follow a softmax over alpha * (n - i + 1), so adjacent shares differ by
 * a factor e^alpha and alpha = 0 is perfect equality.
 */
struct IncomeDistribution {
    std::size_t n = 0;
    double alpha = 0.0;
    std::vector<double> weights;

    static IncomeDistribution make(std::size_t n, double alpha);
};

/// Contribution rule: a member with income share w transfers the fraction w^beta.
struct ContributionNorm {
    double beta = 0.0;

    double share(double w) const;
};

/// CRRA utility; rho = 1 is the logarithmic member of the family.
struct Utility {
    double rho = 1.0;

    double operator()(double x) const;
    /// u(x + dx) - u(x) without cancellation.
    double gain(double x, double dx) const;
};

/// Exchange mobility: each period a player keeps its position with
/// probability 1 - (n-1)m/n and moves to each other position with m/n.
struct MobilityProcess {
    std::size_t n = 0;
    double m = 0.0;

    double stay_probability() const;
    double move_probability() const;
};

std::vector<double> income_weights(std::size_t n, double alpha);

double utility(double rho, double x);

/// u(x + dx) - u(x), accurate even when dx is tiny relative to x.
double utility_gain(double rho, double x, double dx);

double norm_share(double beta, double w);

Matrix position_transition_matrix(std::size_t n, double m);

/// Largest n accepted by state_transition_matrix (n! = 720 states).
inline constexpr std::size_t kMaxStatePlayers = 6;

/// Ranking states in lexicographic order. Each state lists, for every position
/// (richest first), the player occupying it.
std::vector<std::vector<std::size_t>> ranking_states(std::size_t n);

/**
 * Transition matrix over the n! ranking states.
 *
 * The state stays put with probability 1 - (n-1)m/n and moves with m/n to each
 * of the n-1 cyclic re-rankings of the current state, the re-rankings in which
 * every player changes position. For n = 3 these are exactly the two
 * derangements, so the matrix matches the classic 6x6 layout.
 */
Matrix state_transition_matrix(std::size_t n, double m);

/// (K - trace) / (K - 1) for a K x K row-stochastic matrix.
double prais_index(const Matrix& p);

}  // namespace coopnorm
